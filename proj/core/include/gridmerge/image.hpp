/*
 * Copyright 2026 The GridMerge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GRIDMERGE_IMAGE_HPP_
#define GRIDMERGE_IMAGE_HPP_

#include <vector>

namespace gridmerge {

// Dense scalar image, row-major doubles. Pixel (x, y) covers grid cell
// (x, y); its center in cell units is (x + 0.5, y + 0.5).
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> px;

  Image() = default;
  Image(int w, int h, double fill = 0.0)
      : width(w), height(h), px(static_cast<std::size_t>(w) * h, fill) {}

  double at(int x, int y) const {
    return px[static_cast<std::size_t>(y) * width + x];
  }
  double& at(int x, int y) {
    return px[static_cast<std::size_t>(y) * width + x];
  }
};

// Separable Gaussian blur, kernel radius ceil(4*sigma), clamped borders.
Image gaussian_blur(const Image& in, double sigma);

// Keeps pixels at even indices; out(x, y) = in(2x, 2y).
Image downsample2(const Image& in);

}  // namespace gridmerge

#endif  // GRIDMERGE_IMAGE_HPP_

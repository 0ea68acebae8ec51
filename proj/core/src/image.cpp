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

#include "gridmerge/image.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace gridmerge {

namespace {

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
    kernel[i + radius] = v;
    sum += v;
  }
  for (double& v : kernel) {
    v /= sum;
  }
  return kernel;
}

}  // namespace

Image gaussian_blur(const Image& in, double sigma) {
  if (sigma <= 0.0) {
    return in;
  }
  const std::vector<double> kernel = gaussian_kernel(sigma);
  const int radius = (static_cast<int>(kernel.size()) - 1) / 2;
  const int w = in.width;
  const int h = in.height;

  Image tmp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int xs = std::clamp(x + k, 0, w - 1);
        acc += kernel[k + radius] * in.at(xs, y);
      }
      tmp.at(x, y) = acc;
    }
  }
  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int ys = std::clamp(y + k, 0, h - 1);
        acc += kernel[k + radius] * tmp.at(x, ys);
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

Image downsample2(const Image& in) {
  const int w = std::max(1, in.width / 2);
  const int h = std::max(1, in.height / 2);
  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      out.at(x, y) = in.at(2 * x, 2 * y);
    }
  }
  return out;
}

}  // namespace gridmerge

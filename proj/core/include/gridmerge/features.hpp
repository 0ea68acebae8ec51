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

#ifndef GRIDMERGE_FEATURES_HPP_
#define GRIDMERGE_FEATURES_HPP_

#include <array>
#include <vector>

#include <Eigen/Core>

#include "gridmerge/grid_map.hpp"
#include "gridmerge/image.hpp"

namespace gridmerge {

// Scale-space keypoint. position is in cell units (same frame as edge
// points); scale is the detection sigma in cells; orientation is the
// dominant gradient direction in (-pi, pi]. octave/layer locate the
// pyramid level the keypoint was found on and drive descriptor sampling.
struct Keypoint {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  double scale = 1.6;
  double orientation = 0.0;
  int octave = 0;
  int layer = 1;
};

// 128-dimensional gradient-histogram descriptor; unit L2 norm unless the
// support window had zero gradient everywhere.
struct Descriptor {
  std::array<double, 128> values{};

  double squared_distance(const Descriptor& other) const {
    double s = 0.0;
    for (int i = 0; i < 128; ++i) {
      const double d = values[i] - other.values[i];
      s += d * d;
    }
    return s;
  }
};

struct FeatureMatch {
  int index_p = 0;
  int index_q = 0;
  double distance = 0.0;
};

// Occupied -> 1.0, Free -> 0.0, Unknown -> 0.5.
Image to_intensity(const OccupancyGrid& grid);

// Difference-of-Gaussians detector: 3 octaves, 3 scales per octave, base
// sigma 1.6, k = 2^(1/3). Extrema are sub-pixel refined; contrast below
// 0.01 and principal-curvature ratio above 10 are rejected. One keypoint
// per dominant orientation (36-bin histogram, parabolic peak
// interpolation); secondary peaks >= 0.8 * max emit extra keypoints.
// Throws ImageTooSmall for images under 16x16.
std::vector<Keypoint> detect_keypoints(const Image& image);

// 4x4 spatial grid x 8 orientation bins, gradients rotated into the
// keypoint frame, Gaussian-weighted, clamped at 0.2 and renormalized.
// Throws OutOfBounds when the support window leaves the image.
Descriptor describe(const Image& image, const Keypoint& keypoint);

// Union of P->Q and Q->P nearest-neighbor matches under the Lowe ratio
// test (0.8), deduplicated, sorted by distance then (index_p, index_q).
std::vector<FeatureMatch> match_bidirectional(
    const std::vector<Descriptor>& desc_p,
    const std::vector<Descriptor>& desc_q);

// Detects, describes, and drops keypoints whose support window leaves the
// image. Builds the pyramid once; keypoint order is detection order.
struct FeatureSet {
  std::vector<Keypoint> keypoints;
  std::vector<Descriptor> descriptors;
};
FeatureSet compute_features(const Image& image);

}  // namespace gridmerge

#endif  // GRIDMERGE_FEATURES_HPP_

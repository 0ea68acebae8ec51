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

#ifndef GRIDMERGE_PAIRWISE_HPP_
#define GRIDMERGE_PAIRWISE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gridmerge/features.hpp"
#include "gridmerge/grid_map.hpp"
#include "gridmerge/motion2d.hpp"

namespace gridmerge {

// Trimmed-ICP knobs. lambda penalizes small overlaps; xi_min bounds the
// overlap search from below.
struct TricpConfig {
  double lambda = 2.0;
  double xi_min = 0.2;
  int max_iterations = 100;
  double epsilon = 1e-8;
};

// Edge payload of the pose graph. motion maps points in map j's frame
// into map i's frame (so motion ~ M_i^-1 * M_j for globals M).
struct RelativeMotionEstimate {
  int i = 0;
  int j = 0;
  Motion2D motion;
  int inliers = 0;      // RANSAC true-match support
  double overlap = 1.0; // converged trim fraction, in (0, 1]
  double objective = 0.0;
};

// Least-squares rigid motion aligning src onto dst (equal lengths >= 2):
// centroids, 2x2 cross-covariance, SVD with reflection correction.
// Throws DegenerateInput when all src points coincide.
Motion2D estimate_rigid(const std::vector<Eigen::Vector2d>& src,
                        const std::vector<Eigen::Vector2d>& dst);

struct RansacResult {
  Motion2D motion;
  int inliers = 0;
};

// Two-match RANSAC over feature correspondences: the returned motion maps
// P keypoint locations onto Q keypoint locations and maximizes the number
// of matches within d_thr_feat. Deterministic in rng_seed; degenerate
// samples are re-drawn without consuming an iteration.
RansacResult ransac_initial_motion(const std::vector<FeatureMatch>& matches,
                                   const std::vector<Keypoint>& kp_p,
                                   const std::vector<Keypoint>& kp_q,
                                   double d_thr_feat, int iterations,
                                   std::uint64_t rng_seed);

struct TricpResult {
  Motion2D motion;      // maps p_edges into q_edges' frame
  double overlap = 1.0; // xi at the final iterate
  double objective = 0.0;
  int iterations = 0;
  std::vector<double> psi_trace;  // reported objective per iteration
};

// Trimmed ICP: alternates nearest-neighbor correspondence, overlap
// selection minimizing psi(n) = S(n) / (n * (n/Np)^(1+lambda)) over
// n in [ceil(xi_min*Np), Np], and a rigid update over the kept pairs,
// until |delta psi| < epsilon or max_iterations.
TricpResult tricp(const EdgePointSet& p_edges, const EdgePointSet& q_edges,
                  const Motion2D& init, const TricpConfig& config);

struct PairwiseParams {
  TricpConfig tricp;
  double d_thr_feat = 2.0;
  int ransac_iterations = 200;
  int min_inliers = 4;
};

// Per-map data reused across pairs.
struct MapFeatures {
  FeatureSet features;
  EdgePointSet edges;
};
MapFeatures prepare_map(const OccupancyGrid& grid);

// Full pairwise chain with the rejection stage exposed (for diagnostics):
// match features, RANSAC-initialize, gate on min_inliers, refine with
// TrICP. map i is the model (fixed), map j is the subject (moved), so the
// estimate's motion maps j-frame points into i's frame.
struct PairwiseOutcome {
  std::optional<RelativeMotionEstimate> estimate;
  std::string reject_stage;  // empty on success
  int n_matches = 0;
  int inliers = 0;
};
PairwiseOutcome pairwise_from_features(const MapFeatures& map_i,
                                       const MapFeatures& map_j, int i, int j,
                                       const PairwiseParams& params,
                                       std::uint64_t rng_seed);

// Convenience over two grids; absent when any stage rejects. Throws
// ResolutionMismatch only.
std::optional<RelativeMotionEstimate> pairwise_merge(
    const OccupancyGrid& map_i, const OccupancyGrid& map_j, int i, int j,
    const PairwiseParams& params, std::uint64_t rng_seed);

}  // namespace gridmerge

#endif  // GRIDMERGE_PAIRWISE_HPP_

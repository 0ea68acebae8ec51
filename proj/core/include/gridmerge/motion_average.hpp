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

#ifndef GRIDMERGE_MOTION_AVERAGE_HPP_
#define GRIDMERGE_MOTION_AVERAGE_HPP_

#include <vector>

#include <Eigen/Core>

#include "gridmerge/motion2d.hpp"
#include "gridmerge/pairwise.hpp"

namespace gridmerge {

// Stacked linear system of one 3-row block per reliable edge: the block
// row carries +I3 at column block (j-1) and -I3 at column block (i-1);
// blocks for the reference map (index 0) are omitted, leaving 3N-3
// unknowns.
struct StackedSystem {
  Eigen::MatrixXd d;  // 3R' x (3N-3) indicator matrix
  Eigen::VectorXd v;  // stacked residuals vec(log(M_i * Mhat_ij * M_j^-1))
};

// Throws EmptyEdgeSet; requires globals[0] == identity.
StackedSystem build_system(const std::vector<RelativeMotionEstimate>& edges,
                           const std::vector<Motion2D>& globals, int n_maps);

// Least-squares solution via a rank-revealing factorization. Throws
// RankDeficient when the edges cannot pin all maps (non-spanning set).
Eigen::VectorXd solve_increments(const StackedSystem& system);

struct MotionAverageResult {
  std::vector<Motion2D> globals;
  int sweeps = 0;
  bool converged = false;
};

// Iterates build -> solve -> left-composed per-map updates (batch, using
// the pre-sweep globals) until ||increments||_2 < epsilon or max_sweeps.
// The reference map is never updated. A non-converged run still returns
// the refined globals, flagged.
MotionAverageResult motion_average(
    std::vector<Motion2D> init_globals,
    const std::vector<RelativeMotionEstimate>& reliable_edges,
    double epsilon = 1e-10, int max_sweeps = 100);

}  // namespace gridmerge

#endif  // GRIDMERGE_MOTION_AVERAGE_HPP_

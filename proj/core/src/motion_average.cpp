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

#include "gridmerge/motion_average.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "gridmerge/errors.hpp"
#include "gridmerge/se2.hpp"

namespace gridmerge {

StackedSystem build_system(const std::vector<RelativeMotionEstimate>& edges,
                           const std::vector<Motion2D>& globals, int n_maps) {
  if (edges.empty()) {
    throw EmptyEdgeSet("motion averaging needs at least one edge");
  }
  if (static_cast<int>(globals.size()) != n_maps || n_maps < 2) {
    throw std::invalid_argument("need one global motion per map, N >= 2");
  }
  if (std::abs(globals[0].theta) > 1e-12 || globals[0].t.norm() > 1e-12) {
    throw std::invalid_argument("reference global motion must be identity");
  }

  const int rows = 3 * static_cast<int>(edges.size());
  const int cols = 3 * (n_maps - 1);
  StackedSystem sys;
  sys.d = Eigen::MatrixXd::Zero(rows, cols);
  sys.v = Eigen::VectorXd::Zero(rows);

  for (int r = 0; r < static_cast<int>(edges.size()); ++r) {
    const RelativeMotionEstimate& e = edges[r];
    const Motion2D residual =
        globals[e.i] * e.motion * globals[e.j].inverse();
    sys.v.segment<3>(3 * r) = vec(se2_log(residual));
    // +I3 at column block (j-1); -I3 at (i-1); the reference map's block
    // is excluded from the unknowns.
    sys.d.block<3, 3>(3 * r, 3 * (e.j - 1)) = Eigen::Matrix3d::Identity();
    if (e.i > 0) {
      sys.d.block<3, 3>(3 * r, 3 * (e.i - 1)) =
          -Eigen::Matrix3d::Identity();
    }
  }
  return sys;
}

Eigen::VectorXd solve_increments(const StackedSystem& system) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(system.d);
  if (qr.rank() < system.d.cols()) {
    throw RankDeficient("indicator matrix is rank deficient; the edge set "
                        "does not span all maps");
  }
  return qr.solve(system.v);
}

MotionAverageResult motion_average(
    std::vector<Motion2D> init_globals,
    const std::vector<RelativeMotionEstimate>& reliable_edges, double epsilon,
    int max_sweeps) {
  const int n = static_cast<int>(init_globals.size());
  MotionAverageResult result;
  result.globals = std::move(init_globals);

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    const StackedSystem sys =
        build_system(reliable_edges, result.globals, n);
    const Eigen::VectorXd increments = solve_increments(sys);
    // Batch update from the pre-sweep globals; map 0 stays pinned.
    for (int i = 1; i < n; ++i) {
      const Se2Vector delta = rvec(increments.segment<3>(3 * (i - 1)));
      result.globals[i] = se2_exp(delta) * result.globals[i];
    }
    result.sweeps = sweep;
    if (increments.norm() < epsilon) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace gridmerge

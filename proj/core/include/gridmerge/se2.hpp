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

#ifndef GRIDMERGE_SE2_HPP_
#define GRIDMERGE_SE2_HPP_

#include <Eigen/Core>

#include "gridmerge/motion2d.hpp"

namespace gridmerge {

// Lie-algebra element of SE(2): rotation generator coefficient omega and
// translation generator coefficients u.
struct Se2Vector {
  double omega = 0.0;
  Eigen::Vector2d u = Eigen::Vector2d::Zero();
};

// Closed-form logarithm on the principal branch: omega = theta,
// u = V(theta)^-1 * t, with a series fallback below |theta| = 1e-6.
Se2Vector se2_log(const Motion2D& m);

// Closed-form exponential: theta = wrap(omega), t = V(omega) * u.
Motion2D se2_exp(const Se2Vector& v);

// (omega, u1, u2) column ordering; rvec is the exact inverse.
Eigen::Vector3d vec(const Se2Vector& v);
Se2Vector rvec(const Eigen::Vector3d& v);

}  // namespace gridmerge

#endif  // GRIDMERGE_SE2_HPP_

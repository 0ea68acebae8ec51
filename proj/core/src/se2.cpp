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

#include "gridmerge/se2.hpp"

#include <cmath>

namespace gridmerge {

namespace {

constexpr double kSeriesSwitch = 1e-6;

// V(theta) = [[a, -b], [b, a]] with a = sin(theta)/theta and
// b = (1 - cos(theta))/theta; the series below the switch point keeps the
// map smooth through theta = 0.
void v_coefficients(double theta, double& a, double& b) {
  if (std::abs(theta) < kSeriesSwitch) {
    const double t2 = theta * theta;
    a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    b = theta * 0.5 - theta * t2 / 24.0 + theta * t2 * t2 / 720.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta;
  }
}

}  // namespace

Se2Vector se2_log(const Motion2D& m) {
  double a = 0.0;
  double b = 0.0;
  v_coefficients(m.theta, a, b);
  const double det = a * a + b * b;
  Se2Vector v;
  v.omega = m.theta;
  v.u.x() = (a * m.t.x() + b * m.t.y()) / det;
  v.u.y() = (-b * m.t.x() + a * m.t.y()) / det;
  return v;
}

Motion2D se2_exp(const Se2Vector& v) {
  double a = 0.0;
  double b = 0.0;
  v_coefficients(v.omega, a, b);
  const Eigen::Vector2d t(a * v.u.x() - b * v.u.y(),
                          b * v.u.x() + a * v.u.y());
  return Motion2D(v.omega, t);
}

Eigen::Vector3d vec(const Se2Vector& v) {
  return Eigen::Vector3d(v.omega, v.u.x(), v.u.y());
}

Se2Vector rvec(const Eigen::Vector3d& v) {
  Se2Vector s;
  s.omega = v(0);
  s.u = Eigen::Vector2d(v(1), v(2));
  return s;
}

}  // namespace gridmerge

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

#ifndef GRIDMERGE_MOTION2D_HPP_
#define GRIDMERGE_MOTION2D_HPP_

#include <cmath>

#include <Eigen/Core>

namespace gridmerge {

// Wraps an angle to the principal branch (-pi, pi].
inline double wrap_angle(double theta) {
  constexpr double kPi = 3.141592653589793238462643383279502884;
  if (theta > -kPi && theta <= kPi) {
    return theta;
  }
  double r = std::remainder(theta, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) {
    r += 2.0 * kPi;
  }
  return r;
}

// A rigid motion of the plane: rotation by theta followed by translation.
// Angles live on the principal branch (-pi, pi]; translations are in cell
// units throughout registration.
struct Motion2D {
  double theta = 0.0;
  Eigen::Vector2d t = Eigen::Vector2d::Zero();

  Motion2D() = default;
  Motion2D(double theta_in, const Eigen::Vector2d& t_in)
      : theta(wrap_angle(theta_in)), t(t_in) {}
  Motion2D(double theta_in, double tx, double ty)
      : theta(wrap_angle(theta_in)), t(tx, ty) {}

  static Motion2D identity() { return Motion2D(); }

  Eigen::Matrix2d rotation() const {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Eigen::Matrix2d r;
    r << c, -s, s, c;
    return r;
  }

  // 3x3 homogeneous form, rotation block top-left, translation last column.
  Eigen::Matrix3d matrix() const {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m.topLeftCorner<2, 2>() = rotation();
    m.topRightCorner<2, 1>() = t;
    return m;
  }

  Eigen::Vector2d apply(const Eigen::Vector2d& p) const {
    return rotation() * p + t;
  }

  Motion2D inverse() const {
    const Eigen::Matrix2d r = rotation();
    return Motion2D(-theta, -(r.transpose() * t));
  }

  // Composition: (a * b)(p) == a(b(p)).
  friend Motion2D operator*(const Motion2D& a, const Motion2D& b) {
    return Motion2D(a.theta + b.theta, a.rotation() * b.t + a.t);
  }
};

}  // namespace gridmerge

#endif  // GRIDMERGE_MOTION2D_HPP_

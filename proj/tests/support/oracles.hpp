// Independent reference implementations used to freeze expected values.
// Everything here deliberately avoids the library's own code paths:
// nearest neighbors by linear scan, connectivity by breadth-first search,
// the matrix logarithm by inverse scaling-and-squaring with a power
// series, and rigid fitting by objective grid search.

#ifndef GRIDMERGE_TESTS_SUPPORT_ORACLES_HPP_
#define GRIDMERGE_TESTS_SUPPORT_ORACLES_HPP_

#include <cmath>
#include <deque>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace gridmerge_test {

struct BruteNearest {
  int index = -1;
  double sq_dist = std::numeric_limits<double>::infinity();
};

inline BruteNearest brute_force_nearest(
    const std::vector<Eigen::Vector2d>& points, const Eigen::Vector2d& q) {
  BruteNearest best;
  for (int k = 0; k < static_cast<int>(points.size()); ++k) {
    const double d = (points[k] - q).squaredNorm();
    if (d < best.sq_dist) {
      best.sq_dist = d;
      best.index = k;
    }
  }
  return best;
}

inline bool bfs_connected(const std::vector<std::pair<int, int>>& edges,
                          int n) {
  if (n <= 0) {
    return false;
  }
  std::vector<std::vector<int>> adj(n);
  for (const auto& [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<bool> visited(n, false);
  std::deque<int> queue{0};
  visited[0] = true;
  int seen = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : adj[v]) {
      if (!visited[w]) {
        visited[w] = true;
        ++seen;
        queue.push_back(w);
      }
    }
  }
  return seen == n;
}

// Principal matrix square root by the Denman-Beavers iteration.
inline Eigen::Matrix3d matrix_sqrt(const Eigen::Matrix3d& a) {
  Eigen::Matrix3d y = a;
  Eigen::Matrix3d z = Eigen::Matrix3d::Identity();
  for (int it = 0; it < 60; ++it) {
    const Eigen::Matrix3d y_next = 0.5 * (y + z.inverse());
    const Eigen::Matrix3d z_next = 0.5 * (z + y.inverse());
    y = y_next;
    z = z_next;
  }
  return y;
}

// log(A) via repeated square roots until ||A - I|| is small, then a
// 30-term power series of log(I + X), scaled back by 2^s.
inline Eigen::Matrix3d matrix_log_series(Eigen::Matrix3d a) {
  int scalings = 0;
  while ((a - Eigen::Matrix3d::Identity()).norm() > 0.25 && scalings < 40) {
    a = matrix_sqrt(a);
    ++scalings;
  }
  const Eigen::Matrix3d x = a - Eigen::Matrix3d::Identity();
  Eigen::Matrix3d term = x;
  Eigen::Matrix3d sum = Eigen::Matrix3d::Zero();
  for (int k = 1; k <= 30; ++k) {
    sum += (k % 2 == 1 ? 1.0 : -1.0) / k * term;
    term = term * x;
  }
  return std::pow(2.0, scalings) * sum;
}

inline double rigid_objective(const std::vector<Eigen::Vector2d>& src,
                              const std::vector<Eigen::Vector2d>& dst,
                              double theta, double tx, double ty) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  double sum = 0.0;
  for (std::size_t k = 0; k < src.size(); ++k) {
    const double x = c * src[k].x() - s * src[k].y() + tx - dst[k].x();
    const double y = s * src[k].x() + c * src[k].y() + ty - dst[k].y();
    sum += x * x + y * y;
  }
  return sum;
}

struct GridSearchResult {
  double best = std::numeric_limits<double>::infinity();
  double neighbor_step = 0.0;  // largest objective change one step away
};

// Exhaustive (theta, tx, ty) scan on a lattice centered at the given
// point; also reports the objective variation between the optimum and its
// axis neighbors, the natural "one grid step" comparison tolerance.
inline GridSearchResult rigid_grid_search(
    const std::vector<Eigen::Vector2d>& src,
    const std::vector<Eigen::Vector2d>& dst, double theta0, double tx0,
    double ty0, double half_range, double step) {
  GridSearchResult result;
  const int half = static_cast<int>(std::round(half_range / step));
  double best_theta = theta0;
  double best_tx = tx0;
  double best_ty = ty0;
  for (int a = -half; a <= half; ++a) {
    for (int b = -half; b <= half; ++b) {
      for (int c = -half; c <= half; ++c) {
        const double theta = theta0 + a * step;
        const double tx = tx0 + b * step;
        const double ty = ty0 + c * step;
        const double value = rigid_objective(src, dst, theta, tx, ty);
        if (value < result.best) {
          result.best = value;
          best_theta = theta;
          best_tx = tx;
          best_ty = ty;
        }
      }
    }
  }
  const double neighbors[6][3] = {
      {best_theta + step, best_tx, best_ty},
      {best_theta - step, best_tx, best_ty},
      {best_theta, best_tx + step, best_ty},
      {best_theta, best_tx - step, best_ty},
      {best_theta, best_tx, best_ty + step},
      {best_theta, best_tx, best_ty - step},
  };
  for (const auto& nb : neighbors) {
    const double value = rigid_objective(src, dst, nb[0], nb[1], nb[2]);
    result.neighbor_step = std::max(result.neighbor_step, value - result.best);
  }
  return result;
}

}  // namespace gridmerge_test

#endif

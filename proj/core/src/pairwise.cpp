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

#include "gridmerge/pairwise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "gridmerge/errors.hpp"
#include "gridmerge/kdtree2d.hpp"
#include "gridmerge/rng.hpp"

namespace gridmerge {

namespace {

void validate_config(const TricpConfig& c) {
  if (c.lambda < 0.0 || !(c.xi_min > 0.0 && c.xi_min <= 1.0) ||
      c.max_iterations < 1 || !(c.epsilon > 0.0)) {
    throw std::invalid_argument("invalid TricpConfig");
  }
}

}  // namespace

Motion2D estimate_rigid(const std::vector<Eigen::Vector2d>& src,
                        const std::vector<Eigen::Vector2d>& dst) {
  if (src.size() != dst.size() || src.size() < 2) {
    throw std::invalid_argument(
        "estimate_rigid needs two equally sized sets of >= 2 points");
  }
  const std::size_t n = src.size();

  Eigen::Vector2d mu_s = Eigen::Vector2d::Zero();
  Eigen::Vector2d mu_d = Eigen::Vector2d::Zero();
  for (std::size_t k = 0; k < n; ++k) {
    mu_s += src[k];
    mu_d += dst[k];
  }
  mu_s /= static_cast<double>(n);
  mu_d /= static_cast<double>(n);

  double spread = 0.0;
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::Vector2d s = src[k] - mu_s;
    const Eigen::Vector2d d = dst[k] - mu_d;
    spread = std::max(spread, s.squaredNorm());
    cov += d * s.transpose();
  }
  if (spread < 1e-20) {
    throw DegenerateInput("all source points coincide");
  }

  Eigen::JacobiSVD<Eigen::Matrix2d> svd(
      cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix2d u = svd.matrixU();
  Eigen::Matrix2d v = svd.matrixV();
  Eigen::Matrix2d s = Eigen::Matrix2d::Identity();
  if ((u * v.transpose()).determinant() < 0.0) {
    s(1, 1) = -1.0;  // exclude reflections
  }
  const Eigen::Matrix2d r = u * s * v.transpose();
  const double theta = std::atan2(r(1, 0), r(0, 0));
  const Eigen::Vector2d t = mu_d - Motion2D(theta, 0, 0).rotation() * mu_s;
  return Motion2D(theta, t);
}

RansacResult ransac_initial_motion(const std::vector<FeatureMatch>& matches,
                                   const std::vector<Keypoint>& kp_p,
                                   const std::vector<Keypoint>& kp_q,
                                   double d_thr_feat, int iterations,
                                   std::uint64_t rng_seed) {
  if (matches.size() < 2) {
    throw TooFewMatches("RANSAC needs at least two feature matches");
  }
  if (iterations < 1) {
    throw std::invalid_argument("RANSAC needs at least one iteration");
  }

  const int m = static_cast<int>(matches.size());
  const double thr_sq = d_thr_feat * d_thr_feat;
  Rng rng(rng_seed);

  RansacResult best;
  best.motion = Motion2D::identity();
  best.inliers = 0;

  std::vector<Eigen::Vector2d> src(2);
  std::vector<Eigen::Vector2d> dst(2);
  int evaluated = 0;
  // Degenerate samples are re-drawn without consuming an iteration; the
  // draw cap bounds the loop when every pair of source points coincides.
  long draws = 0;
  const long max_draws = 100L * iterations;
  while (evaluated < iterations && draws < max_draws) {
    ++draws;
    const int a = rng.next_int(0, m);
    int b = rng.next_int(0, m - 1);
    if (b >= a) {
      ++b;
    }
    src[0] = kp_p[matches[a].index_p].position;
    src[1] = kp_p[matches[b].index_p].position;
    dst[0] = kp_q[matches[a].index_q].position;
    dst[1] = kp_q[matches[b].index_q].position;

    Motion2D guess;
    try {
      guess = estimate_rigid(src, dst);
    } catch (const DegenerateInput&) {
      continue;
    }
    ++evaluated;

    const Eigen::Matrix2d r = guess.rotation();
    int count = 0;
    for (const FeatureMatch& match : matches) {
      const Eigen::Vector2d pred =
          r * kp_p[match.index_p].position + guess.t;
      if ((pred - kp_q[match.index_q].position).squaredNorm() <= thr_sq) {
        ++count;
      }
    }
    if (count > best.inliers) {
      best.inliers = count;
      best.motion = guess;
    }
  }
  return best;
}

TricpResult tricp(const EdgePointSet& p_edges, const EdgePointSet& q_edges,
                  const Motion2D& init, const TricpConfig& config) {
  validate_config(config);
  if (p_edges.size() < 10 || q_edges.size() < 10) {
    throw TooFewPoints("TrICP needs at least 10 points per edge set");
  }

  const int np = static_cast<int>(p_edges.size());
  const int n_min =
      std::max(2, static_cast<int>(std::ceil(config.xi_min * np)));
  const KdTree2D tree(q_edges);

  TricpResult result;
  result.motion = init;

  std::vector<double> sq_residuals(np);
  std::vector<int> order(np);
  std::vector<int> corr(np);
  std::vector<Eigen::Vector2d> sel_src;
  std::vector<Eigen::Vector2d> sel_dst;
  sel_src.reserve(np);
  sel_dst.reserve(np);

  double prev_psi = std::numeric_limits<double>::infinity();
  // One extra evaluation-only pass reports the objective of the returned
  // motion when the iteration budget runs out.
  for (int iter = 0; iter <= config.max_iterations; ++iter) {
    const bool evaluate_only = iter == config.max_iterations;
    const Eigen::Matrix2d r = result.motion.rotation();
    for (int k = 0; k < np; ++k) {
      const Eigen::Vector2d moved = r * p_edges[k] + result.motion.t;
      const KdTree2D::Result nn = tree.nearest(moved);
      sq_residuals[k] = nn.sq_dist;
      corr[k] = nn.index;
    }

    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (sq_residuals[a] != sq_residuals[b]) {
        return sq_residuals[a] < sq_residuals[b];
      }
      return a < b;
    });

    // psi(n) = S(n) / (n * (n/Np)^(1+lambda)); ties prefer the larger
    // overlap so that a perfect alignment reports xi = 1.
    double prefix = 0.0;
    for (int k = 0; k < n_min - 1; ++k) {
      prefix += sq_residuals[order[k]];
    }
    double best_psi = std::numeric_limits<double>::infinity();
    int best_n = n_min;
    for (int n = n_min; n <= np; ++n) {
      prefix += sq_residuals[order[n - 1]];
      const double ratio = static_cast<double>(n) / np;
      const double psi =
          prefix / (static_cast<double>(n) * std::pow(ratio, 1.0 + config.lambda));
      if (psi <= best_psi) {
        best_psi = psi;
        best_n = n;
      }
    }
    if (!std::isfinite(best_psi)) {
      throw NonFiniteObjective("TrICP objective is not finite");
    }

    result.overlap = static_cast<double>(best_n) / np;
    result.objective = best_psi;
    result.iterations = iter;
    result.psi_trace.push_back(best_psi);

    if (evaluate_only || std::abs(best_psi - prev_psi) < config.epsilon) {
      break;
    }
    prev_psi = best_psi;

    sel_src.clear();
    sel_dst.clear();
    for (int k = 0; k < best_n; ++k) {
      sel_src.push_back(p_edges[order[k]]);
      sel_dst.push_back(q_edges[corr[order[k]]]);
    }
    try {
      result.motion = estimate_rigid(sel_src, sel_dst);
    } catch (const DegenerateInput&) {
      break;  // coincident trim subset; keep the current motion
    }
  }
  return result;
}

MapFeatures prepare_map(const OccupancyGrid& grid) {
  MapFeatures mf;
  mf.features = compute_features(to_intensity(grid));
  mf.edges = extract_edge_points(grid);
  return mf;
}

PairwiseOutcome pairwise_from_features(const MapFeatures& map_i,
                                       const MapFeatures& map_j, int i, int j,
                                       const PairwiseParams& params,
                                       std::uint64_t rng_seed) {
  PairwiseOutcome out;
  // Map j is the subject (moved), map i the model, so the refined motion
  // maps j-frame points into i's frame.
  const std::vector<FeatureMatch> matches = match_bidirectional(
      map_j.features.descriptors, map_i.features.descriptors);
  out.n_matches = static_cast<int>(matches.size());
  if (matches.size() < 2) {
    out.reject_stage = "too few matches";
    return out;
  }
  const RansacResult ransac = ransac_initial_motion(
      matches, map_j.features.keypoints, map_i.features.keypoints,
      params.d_thr_feat, params.ransac_iterations, rng_seed);
  out.inliers = ransac.inliers;
  if (ransac.inliers < params.min_inliers) {
    out.reject_stage = "inlier gate";
    return out;
  }
  if (map_j.edges.size() < 10 || map_i.edges.size() < 10) {
    out.reject_stage = "too few edge points";
    return out;
  }
  TricpResult refined;
  try {
    refined = tricp(map_j.edges, map_i.edges, ransac.motion, params.tricp);
  } catch (const NonFiniteObjective&) {
    out.reject_stage = "tricp";
    return out;
  }
  RelativeMotionEstimate est;
  est.i = i;
  est.j = j;
  est.motion = refined.motion;
  est.inliers = ransac.inliers;
  est.overlap = refined.overlap;
  est.objective = refined.objective;
  out.estimate = est;
  return out;
}

std::optional<RelativeMotionEstimate> pairwise_merge(
    const OccupancyGrid& map_i, const OccupancyGrid& map_j, int i, int j,
    const PairwiseParams& params, std::uint64_t rng_seed) {
  if (map_i.resolution() != map_j.resolution()) {
    throw ResolutionMismatch("map pair has differing resolutions");
  }
  try {
    const MapFeatures fi = prepare_map(map_i);
    const MapFeatures fj = prepare_map(map_j);
    return pairwise_from_features(fi, fj, i, j, params, rng_seed).estimate;
  } catch (const ImageTooSmall&) {
    return std::nullopt;
  }
}

}  // namespace gridmerge

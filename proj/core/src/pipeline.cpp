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

#include "gridmerge/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <set>
#include <thread>

#include "gridmerge/kdtree2d.hpp"
#include "gridmerge/motion_average.hpp"
#include "gridmerge/rng.hpp"

namespace gridmerge {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

// Static index partition; slot writes keep results independent of the
// thread schedule.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (int k = 0; k < count; ++k) {
      fn(k);
    }
    return;
  }
  std::vector<std::thread> pool;
  const int used = std::min(threads, count);
  pool.reserve(used);
  for (int t = 0; t < used; ++t) {
    pool.emplace_back([&, t]() {
      for (int k = t; k < count; k += used) {
        fn(k);
      }
    });
  }
  for (std::thread& th : pool) {
    th.join();
  }
}

int resolve_threads(int hint) {
  if (hint > 0) {
    return hint;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

double trimmed_pair_error(const EdgePointSet& a, const EdgePointSet& b,
                          double overlap) {
  if (a.empty() || b.empty()) {
    return 0.0;
  }
  const EdgePointSet& small = a.size() <= b.size() ? a : b;
  const EdgePointSet& large = a.size() <= b.size() ? b : a;
  const KdTree2D tree(large);
  std::vector<double> dists;
  dists.reserve(small.size());
  for (const Eigen::Vector2d& p : small) {
    dists.push_back(std::sqrt(tree.nearest(p).sq_dist));
  }
  std::sort(dists.begin(), dists.end());
  const std::size_t keep = std::min(
      dists.size(),
      static_cast<std::size_t>(std::max<double>(
          1.0, std::ceil(overlap * static_cast<double>(dists.size())))));
  double sum = 0.0;
  for (std::size_t k = 0; k < keep; ++k) {
    sum += dists[k];
  }
  return sum / static_cast<double>(keep);
}

EdgePointSet transform_edges(const EdgePointSet& edges, const Motion2D& m) {
  EdgePointSet out;
  out.reserve(edges.size());
  const Eigen::Matrix2d r = m.rotation();
  for (const Eigen::Vector2d& p : edges) {
    out.push_back(r * p + m.t);
  }
  return out;
}

}  // namespace

double merging_error_edges(const std::vector<EdgePointSet>& edges,
                           const std::vector<Motion2D>& globals,
                           const std::vector<RelativeMotionEstimate>& pairs) {
  if (pairs.empty()) {
    return 0.0;
  }
  std::vector<EdgePointSet> moved(edges.size());
  std::vector<bool> have(edges.size(), false);
  double sum = 0.0;
  for (const RelativeMotionEstimate& e : pairs) {
    for (int idx : {e.i, e.j}) {
      if (!have[idx]) {
        moved[idx] = transform_edges(edges[idx], globals[idx]);
        have[idx] = true;
      }
    }
    sum += trimmed_pair_error(moved[e.i], moved[e.j], e.overlap);
  }
  return sum / static_cast<double>(pairs.size());
}

double merging_error(const std::vector<OccupancyGrid>& maps,
                     const std::vector<Motion2D>& globals,
                     const std::vector<RelativeMotionEstimate>& pairs) {
  std::vector<EdgePointSet> edges;
  edges.reserve(maps.size());
  for (const OccupancyGrid& m : maps) {
    edges.push_back(extract_edge_points(m));
  }
  return merging_error_edges(edges, globals, pairs);
}

GroundTruthErrors evaluate_vs_ground_truth(
    const std::vector<Motion2D>& estimated,
    const std::vector<Motion2D>& truth) {
  if (estimated.size() != truth.size()) {
    throw LengthMismatch("estimated and ground-truth motion counts differ");
  }
  if (estimated.empty()) {
    throw LengthMismatch("motion lists are empty");
  }
  const auto is_identity = [](const Motion2D& m) {
    return std::abs(m.theta) < 1e-9 && m.t.norm() < 1e-9;
  };
  if (!is_identity(estimated[0]) || !is_identity(truth[0])) {
    throw std::invalid_argument(
        "both motion lists must carry the identity gauge at index 0");
  }

  GroundTruthErrors errs;
  const std::size_t n = estimated.size();
  errs.rotation.resize(n, 0.0);
  errs.translation.resize(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const Motion2D delta = truth[i].inverse() * estimated[i];
    errs.rotation[i] = std::abs(delta.theta);
    errs.translation[i] = delta.t.norm();
    errs.max_rotation = std::max(errs.max_rotation, errs.rotation[i]);
    errs.max_translation = std::max(errs.max_translation, errs.translation[i]);
    errs.mean_rotation += errs.rotation[i];
    errs.mean_translation += errs.translation[i];
  }
  if (n > 1) {
    errs.mean_rotation /= static_cast<double>(n - 1);
    errs.mean_translation /= static_cast<double>(n - 1);
  }
  return errs;
}

std::vector<Motion2D> regauge_ground_truth(const std::vector<Motion2D>& truth,
                                           const std::vector<int>& perm) {
  if (perm.size() != truth.size()) {
    throw LengthMismatch("permutation and ground-truth sizes differ");
  }
  const Motion2D new_ref_inv = truth[perm[0]].inverse();
  std::vector<Motion2D> out;
  out.reserve(truth.size());
  for (int p : perm) {
    out.push_back(new_ref_inv * truth[p]);
  }
  out[0] = Motion2D::identity();  // exact gauge
  return out;
}

MergeOutput merge_multiple(const std::vector<OccupancyGrid>& maps,
                           const MergeConfig& config) {
  const int n = static_cast<int>(maps.size());
  if (n < 2) {
    throw TooFewMaps("merging needs at least two maps");
  }
  for (const OccupancyGrid& m : maps) {
    if (m.resolution() != maps[0].resolution()) {
      throw ResolutionMismatch("input maps have differing resolutions");
    }
  }
  const int threads = resolve_threads(config.thread_count);
  const PairwiseParams pairwise_params = config.pairwise_params();

  auto report = std::make_shared<MergeReport>();
  report->n_maps = n;
  report->config = config;

  // Per-map features and edge points, computed once (pipeline front end).
  Clock::time_point t0 = Clock::now();
  std::vector<std::optional<MapFeatures>> features(n);
  parallel_for(n, threads, [&](int k) {
    try {
      features[k] = prepare_map(maps[k]);
    } catch (const ImageTooSmall&) {
      features[k] = std::nullopt;
    }
  });
  report->timings_ms["features"] = ms_since(t0);

  // All C(N,2) candidate pairs.
  struct PairTask {
    int i;
    int j;
  };
  std::vector<PairTask> tasks;
  tasks.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      tasks.push_back({i, j});
    }
  }

  t0 = Clock::now();
  std::vector<PairwiseOutcome> outcomes(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), threads, [&](int k) {
    const PairTask& task = tasks[k];
    if (!features[task.i] || !features[task.j]) {
      outcomes[k].reject_stage = "features unavailable";
      return;
    }
    outcomes[k] = pairwise_from_features(
        *features[task.i], *features[task.j], task.i, task.j, pairwise_params,
        derive_seed(config.master_seed, static_cast<std::uint64_t>(task.i),
                    static_cast<std::uint64_t>(task.j)));
  });
  report->timings_ms["pairwise"] = ms_since(t0);

  PoseGraph graph;
  graph.n_maps = n;
  report->pairwise_attempted = static_cast<int>(tasks.size());
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    PairRecord rec;
    rec.i = tasks[k].i;
    rec.j = tasks[k].j;
    rec.inliers = outcomes[k].inliers;
    if (outcomes[k].estimate) {
      rec.status = "merged";
      rec.overlap = outcomes[k].estimate->overlap;
      rec.objective = outcomes[k].estimate->objective;
      graph.edges.push_back(*outcomes[k].estimate);
      ++report->pairwise_succeeded;
    } else {
      rec.status = "rejected";
      rec.reject_stage = outcomes[k].reject_stage;
    }
    report->pairs.push_back(std::move(rec));
  }
  if (report->pairwise_succeeded > 0) {
    double sum = 0.0;
    for (const RelativeMotionEstimate& e : graph.edges) {
      sum += e.objective;
    }
    report->mean_pairwise_objective =
        sum / static_cast<double>(report->pairwise_succeeded);
  }

  t0 = Clock::now();
  McsResult mcs;
  try {
    mcs = mcs_sample_and_confirm(graph, config.mcs_params(),
                                 derive_seed(config.master_seed, 0x4d4353));
  } catch (const GraphDisconnected& e) {
    report->status = "disconnected";
    report->disconnected_components = e.components();
    report->timings_ms["mcs"] = ms_since(t0);
    throw MergeDisconnected(e.what(), e.components(), report);
  }
  report->timings_ms["mcs"] = ms_since(t0);
  report->e_best = mcs.support;

  std::set<std::pair<int, int>> tree_pairs;
  for (const RelativeMotionEstimate& e : mcs.tree_edges) {
    tree_pairs.insert({e.i, e.j});
  }
  std::set<std::pair<int, int>> reliable_pairs;
  for (const RelativeMotionEstimate& e : mcs.reliable_edges) {
    reliable_pairs.insert({e.i, e.j});
  }
  for (PairRecord& rec : report->pairs) {
    if (rec.status != "merged") {
      continue;
    }
    if (tree_pairs.count({rec.i, rec.j})) {
      rec.classification = "tree";
    } else if (reliable_pairs.count({rec.i, rec.j})) {
      rec.classification = "reliable";
    } else {
      rec.classification = "unreliable";
    }
  }

  std::vector<EdgePointSet> edges(n);
  for (int k = 0; k < n; ++k) {
    edges[k] = features[k] ? features[k]->edges : extract_edge_points(maps[k]);
  }

  report->motions_coarse = mcs.global_motions;
  t0 = Clock::now();
  report->coarse_error =
      merging_error_edges(edges, mcs.global_motions, mcs.reliable_edges);

  const MotionAverageResult averaged =
      motion_average(mcs.global_motions, mcs.reliable_edges,
                     config.avg_epsilon, config.avg_max_sweeps);
  report->converged = averaged.converged;
  report->motions_fine = averaged.globals;
  report->fine_error =
      merging_error_edges(edges, averaged.globals, mcs.reliable_edges);
  report->timings_ms["averaging"] = ms_since(t0);

  double residual = 0.0;
  for (const RelativeMotionEstimate& e : mcs.reliable_edges) {
    residual += motion_distance(e.motion, averaged.globals[e.i],
                                averaged.globals[e.j], config.kappa);
  }
  report->motion_consistency_residual = residual;

  t0 = Clock::now();
  OccupancyGrid merged = render_merged(maps, averaged.globals);
  report->timings_ms["render"] = ms_since(t0);
  report->status = "ok";

  return MergeOutput{std::move(merged), std::move(*report)};
}

}  // namespace gridmerge

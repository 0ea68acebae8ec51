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

#include "gridmerge/pose_graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "gridmerge/errors.hpp"

namespace gridmerge {

namespace {

void validate_graph(const PoseGraph& graph) {
  if (graph.n_maps < 1) {
    throw std::invalid_argument("pose graph needs at least one vertex");
  }
  std::set<std::pair<int, int>> seen;
  for (const RelativeMotionEstimate& e : graph.edges) {
    if (e.i < 0 || e.j <= e.i || e.j >= graph.n_maps) {
      throw std::invalid_argument("pose graph edge indices must satisfy "
                                  "0 <= i < j < N");
    }
    if (!seen.insert({e.i, e.j}).second) {
      throw std::invalid_argument("duplicate pose graph edge");
    }
  }
}

std::string components_message(const std::vector<std::vector<int>>& comps) {
  std::string msg = "pose graph splits into " +
                    std::to_string(comps.size()) + " components:";
  for (const std::vector<int>& c : comps) {
    msg += " {";
    for (std::size_t k = 0; k < c.size(); ++k) {
      msg += (k ? "," : "") + std::to_string(c[k]);
    }
    msg += "}";
  }
  return msg;
}

}  // namespace

std::optional<std::vector<RelativeMotionEstimate>> sample_spanning_edges(
    const PoseGraph& graph, Rng& rng) {
  const int n = graph.n_maps;
  const int r = static_cast<int>(graph.edges.size());
  if (r < n - 1) {
    throw TooFewEdges("need at least N-1 edges to span " +
                      std::to_string(n) + " vertices");
  }
  // Partial Fisher-Yates over edge indices: a uniform (N-1)-subset.
  std::vector<int> idx(r);
  for (int k = 0; k < r; ++k) {
    idx[k] = k;
  }
  std::vector<RelativeMotionEstimate> subset;
  subset.reserve(n - 1);
  for (int k = 0; k < n - 1; ++k) {
    const int pick = k + rng.next_int(0, r - k);
    std::swap(idx[k], idx[pick]);
    subset.push_back(graph.edges[idx[k]]);
  }
  if (!connectivity_matrix_test(subset, n)) {
    return std::nullopt;
  }
  return subset;
}

bool connectivity_matrix_test(const std::vector<RelativeMotionEstimate>& edges,
                              int n_maps) {
  const int n = n_maps;
  if (n <= 0) {
    return false;
  }
  // a = L + L^T + I with boolean entries; g = a^n must be all-ones.
  std::vector<std::uint8_t> a(static_cast<std::size_t>(n) * n, 0);
  for (int k = 0; k < n; ++k) {
    a[static_cast<std::size_t>(k) * n + k] = 1;
  }
  for (const RelativeMotionEstimate& e : edges) {
    a[static_cast<std::size_t>(e.i) * n + e.j] = 1;
    a[static_cast<std::size_t>(e.j) * n + e.i] = 1;
  }
  std::vector<std::uint8_t> g = a;
  std::vector<std::uint8_t> next(static_cast<std::size_t>(n) * n, 0);
  for (int power = 1; power < n; ++power) {
    std::fill(next.begin(), next.end(), 0);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        if (!g[static_cast<std::size_t>(i) * n + k]) {
          continue;
        }
        for (int j = 0; j < n; ++j) {
          next[static_cast<std::size_t>(i) * n + j] |=
              a[static_cast<std::size_t>(k) * n + j];
        }
      }
    }
    g.swap(next);
  }
  return std::all_of(g.begin(), g.end(),
                     [](std::uint8_t v) { return v != 0; });
}

std::vector<Motion2D> chain_global_motions(
    const std::vector<RelativeMotionEstimate>& tree_edges, int n_maps) {
  std::vector<std::vector<std::pair<int, const RelativeMotionEstimate*>>> adj(
      n_maps);
  for (const RelativeMotionEstimate& e : tree_edges) {
    adj[e.i].push_back({e.j, &e});
    adj[e.j].push_back({e.i, &e});
  }
  std::vector<Motion2D> globals(n_maps);
  std::vector<bool> visited(n_maps, false);
  std::deque<int> queue;
  visited[0] = true;
  globals[0] = Motion2D::identity();
  queue.push_back(0);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (const auto& [w, e] : adj[v]) {
      if (visited[w]) {
        continue;
      }
      visited[w] = true;
      // Edge motion maps j-frame points into i's frame: M_j = M_i * M_ij.
      if (e->i == v) {
        globals[w] = globals[v] * e->motion;
      } else {
        globals[w] = globals[v] * e->motion.inverse();
      }
      queue.push_back(w);
    }
  }
  for (int v = 0; v < n_maps; ++v) {
    if (!visited[v]) {
      throw NotSpanning("edge set does not reach map " + std::to_string(v));
    }
  }
  return globals;
}

double motion_distance(const Motion2D& m_hat, const Motion2D& m_i,
                       const Motion2D& m_j, double kappa) {
  const Motion2D chained = m_i.inverse() * m_j;
  Eigen::Matrix3d a = m_hat.matrix();
  Eigen::Matrix3d b = chained.matrix();
  a(0, 2) *= kappa;
  a(1, 2) *= kappa;
  b(0, 2) *= kappa;
  b(1, 2) *= kappa;
  return (a - b).norm();
}

std::vector<std::vector<int>> connected_components(const PoseGraph& graph) {
  std::vector<std::vector<int>> adj(graph.n_maps);
  for (const RelativeMotionEstimate& e : graph.edges) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  std::vector<std::vector<int>> components;
  std::vector<bool> visited(graph.n_maps, false);
  for (int start = 0; start < graph.n_maps; ++start) {
    if (visited[start]) {
      continue;
    }
    std::vector<int> comp;
    std::deque<int> queue{start};
    visited[start] = true;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      comp.push_back(v);
      for (int w : adj[v]) {
        if (!visited[w]) {
          visited[w] = true;
          queue.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  return components;
}

McsResult mcs_sample_and_confirm(const PoseGraph& graph,
                                 const McsParams& params,
                                 std::uint64_t rng_seed) {
  validate_graph(graph);
  const int n = graph.n_maps;

  if (!connectivity_matrix_test(graph.edges, n)) {
    throw GraphDisconnected(components_message(connected_components(graph)),
                            connected_components(graph));
  }

  const int outer_budget = params.iterations_factor * n * n;
  const int inner_cap = 100 * n;

  struct Candidate {
    std::vector<RelativeMotionEstimate> tree;
    std::vector<Motion2D> globals;
    int support = -1;
  };
  Candidate best;
  McsResult result;
  result.support_trace.reserve(outer_budget);

  for (int k = 1; k <= outer_budget; ++k) {
    // Per-iteration derived seed: iterations are schedule-independent and
    // the argmax tie-break is on iteration index.
    Rng rng(derive_seed(rng_seed, static_cast<std::uint64_t>(k)));
    std::optional<std::vector<RelativeMotionEstimate>> subset;
    for (int attempt = 0; attempt < inner_cap && !subset; ++attempt) {
      subset = sample_spanning_edges(graph, rng);
    }
    if (subset) {
      const std::vector<Motion2D> globals = chain_global_motions(*subset, n);
      int support = 0;
      for (const RelativeMotionEstimate& e : graph.edges) {
        if (motion_distance(e.motion, globals[e.i], globals[e.j],
                            params.kappa) <= params.d_thr_motion) {
          ++support;
        }
      }
      if (support > best.support) {
        best.support = support;
        best.tree = *subset;
        best.globals = globals;
      }
    }
    result.support_trace.push_back(std::max(best.support, 0));
  }

  if (best.support < 0) {
    // The sampler never produced a spanning subset within the budget;
    // fall back to a deterministic breadth-first spanning tree.
    std::vector<std::vector<std::pair<int, const RelativeMotionEstimate*>>>
        adj(n);
    for (const RelativeMotionEstimate& e : graph.edges) {
      adj[e.i].push_back({e.j, &e});
      adj[e.j].push_back({e.i, &e});
    }
    std::vector<bool> visited(n, false);
    std::deque<int> queue{0};
    visited[0] = true;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (const auto& [w, e] : adj[v]) {
        if (!visited[w]) {
          visited[w] = true;
          best.tree.push_back(*e);
          queue.push_back(w);
        }
      }
    }
    best.globals = chain_global_motions(best.tree, n);
    best.support = 0;
    for (const RelativeMotionEstimate& e : graph.edges) {
      if (motion_distance(e.motion, best.globals[e.i], best.globals[e.j],
                          params.kappa) <= params.d_thr_motion) {
        ++best.support;
      }
    }
  }

  // Single elimination pass against the winning globals; tree edges stay.
  std::set<std::pair<int, int>> tree_pairs;
  for (const RelativeMotionEstimate& e : best.tree) {
    tree_pairs.insert({e.i, e.j});
  }
  for (const RelativeMotionEstimate& e : graph.edges) {
    const bool is_tree = tree_pairs.count({e.i, e.j}) != 0;
    if (is_tree || motion_distance(e.motion, best.globals[e.i],
                                   best.globals[e.j],
                                   params.kappa) <= params.d_thr_motion) {
      result.reliable_edges.push_back(e);
    }
  }
  result.global_motions = std::move(best.globals);
  result.tree_edges = std::move(best.tree);
  result.support = best.support;
  return result;
}

}  // namespace gridmerge

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

#ifndef GRIDMERGE_POSE_GRAPH_HPP_
#define GRIDMERGE_POSE_GRAPH_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "gridmerge/motion2d.hpp"
#include "gridmerge/pairwise.hpp"
#include "gridmerge/rng.hpp"

namespace gridmerge {

// Undirected graph of relative-motion estimates; edges stored with i < j,
// no duplicate pairs.
struct PoseGraph {
  int n_maps = 0;
  std::vector<RelativeMotionEstimate> edges;
};

struct McsResult {
  std::vector<Motion2D> global_motions;          // [0] is exactly identity
  std::vector<RelativeMotionEstimate> reliable_edges;
  int support = 0;                               // best edge-support count
  std::vector<RelativeMotionEstimate> tree_edges;  // the winning N-1 edges
  std::vector<int> support_trace;  // running best after each iteration
};

// Uniformly random (N-1)-subset of the edges; nullopt when the subset does
// not span all vertices. Throws TooFewEdges when |edges| < N-1.
std::optional<std::vector<RelativeMotionEstimate>> sample_spanning_edges(
    const PoseGraph& graph, Rng& rng);

// Spanning test via the boolean matrix power (L + L^T + I)^N: true iff
// every entry is nonzero. Boolean arithmetic keeps the reachability
// semantics without integer overflow.
bool connectivity_matrix_test(const std::vector<RelativeMotionEstimate>& edges,
                              int n_maps);

// Breadth-first chaining from vertex 0 (identity); traversing an edge
// (i, j) from side j composes the inverse motion. Throws NotSpanning.
std::vector<Motion2D> chain_global_motions(
    const std::vector<RelativeMotionEstimate>& tree_edges, int n_maps);

// Frobenius distance between the homogeneous forms of m_hat and
// m_i^-1 * m_j, with translation columns scaled by kappa so rotation and
// translation discrepancies are commensurate.
double motion_distance(const Motion2D& m_hat, const Motion2D& m_i,
                       const Motion2D& m_j, double kappa = 0.1);

struct McsParams {
  double d_thr_motion = 0.5;
  double kappa = 0.1;
  int iterations_factor = 10;  // outer budget = factor * N^2
};

// Repeated spanning-subgraph sampling and confirmation: keeps the
// candidate supported by the most edges, then classifies every edge once
// against the winning globals. Throws GraphDisconnected (with the
// component lists) when the full edge set does not connect the graph.
McsResult mcs_sample_and_confirm(const PoseGraph& graph,
                                 const McsParams& params,
                                 std::uint64_t rng_seed);

// Connected components of the graph under its full edge set.
std::vector<std::vector<int>> connected_components(const PoseGraph& graph);

}  // namespace gridmerge

#endif  // GRIDMERGE_POSE_GRAPH_HPP_

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

#ifndef GRIDMERGE_PIPELINE_HPP_
#define GRIDMERGE_PIPELINE_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gridmerge/errors.hpp"
#include "gridmerge/grid_map.hpp"
#include "gridmerge/motion2d.hpp"
#include "gridmerge/pairwise.hpp"
#include "gridmerge/pose_graph.hpp"

namespace gridmerge {

// Every preset of the full pipeline, flat so the CLI config file and the
// report echo share one schema.
struct MergeConfig {
  std::uint64_t master_seed = 0;
  double lambda = 2.0;
  double xi_min = 0.2;
  int tricp_max_iterations = 100;
  double tricp_epsilon = 1e-8;
  double d_thr_feat = 2.0;
  double d_thr_motion = 0.5;
  double kappa = 0.1;
  int ransac_iterations = 200;
  int mcs_iterations_factor = 10;
  int min_inliers = 4;
  double avg_epsilon = 1e-10;
  int avg_max_sweeps = 100;
  int thread_count = 0;  // 0 = hardware concurrency

  PairwiseParams pairwise_params() const {
    PairwiseParams p;
    p.tricp.lambda = lambda;
    p.tricp.xi_min = xi_min;
    p.tricp.max_iterations = tricp_max_iterations;
    p.tricp.epsilon = tricp_epsilon;
    p.d_thr_feat = d_thr_feat;
    p.ransac_iterations = ransac_iterations;
    p.min_inliers = min_inliers;
    return p;
  }
  McsParams mcs_params() const {
    McsParams m;
    m.d_thr_motion = d_thr_motion;
    m.kappa = kappa;
    m.iterations_factor = mcs_iterations_factor;
    return m;
  }
};

struct PairRecord {
  int i = 0;
  int j = 0;
  std::string status;          // "merged" or "rejected"
  std::string reject_stage;    // stage name when rejected
  int inliers = 0;
  double overlap = 0.0;
  double objective = 0.0;
  std::string classification;  // "tree", "reliable", "unreliable"
};

struct MergeReport {
  int n_maps = 0;
  std::string status;  // "ok" or "disconnected"
  int pairwise_attempted = 0;
  int pairwise_succeeded = 0;
  int e_best = 0;
  std::vector<PairRecord> pairs;
  double coarse_error = 0.0;
  double fine_error = 0.0;
  // Candidate merge-quality quantities: mean converged TrICP objective,
  // summed motion-consistency residual of the reliable edges under the
  // fine globals, and the trimmed pair error (fine_error above).
  double mean_pairwise_objective = 0.0;
  double motion_consistency_residual = 0.0;
  std::vector<Motion2D> motions_coarse;
  std::vector<Motion2D> motions_fine;
  std::map<std::string, double> timings_ms;
  bool converged = false;
  std::vector<std::vector<int>> disconnected_components;
  MergeConfig config;
};

// GraphDisconnected variant that carries the partial report (pairs and
// component lists filled in) so callers can still persist it.
class MergeDisconnected : public GraphDisconnected {
 public:
  MergeDisconnected(const std::string& what,
                    std::vector<std::vector<int>> components,
                    std::shared_ptr<MergeReport> report)
      : GraphDisconnected(what, std::move(components)),
        report_(std::move(report)) {}
  const MergeReport& report() const { return *report_; }

 private:
  std::shared_ptr<MergeReport> report_;
};

struct MergeOutput {
  OccupancyGrid merged;
  MergeReport report;
};

// End-to-end merge: pairwise estimates over all map pairs, spanning
// subgraph sampling, motion averaging, rendering. Throws TooFewMaps,
// ResolutionMismatch, and MergeDisconnected.
MergeOutput merge_multiple(const std::vector<OccupancyGrid>& maps,
                           const MergeConfig& config);

// Trimmed nearest-neighbor error over the reliable pairs: both edge sets
// move into the global frame; distances go from the smaller set to the
// larger; the mean of the smallest ceil(overlap * n) distances per pair
// is averaged over pairs. 0 when no pairs.
double merging_error(const std::vector<OccupancyGrid>& maps,
                     const std::vector<Motion2D>& globals,
                     const std::vector<RelativeMotionEstimate>& pairs);

// Same, over pre-extracted edge sets.
double merging_error_edges(const std::vector<EdgePointSet>& edges,
                           const std::vector<Motion2D>& globals,
                           const std::vector<RelativeMotionEstimate>& pairs);

struct GroundTruthErrors {
  std::vector<double> rotation;     // radians, per map (index 0 -> 0)
  std::vector<double> translation;  // cells, per map
  double max_rotation = 0.0;
  double mean_rotation = 0.0;
  double max_translation = 0.0;
  double mean_translation = 0.0;
};

// Per-map discrepancy truth_i^-1 * est_i; both lists must share the
// identity gauge at index 0. Throws LengthMismatch.
GroundTruthErrors evaluate_vs_ground_truth(
    const std::vector<Motion2D>& estimated,
    const std::vector<Motion2D>& truth);

// Re-expresses ground-truth globals after the maps are permuted so that
// permuted[k] = truth[perm[0]]^-1 * truth[perm[k]] (new reference is the
// map now in slot 0).
std::vector<Motion2D> regauge_ground_truth(const std::vector<Motion2D>& truth,
                                           const std::vector<int>& perm);

}  // namespace gridmerge

#endif  // GRIDMERGE_PIPELINE_HPP_

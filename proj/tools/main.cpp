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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridmerge/errors.hpp"
#include "gridmerge/features.hpp"
#include "gridmerge/grid_map.hpp"
#include "gridmerge/pipeline.hpp"
#include "gridmerge/report_io.hpp"
#include "gridmerge/synthetic.hpp"

namespace fs = std::filesystem;
using namespace gridmerge;

namespace {

// Exit code contract: 0 ok, 1 I/O, 2 generation infeasible, 3 disconnected
// graph, 4 pairwise rejection, 64 usage, 65 schema.
constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitDisconnected = 3;
constexpr int kExitRejected = 4;
constexpr int kExitUsage = 64;
constexpr int kExitSchema = 65;

struct ConfigFlags {
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
  std::optional<double> xi_min;
  std::optional<int> tricp_max_iterations;
  std::optional<double> tricp_epsilon;
  std::optional<double> d_thr_feat;
  std::optional<double> d_thr_motion;
  std::optional<double> kappa;
  std::optional<int> ransac_iterations;
  std::optional<int> mcs_iterations_factor;
  std::optional<int> min_inliers;
  std::optional<double> avg_epsilon;
  std::optional<int> avg_max_sweeps;
  std::optional<int> threads;
  std::string config_path;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--seed", flags.seed, "Master RNG seed");
  cmd->add_option("--lambda", flags.lambda, "TrICP overlap exponent");
  cmd->add_option("--xi-min", flags.xi_min, "Minimum overlap fraction");
  cmd->add_option("--tricp-max-iterations", flags.tricp_max_iterations,
                  "TrICP iteration cap");
  cmd->add_option("--tricp-epsilon", flags.tricp_epsilon,
                  "TrICP objective-change stop tolerance");
  cmd->add_option("--d-thr-feat", flags.d_thr_feat,
                  "RANSAC inlier threshold (cells)");
  cmd->add_option("--d-thr-motion", flags.d_thr_motion,
                  "Motion consistency threshold");
  cmd->add_option("--kappa", flags.kappa,
                  "Translation scale in the motion distance");
  cmd->add_option("--ransac-iterations", flags.ransac_iterations,
                  "RANSAC iteration count");
  cmd->add_option("--mcs-factor", flags.mcs_iterations_factor,
                  "Subgraph sampling budget factor (budget = factor * N^2)");
  cmd->add_option("--min-inliers", flags.min_inliers,
                  "Minimum RANSAC inliers to accept a pair");
  cmd->add_option("--avg-epsilon", flags.avg_epsilon,
                  "Motion averaging stop tolerance");
  cmd->add_option("--avg-max-sweeps", flags.avg_max_sweeps,
                  "Motion averaging sweep cap");
  cmd->add_option("--threads", flags.threads, "Worker thread hint");
  cmd->add_option("--config", flags.config_path,
                  "JSON config file (defaults < file < flags)");
}

// defaults < config file < command-line flags
MergeConfig resolve_config(const ConfigFlags& flags) {
  MergeConfig config;
  if (!flags.config_path.empty()) {
    config = config_from_json(read_text_file(flags.config_path), config);
  }
  if (flags.seed) config.master_seed = *flags.seed;
  if (flags.lambda) config.lambda = *flags.lambda;
  if (flags.xi_min) config.xi_min = *flags.xi_min;
  if (flags.tricp_max_iterations)
    config.tricp_max_iterations = *flags.tricp_max_iterations;
  if (flags.tricp_epsilon) config.tricp_epsilon = *flags.tricp_epsilon;
  if (flags.d_thr_feat) config.d_thr_feat = *flags.d_thr_feat;
  if (flags.d_thr_motion) config.d_thr_motion = *flags.d_thr_motion;
  if (flags.kappa) config.kappa = *flags.kappa;
  if (flags.ransac_iterations)
    config.ransac_iterations = *flags.ransac_iterations;
  if (flags.mcs_iterations_factor)
    config.mcs_iterations_factor = *flags.mcs_iterations_factor;
  if (flags.min_inliers) config.min_inliers = *flags.min_inliers;
  if (flags.avg_epsilon) config.avg_epsilon = *flags.avg_epsilon;
  if (flags.avg_max_sweeps) config.avg_max_sweeps = *flags.avg_max_sweeps;
  if (flags.threads) config.thread_count = *flags.threads;
  return config;
}

// A single directory argument expands to its *.pgm files, sorted.
std::vector<fs::path> resolve_map_paths(const std::vector<std::string>& args) {
  std::vector<fs::path> paths;
  if (args.size() == 1 && fs::is_directory(args[0])) {
    for (const fs::directory_entry& entry : fs::directory_iterator(args[0])) {
      if (entry.path().extension() == ".pgm") {
        paths.push_back(entry.path());
      }
    }
    std::sort(paths.begin(), paths.end());
  } else {
    for (const std::string& a : args) {
      paths.emplace_back(a);
    }
  }
  return paths;
}

std::vector<OccupancyGrid> load_maps(const std::vector<fs::path>& paths) {
  std::vector<OccupancyGrid> maps;
  maps.reserve(paths.size());
  for (const fs::path& p : paths) {
    maps.push_back(load_grid(p));
  }
  return maps;
}

std::string map_stem(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "map_%02d", index);
  return buf;
}

void write_debug_dumps(const std::vector<OccupancyGrid>& maps,
                       const MergeReport& report, const fs::path& out_dir,
                       bool dump_features, bool dump_graph) {
  if (dump_graph) {
    write_text_file(out_dir / "graph.json", graph_to_json(report));
  }
  if (dump_features) {
    for (std::size_t k = 0; k < maps.size(); ++k) {
      const FeatureSet fs_k = compute_features(to_intensity(maps[k]));
      write_text_file(out_dir / (map_stem(static_cast<int>(k)) +
                                 "_features.json"),
                      keypoints_to_json(fs_k.keypoints));
    }
  }
}

int cmd_synth(const SynthParams& params, std::uint64_t seed,
              const fs::path& out_dir, bool json_out) {
  const SynthOutput output = generate_synthetic(params, seed);
  fs::create_directories(out_dir);
  for (std::size_t k = 0; k < output.maps.size(); ++k) {
    save_grid(output.maps[k],
              out_dir / (map_stem(static_cast<int>(k)) + ".pgm"));
  }
  write_text_file(out_dir / "ground_truth.json",
                  ground_truth_to_json(output.world.ground_truth));
  if (json_out) {
    std::string files = "[";
    for (std::size_t k = 0; k < output.maps.size(); ++k) {
      files += (k ? "," : "");
      files += "\"" + map_stem(static_cast<int>(k)) + ".pgm\"";
    }
    files += "]";
    std::cout << "{\"n_maps\": " << output.maps.size() << ", \"out_dir\": \""
              << out_dir.string() << "\", \"maps\": " << files << "}"
              << std::endl;
  } else {
    std::cout << "wrote " << output.maps.size() << " maps and "
              << "ground_truth.json to " << out_dir.string() << std::endl;
  }
  return kExitOk;
}

int cmd_merge(const std::vector<std::string>& map_args,
              const ConfigFlags& flags, const fs::path& out_dir, bool json_out,
              bool dump_features, bool dump_graph) {
  const std::vector<fs::path> paths = resolve_map_paths(map_args);
  if (paths.size() < 2) {
    std::cerr << "merge needs at least two maps" << std::endl;
    return kExitUsage;
  }
  const std::vector<OccupancyGrid> maps = load_maps(paths);
  const MergeConfig config = resolve_config(flags);
  fs::create_directories(out_dir);

  try {
    MergeOutput output = merge_multiple(maps, config);
    save_grid(output.merged, out_dir / "merged.pgm");
    const std::string report_text = report_to_json(output.report);
    write_text_file(out_dir / "report.json", report_text);
    write_debug_dumps(maps, output.report, out_dir, dump_features, dump_graph);
    if (json_out) {
      std::cout << report_text;
    } else {
      std::cout << "merged " << maps.size() << " maps: coarse error "
                << output.report.coarse_error << ", fine error "
                << output.report.fine_error << " cells; report in "
                << (out_dir / "report.json").string() << std::endl;
    }
    return kExitOk;
  } catch (const MergeDisconnected& e) {
    // A failed merge still produces a report; diagnosing it matters.
    const std::string report_text = report_to_json(e.report());
    write_text_file(out_dir / "report.json", report_text);
    write_debug_dumps(maps, e.report(), out_dir, dump_features, dump_graph);
    std::cerr << "cannot merge: " << e.what() << std::endl;
    if (json_out) {
      std::cout << report_text;
    }
    return kExitDisconnected;
  }
}

int cmd_pairwise(const std::string& path_a, const std::string& path_b,
                 const ConfigFlags& flags, bool json_out) {
  const OccupancyGrid map_i = load_grid(path_a);
  const OccupancyGrid map_j = load_grid(path_b);
  if (map_i.resolution() != map_j.resolution()) {
    throw ResolutionMismatch("map pair has differing resolutions");
  }
  const MergeConfig config = resolve_config(flags);

  PairwiseOutcome outcome;
  try {
    const MapFeatures fi = prepare_map(map_i);
    const MapFeatures fj = prepare_map(map_j);
    outcome = pairwise_from_features(fi, fj, 0, 1, config.pairwise_params(),
                                     derive_seed(config.master_seed, 0, 1));
  } catch (const ImageTooSmall& e) {
    outcome.reject_stage = e.what();
  }

  if (!outcome.estimate) {
    if (json_out) {
      std::cout << "{\"status\": \"rejected\", \"stage\": \""
                << outcome.reject_stage
                << "\", \"matches\": " << outcome.n_matches
                << ", \"inliers\": " << outcome.inliers << "}" << std::endl;
    } else {
      std::cout << "rejected: " << outcome.reject_stage << std::endl;
    }
    return kExitRejected;
  }
  const RelativeMotionEstimate& est = *outcome.estimate;
  if (json_out) {
    std::cout << "{\"status\": \"merged\", \"theta_rad\": " << est.motion.theta
              << ", \"tx_cells\": " << est.motion.t.x()
              << ", \"ty_cells\": " << est.motion.t.y()
              << ", \"inliers\": " << est.inliers
              << ", \"overlap\": " << est.overlap
              << ", \"objective\": " << est.objective << "}" << std::endl;
  } else {
    std::cout << "relative motion: theta " << est.motion.theta << " rad, t ("
              << est.motion.t.x() << ", " << est.motion.t.y() << ") cells, "
              << est.inliers << " inliers, overlap " << est.overlap
              << ", objective " << est.objective << std::endl;
  }
  return kExitOk;
}

int cmd_eval(const std::string& report_path, const std::string& truth_path,
             bool json_out) {
  const MergeReport report = report_from_json(read_text_file(report_path));
  const std::vector<Motion2D> truth =
      ground_truth_from_json(read_text_file(truth_path));
  GroundTruthErrors errs;
  try {
    errs = evaluate_vs_ground_truth(report.motions_fine, truth);
  } catch (const LengthMismatch& e) {
    throw SchemaError(e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }

  if (json_out) {
    std::string rows = "[";
    for (std::size_t i = 0; i < errs.rotation.size(); ++i) {
      rows += (i ? "," : "");
      rows += "{\"index\": " + std::to_string(i) +
              ", \"rotation_rad\": " + std::to_string(errs.rotation[i]) +
              ", \"translation_cells\": " +
              std::to_string(errs.translation[i]) + "}";
    }
    rows += "]";
    std::cout << "{\"per_map\": " << rows
              << ", \"max_rotation_rad\": " << errs.max_rotation
              << ", \"mean_rotation_rad\": " << errs.mean_rotation
              << ", \"max_translation_cells\": " << errs.max_translation
              << ", \"mean_translation_cells\": " << errs.mean_translation
              << "}" << std::endl;
  } else {
    std::printf("map  rotation[rad]  translation[cells]\n");
    for (std::size_t i = 0; i < errs.rotation.size(); ++i) {
      std::printf("%3zu  %13.6f  %18.6f\n", i, errs.rotation[i],
                  errs.translation[i]);
    }
    std::printf("max  %13.6f  %18.6f\n", errs.max_rotation,
                errs.max_translation);
    std::printf("mean %13.6f  %18.6f\n", errs.mean_rotation,
                errs.mean_translation);
  }
  return kExitOk;
}

int cmd_render(const std::string& report_path,
               const std::vector<std::string>& map_args,
               const fs::path& out_dir, bool json_out) {
  const MergeReport report = report_from_json(read_text_file(report_path));
  const std::vector<fs::path> paths = resolve_map_paths(map_args);
  if (static_cast<int>(paths.size()) != report.n_maps ||
      report.motions_fine.size() != paths.size()) {
    throw SchemaError("map set does not match the report (" +
                      std::to_string(paths.size()) + " maps vs n_maps " +
                      std::to_string(report.n_maps) + ")");
  }
  const std::vector<OccupancyGrid> maps = load_maps(paths);
  OccupancyGrid merged(1, 1, 1.0);
  try {
    merged = render_merged(maps, report.motions_fine);
  } catch (const ResolutionMismatch& e) {
    throw SchemaError(e.what());
  }
  fs::create_directories(out_dir);
  save_grid(merged, out_dir / "merged.pgm");
  if (json_out) {
    std::cout << "{\"merged\": \"" << (out_dir / "merged.pgm").string()
              << "\", \"width\": " << merged.width()
              << ", \"height\": " << merged.height() << "}" << std::endl;
  } else {
    std::cout << "wrote " << (out_dir / "merged.pgm").string() << " ("
              << merged.width() << "x" << merged.height() << ")" << std::endl;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridmerge: merge unordered occupancy grid maps via pairwise "
               "registration, spanning-subgraph confirmation, and motion "
               "averaging"};
  app.require_subcommand(1);

  // synth
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a synthetic world and submaps with ground truth");
  SynthParams synth_params;
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  bool synth_json = false;
  synth->add_option("--n", synth_params.n_submaps, "Number of submaps")
      ->check(CLI::Range(2, 64));
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--world-size", synth_params.world_width,
                    "World side length in cells");
  synth->add_option("--rooms", synth_params.room_count, "Room count");
  synth->add_option("--corridor-width", synth_params.corridor_width,
                    "Corridor width in cells");
  synth->add_option("--window-size", synth_params.window_size,
                    "Submap window side length in cells");
  synth->add_option("--min-overlap", synth_params.min_overlap,
                    "Minimum pairwise window overlap fraction");
  synth->add_option("--noise-p", synth_params.noise_p,
                    "Occupied<->Free flip probability");
  synth->add_option("--rot-range", synth_params.rotation_range,
                    "Per-submap rotation range (+/- radians)");
  synth->add_option("--jitter", synth_params.translation_jitter,
                    "Per-submap translation jitter (+/- cells)");
  synth->add_option("--resolution", synth_params.resolution,
                    "Meters per cell");
  synth->add_flag("--json", synth_json, "Machine-readable output");

  // merge
  CLI::App* merge = app.add_subcommand(
      "merge", "Merge a set of grid maps into one global map");
  std::vector<std::string> merge_maps;
  std::string merge_out;
  bool merge_json = false;
  bool dump_features = false;
  bool dump_graph = false;
  ConfigFlags merge_flags;
  merge->add_option("maps", merge_maps, "Map .pgm files or one directory")
      ->required();
  merge->add_option("--out", merge_out, "Output directory")->required();
  merge->add_flag("--json", merge_json, "Print report JSON on stdout");
  merge->add_flag("--dump-features", dump_features,
                  "Write per-map keypoint dumps");
  merge->add_flag("--dump-graph", dump_graph,
                  "Write the classified pose graph");
  add_config_flags(merge, merge_flags);

  // pairwise
  CLI::App* pairwise = app.add_subcommand(
      "pairwise", "Estimate the relative motion of one map pair");
  std::vector<std::string> pairwise_maps;
  bool pairwise_json = false;
  ConfigFlags pairwise_flags;
  pairwise->add_option("maps", pairwise_maps, "Exactly two map .pgm files")
      ->expected(2)
      ->required();
  pairwise->add_flag("--json", pairwise_json, "Machine-readable output");
  add_config_flags(pairwise, pairwise_flags);

  // eval
  CLI::App* eval = app.add_subcommand(
      "eval", "Compare a merge report against ground-truth motions");
  std::string eval_report;
  std::string eval_truth;
  bool eval_json = false;
  eval->add_option("report", eval_report, "report.json path")->required();
  eval->add_option("truth", eval_truth, "ground_truth.json path")->required();
  eval->add_flag("--json", eval_json, "Machine-readable output");

  // render
  CLI::App* render = app.add_subcommand(
      "render", "Re-render the merged map from a report and map files");
  std::string render_report;
  std::vector<std::string> render_maps;
  std::string render_out;
  bool render_json = false;
  render->add_option("report", render_report, "report.json path")->required();
  render->add_option("maps", render_maps, "Map .pgm files or one directory")
      ->required();
  render->add_option("--out", render_out, "Output directory")->required();
  render->add_flag("--json", render_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << std::endl;
    return kExitUsage;
  }

  try {
    if (synth->parsed()) {
      synth_params.world_height = synth_params.world_width;
      return cmd_synth(synth_params, synth_seed, synth_out, synth_json);
    }
    if (merge->parsed()) {
      return cmd_merge(merge_maps, merge_flags, merge_out, merge_json,
                       dump_features, dump_graph);
    }
    if (pairwise->parsed()) {
      return cmd_pairwise(pairwise_maps[0], pairwise_maps[1], pairwise_flags,
                          pairwise_json);
    }
    if (eval->parsed()) {
      return cmd_eval(eval_report, eval_truth, eval_json);
    }
    if (render->parsed()) {
      return cmd_render(render_report, render_maps, render_out, render_json);
    }
  } catch (const InfeasibleParams& e) {
    std::cerr << e.what() << std::endl;
    return kExitInfeasible;
  } catch (const SchemaError& e) {
    std::cerr << e.what() << std::endl;
    return kExitSchema;
  } catch (const GraphDisconnected& e) {
    std::cerr << e.what() << std::endl;
    return kExitDisconnected;
  } catch (const TooFewMaps& e) {
    std::cerr << e.what() << std::endl;
    return kExitUsage;
  } catch (const ResolutionMismatch& e) {
    std::cerr << e.what() << std::endl;
    return kExitSchema;
  } catch (const IoError& e) {
    std::cerr << e.what() << std::endl;
    return kExitIo;
  } catch (const FormatError& e) {
    std::cerr << e.what() << std::endl;
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << std::endl;
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << e.what() << std::endl;
    return kExitIo;
  }
  return kExitUsage;
}

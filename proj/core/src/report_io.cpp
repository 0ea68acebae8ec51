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

#include "gridmerge/report_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gridmerge/errors.hpp"

namespace gridmerge {

namespace {

using nlohmann::json;

json motions_to_json_array(const std::vector<Motion2D>& motions) {
  json arr = json::array();
  for (std::size_t k = 0; k < motions.size(); ++k) {
    json m;
    m["index"] = k;
    m["theta_rad"] = motions[k].theta;
    m["tx_cells"] = motions[k].t.x();
    m["ty_cells"] = motions[k].t.y();
    arr.push_back(std::move(m));
  }
  return arr;
}

std::vector<Motion2D> motions_from_json_array(const json& arr,
                                              const std::string& what) {
  if (!arr.is_array()) {
    throw SchemaError(what + " must be an array of motions");
  }
  std::vector<Motion2D> motions;
  motions.reserve(arr.size());
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const json& m = arr[k];
    if (!m.is_object() || !m.contains("index") || !m.contains("theta_rad") ||
        !m.contains("tx_cells") || !m.contains("ty_cells") ||
        !m["index"].is_number_integer() ||
        m["index"].get<std::size_t>() != k) {
      throw SchemaError(what + "[" + std::to_string(k) +
                        "] is not a valid motion record");
    }
    motions.emplace_back(m["theta_rad"].get<double>(),
                         m["tx_cells"].get<double>(),
                         m["ty_cells"].get<double>());
  }
  return motions;
}

json parse_document(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError("cannot parse " + what + ": " + e.what());
  }
}

template <typename T>
T require(const json& doc, const std::string& key, const std::string& what) {
  if (!doc.contains(key)) {
    throw SchemaError(what + " lacks required key \"" + key + "\"");
  }
  try {
    return doc[key].get<T>();
  } catch (const json::exception&) {
    throw SchemaError(what + " key \"" + key + "\" has the wrong type");
  }
}

json config_to_json_object(const MergeConfig& c) {
  json doc;
  doc["master_seed"] = c.master_seed;
  doc["lambda"] = c.lambda;
  doc["xi_min"] = c.xi_min;
  doc["tricp_max_iterations"] = c.tricp_max_iterations;
  doc["tricp_epsilon"] = c.tricp_epsilon;
  doc["d_thr_feat"] = c.d_thr_feat;
  doc["d_thr_motion"] = c.d_thr_motion;
  doc["kappa"] = c.kappa;
  doc["ransac_iterations"] = c.ransac_iterations;
  doc["mcs_iterations_factor"] = c.mcs_iterations_factor;
  doc["min_inliers"] = c.min_inliers;
  doc["avg_epsilon"] = c.avg_epsilon;
  doc["avg_max_sweeps"] = c.avg_max_sweeps;
  doc["thread_count"] = c.thread_count;
  return doc;
}

MergeConfig config_from_json_object(const json& doc, MergeConfig base,
                                    const std::string& what) {
  if (!doc.is_object()) {
    throw SchemaError(what + " must be a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "master_seed") {
        base.master_seed = value.get<std::uint64_t>();
      } else if (key == "lambda") {
        base.lambda = value.get<double>();
      } else if (key == "xi_min") {
        base.xi_min = value.get<double>();
      } else if (key == "tricp_max_iterations") {
        base.tricp_max_iterations = value.get<int>();
      } else if (key == "tricp_epsilon") {
        base.tricp_epsilon = value.get<double>();
      } else if (key == "d_thr_feat") {
        base.d_thr_feat = value.get<double>();
      } else if (key == "d_thr_motion") {
        base.d_thr_motion = value.get<double>();
      } else if (key == "kappa") {
        base.kappa = value.get<double>();
      } else if (key == "ransac_iterations") {
        base.ransac_iterations = value.get<int>();
      } else if (key == "mcs_iterations_factor") {
        base.mcs_iterations_factor = value.get<int>();
      } else if (key == "min_inliers") {
        base.min_inliers = value.get<int>();
      } else if (key == "avg_epsilon") {
        base.avg_epsilon = value.get<double>();
      } else if (key == "avg_max_sweeps") {
        base.avg_max_sweeps = value.get<int>();
      } else if (key == "thread_count") {
        base.thread_count = value.get<int>();
      } else {
        throw SchemaError(what + " has unknown key \"" + key + "\"");
      }
    } catch (const json::exception&) {
      throw SchemaError(what + " key \"" + key + "\" has the wrong type");
    }
  }
  return base;
}

}  // namespace

std::string report_to_json(const MergeReport& report) {
  json doc;
  doc["n_maps"] = report.n_maps;
  doc["status"] = report.status;
  doc["pairwise_attempted"] = report.pairwise_attempted;
  doc["pairwise_succeeded"] = report.pairwise_succeeded;
  doc["e_best"] = report.e_best;
  json pairs = json::array();
  for (const PairRecord& rec : report.pairs) {
    json p;
    p["i"] = rec.i;
    p["j"] = rec.j;
    p["status"] = rec.status;
    p["reject_stage"] = rec.reject_stage;
    p["inliers"] = rec.inliers;
    p["overlap"] = rec.overlap;
    p["objective"] = rec.objective;
    p["classification"] = rec.classification;
    pairs.push_back(std::move(p));
  }
  doc["pairs"] = std::move(pairs);
  doc["coarse_error"] = report.coarse_error;
  doc["fine_error"] = report.fine_error;
  doc["mean_pairwise_objective"] = report.mean_pairwise_objective;
  doc["motion_consistency_residual"] = report.motion_consistency_residual;
  doc["motions_coarse"] = motions_to_json_array(report.motions_coarse);
  doc["motions_fine"] = motions_to_json_array(report.motions_fine);
  json timings;
  for (const auto& [name, value] : report.timings_ms) {
    timings[name] = value;
  }
  doc["timings_ms"] = std::move(timings);
  doc["converged"] = report.converged;
  doc["disconnected_components"] = report.disconnected_components;
  doc["config"] = config_to_json_object(report.config);
  return doc.dump(2) + "\n";
}

MergeReport report_from_json(const std::string& text) {
  const json doc = parse_document(text, "report");
  if (!doc.is_object()) {
    throw SchemaError("report must be a JSON object");
  }
  MergeReport report;
  report.n_maps = require<int>(doc, "n_maps", "report");
  report.status = require<std::string>(doc, "status", "report");
  report.pairwise_attempted =
      require<int>(doc, "pairwise_attempted", "report");
  report.pairwise_succeeded =
      require<int>(doc, "pairwise_succeeded", "report");
  report.e_best = require<int>(doc, "e_best", "report");
  report.coarse_error = require<double>(doc, "coarse_error", "report");
  report.fine_error = require<double>(doc, "fine_error", "report");
  report.converged = require<bool>(doc, "converged", "report");
  if (doc.contains("mean_pairwise_objective")) {
    report.mean_pairwise_objective =
        doc["mean_pairwise_objective"].get<double>();
  }
  if (doc.contains("motion_consistency_residual")) {
    report.motion_consistency_residual =
        doc["motion_consistency_residual"].get<double>();
  }
  if (!doc.contains("pairs") || !doc["pairs"].is_array()) {
    throw SchemaError("report lacks the \"pairs\" array");
  }
  for (const json& p : doc["pairs"]) {
    PairRecord rec;
    rec.i = require<int>(p, "i", "pair record");
    rec.j = require<int>(p, "j", "pair record");
    rec.status = require<std::string>(p, "status", "pair record");
    rec.reject_stage = p.value("reject_stage", std::string());
    rec.inliers = p.value("inliers", 0);
    rec.overlap = p.value("overlap", 0.0);
    rec.objective = p.value("objective", 0.0);
    rec.classification = p.value("classification", std::string());
    report.pairs.push_back(std::move(rec));
  }
  report.motions_coarse = doc.contains("motions_coarse")
                              ? motions_from_json_array(doc["motions_coarse"],
                                                        "motions_coarse")
                              : std::vector<Motion2D>{};
  report.motions_fine =
      motions_from_json_array(
          doc.contains("motions_fine") ? doc["motions_fine"] : json(),
          "motions_fine");
  if (doc.contains("timings_ms") && doc["timings_ms"].is_object()) {
    for (const auto& [name, value] : doc["timings_ms"].items()) {
      report.timings_ms[name] = value.get<double>();
    }
  }
  if (doc.contains("disconnected_components")) {
    report.disconnected_components =
        doc["disconnected_components"].get<std::vector<std::vector<int>>>();
  }
  if (doc.contains("config")) {
    report.config =
        config_from_json_object(doc["config"], MergeConfig{}, "config");
  }
  return report;
}

std::string ground_truth_to_json(const std::vector<Motion2D>& motions) {
  json doc;
  doc["motions"] = motions_to_json_array(motions);
  return doc.dump(2) + "\n";
}

std::vector<Motion2D> ground_truth_from_json(const std::string& text) {
  const json doc = parse_document(text, "ground truth");
  if (!doc.is_object() || !doc.contains("motions")) {
    throw SchemaError("ground truth lacks the \"motions\" array");
  }
  return motions_from_json_array(doc["motions"], "motions");
}

std::string config_to_json(const MergeConfig& config) {
  return config_to_json_object(config).dump(2) + "\n";
}

MergeConfig config_from_json(const std::string& text, MergeConfig base) {
  return config_from_json_object(parse_document(text, "config"),
                                 std::move(base), "config");
}

std::string keypoints_to_json(const std::vector<Keypoint>& keypoints) {
  json arr = json::array();
  for (const Keypoint& kp : keypoints) {
    json k;
    k["x"] = kp.position.x();
    k["y"] = kp.position.y();
    k["scale"] = kp.scale;
    k["orientation"] = kp.orientation;
    arr.push_back(std::move(k));
  }
  json doc;
  doc["keypoints"] = std::move(arr);
  return doc.dump(2) + "\n";
}

std::string graph_to_json(const MergeReport& report) {
  json edges = json::array();
  for (const PairRecord& rec : report.pairs) {
    if (rec.status != "merged") {
      continue;
    }
    json e;
    e["i"] = rec.i;
    e["j"] = rec.j;
    e["classification"] = rec.classification;
    e["inliers"] = rec.inliers;
    e["overlap"] = rec.overlap;
    e["objective"] = rec.objective;
    edges.push_back(std::move(e));
  }
  json doc;
  doc["n_maps"] = report.n_maps;
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out << content;
  if (!out) {
    throw IoError("short write to " + path.string());
  }
}

}  // namespace gridmerge

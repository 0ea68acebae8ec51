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

#ifndef GRIDMERGE_REPORT_IO_HPP_
#define GRIDMERGE_REPORT_IO_HPP_

#include <string>
#include <vector>

#include "gridmerge/pipeline.hpp"

namespace gridmerge {

// JSON (de)serialization with stable, sorted key order. Parsers throw
// SchemaError on malformed documents or missing fields.

std::string report_to_json(const MergeReport& report);
MergeReport report_from_json(const std::string& text);

std::string ground_truth_to_json(const std::vector<Motion2D>& motions);
std::vector<Motion2D> ground_truth_from_json(const std::string& text);

std::string config_to_json(const MergeConfig& config);
// Applies fields present in the document on top of `base`; unknown keys
// are rejected.
MergeConfig config_from_json(const std::string& text, MergeConfig base);

std::string keypoints_to_json(const std::vector<Keypoint>& keypoints);
std::string graph_to_json(const MergeReport& report);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

}  // namespace gridmerge

#endif  // GRIDMERGE_REPORT_IO_HPP_

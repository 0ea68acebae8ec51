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

#ifndef GRIDMERGE_SYNTHETIC_HPP_
#define GRIDMERGE_SYNTHETIC_HPP_

#include <cstdint>
#include <vector>

#include "gridmerge/grid_map.hpp"
#include "gridmerge/motion2d.hpp"

namespace gridmerge {

struct SynthParams {
  int world_width = 400;
  int world_height = 400;
  int room_count = 8;
  int corridor_width = 4;
  int n_submaps = 6;
  int window_size = 160;
  double min_overlap = 0.30;        // fraction of window area
  double noise_p = 0.01;            // Occupied <-> Free flip probability
  double rotation_range = 3.141592653589793;  // +/- per submap
  double translation_jitter = 4.0;  // cells, +/- per axis
  double resolution = 0.05;         // meters per cell
};

struct WindowRect {
  int x = 0;
  int y = 0;
  int size = 0;
};

// The generated world plus everything needed to score a merge against it.
// Ground-truth motion of submap 0 is identity; motions map submap cell
// coordinates into submap 0's frame.
struct SynthWorld {
  OccupancyGrid world;
  std::vector<WindowRect> windows;
  std::vector<Motion2D> ground_truth;
  SynthParams params;
};

struct SynthOutput {
  SynthWorld world;
  std::vector<OccupancyGrid> maps;
};

// Draws a floorplan (rooms joined by corridors, walls Occupied, interiors
// Free, exterior Unknown), carves overlapping windows, moves each window
// by a random rigid motion, re-rasterizes, and flips cells with
// probability noise_p. Deterministic in seed. Throws InfeasibleParams
// when the overlap constraint cannot be met in 1000 placement attempts.
SynthOutput generate_synthetic(const SynthParams& params, std::uint64_t seed);

}  // namespace gridmerge

#endif  // GRIDMERGE_SYNTHETIC_HPP_

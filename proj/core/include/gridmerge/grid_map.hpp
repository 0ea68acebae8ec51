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

#ifndef GRIDMERGE_GRID_MAP_HPP_
#define GRIDMERGE_GRID_MAP_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gridmerge/motion2d.hpp"

namespace gridmerge {

enum class CellState : std::uint8_t { Occupied, Free, Unknown };

// Canonical PGM byte values for each state.
inline std::uint8_t cell_state_byte(CellState s) {
  switch (s) {
    case CellState::Occupied:
      return 0;
    case CellState::Free:
      return 254;
    default:
      return 205;
  }
}

// Trinary occupancy raster. Row-major, cell (x, y) = (column, row), origin
// at the top-left cell of the PGM payload. Immutable once built; all free
// functions below are pure.
class OccupancyGrid {
 public:
  OccupancyGrid(int width, int height, double resolution,
                CellState fill = CellState::Unknown);
  OccupancyGrid(int width, int height, double resolution,
                std::vector<CellState> cells);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const std::vector<CellState>& cells() const { return cells_; }

  CellState at(int x, int y) const {
    return cells_[static_cast<std::size_t>(y) * width_ + x];
  }
  void set(int x, int y, CellState s) {
    cells_[static_cast<std::size_t>(y) * width_ + x] = s;
  }
  bool contains(int x, int y) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

  friend bool operator==(const OccupancyGrid& a,
                         const OccupancyGrid& b) = default;

 private:
  int width_;
  int height_;
  double resolution_;
  std::vector<CellState> cells_;
};

// Occupied cells bordering free space, as cell-center coordinates
// (column + 0.5, row + 0.5) in cell units.
using EdgePointSet = std::vector<Eigen::Vector2d>;

// Byte-to-state thresholds carried by the JSON sidecar.
struct GridEncoding {
  int occupied_max = 50;  // byte <= occupied_max  -> Occupied
  int free_min = 200;     // byte >= free_min      -> Free
};

// Reads `<stem>.pgm` (binary P5, maxval 255) plus its `<stem>.json`
// sidecar {"resolution": r, "occupied_max": o, "free_min": f}.
// Throws IoError / FormatError.
OccupancyGrid load_grid(const std::filesystem::path& pgm_path);

// Writes the grid with canonical bytes (Occupied 0, Free 254, Unknown 205)
// and a sidecar with default thresholds, so that load(save(g)) == g.
void save_grid(const OccupancyGrid& grid, const std::filesystem::path& pgm_path);

// Exactly the Occupied cells with at least one Free 4-neighbor, in
// row-major order.
EdgePointSet extract_edge_points(const OccupancyGrid& grid);

// Fuses the grids into one raster covering the union of the transformed
// extents plus a one-cell margin. motions[k] maps grid k cell coordinates
// into the reference frame; motions[0] must be identity. Per output cell,
// every grid is sampled at the inverse-transformed location (nearest
// neighbor) and the samples fuse with precedence Occupied > Free > Unknown.
OccupancyGrid render_merged(const std::vector<OccupancyGrid>& grids,
                            const std::vector<Motion2D>& motions);

}  // namespace gridmerge

#endif  // GRIDMERGE_GRID_MAP_HPP_

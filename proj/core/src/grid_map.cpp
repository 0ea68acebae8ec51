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

#include "gridmerge/grid_map.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gridmerge/errors.hpp"

namespace gridmerge {

namespace {

using nlohmann::json;

// Reads one PNM header token, skipping whitespace and '#' comments.
std::string next_pnm_token(std::istream& in) {
  std::string token;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') {
        c = in.get();
      }
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c)) {
    token.push_back(static_cast<char>(c));
    c = in.get();
  }
  return token;
}

int parse_positive_int(const std::string& token, const std::string& what,
                       const std::filesystem::path& path) {
  try {
    std::size_t pos = 0;
    const int value = std::stoi(token, &pos);
    if (pos != token.size() || value <= 0) {
      throw std::invalid_argument(token);
    }
    return value;
  } catch (const std::exception&) {
    throw FormatError("invalid " + what + " '" + token + "' in " +
                      path.string());
  }
}

std::filesystem::path sidecar_path(const std::filesystem::path& pgm_path) {
  std::filesystem::path p = pgm_path;
  p.replace_extension(".json");
  return p;
}

struct Sidecar {
  double resolution = 0.0;
  GridEncoding encoding;
};

Sidecar load_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("missing or unreadable sidecar " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("invalid sidecar " + path.string() + ": " + e.what());
  }
  Sidecar sc;
  if (!doc.is_object() || !doc.contains("resolution") ||
      !doc["resolution"].is_number()) {
    throw FormatError("sidecar " + path.string() +
                      " lacks a numeric \"resolution\"");
  }
  sc.resolution = doc["resolution"].get<double>();
  if (!(sc.resolution > 0.0)) {
    throw FormatError("sidecar " + path.string() + ": resolution must be > 0");
  }
  if (doc.contains("occupied_max")) {
    sc.encoding.occupied_max = doc["occupied_max"].get<int>();
  }
  if (doc.contains("free_min")) {
    sc.encoding.free_min = doc["free_min"].get<int>();
  }
  if (sc.encoding.occupied_max < 0 || sc.encoding.free_min > 255 ||
      sc.encoding.occupied_max >= sc.encoding.free_min) {
    throw FormatError("sidecar " + path.string() +
                      ": thresholds must satisfy 0 <= occupied_max < free_min "
                      "<= 255");
  }
  return sc;
}

}  // namespace

OccupancyGrid::OccupancyGrid(int width, int height, double resolution,
                             CellState fill)
    : width_(width),
      height_(height),
      resolution_(resolution),
      cells_(static_cast<std::size_t>(width) * height, fill) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("grid dimensions must be positive");
  }
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("grid resolution must be > 0");
  }
}

OccupancyGrid::OccupancyGrid(int width, int height, double resolution,
                             std::vector<CellState> cells)
    : OccupancyGrid(width, height, resolution) {
  if (cells.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("cell count does not match dimensions");
  }
  cells_ = std::move(cells);
}

OccupancyGrid load_grid(const std::filesystem::path& pgm_path) {
  std::ifstream in(pgm_path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + pgm_path.string());
  }
  const std::string magic = next_pnm_token(in);
  if (magic != "P5") {
    throw FormatError(pgm_path.string() + " is not a binary PGM (magic '" +
                      magic + "')");
  }
  const int width = parse_positive_int(next_pnm_token(in), "width", pgm_path);
  const int height =
      parse_positive_int(next_pnm_token(in), "height", pgm_path);
  const int maxval =
      parse_positive_int(next_pnm_token(in), "maxval", pgm_path);
  if (maxval != 255) {
    throw FormatError(pgm_path.string() + ": maxval must be 255, got " +
                      std::to_string(maxval));
  }
  // The single whitespace byte after maxval was consumed by the tokenizer.
  const std::size_t count = static_cast<std::size_t>(width) * height;
  std::vector<std::uint8_t> bytes(count);
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(in.gcount()) != count) {
    throw FormatError(pgm_path.string() + ": truncated pixel payload (" +
                      std::to_string(in.gcount()) + " of " +
                      std::to_string(count) + " bytes)");
  }

  const Sidecar sc = load_sidecar(sidecar_path(pgm_path));
  std::vector<CellState> cells(count);
  for (std::size_t k = 0; k < count; ++k) {
    const int b = bytes[k];
    if (b <= sc.encoding.occupied_max) {
      cells[k] = CellState::Occupied;
    } else if (b >= sc.encoding.free_min) {
      cells[k] = CellState::Free;
    } else {
      cells[k] = CellState::Unknown;
    }
  }
  return OccupancyGrid(width, height, sc.resolution, std::move(cells));
}

void save_grid(const OccupancyGrid& grid,
               const std::filesystem::path& pgm_path) {
  {
    std::ofstream out(pgm_path, std::ios::binary);
    if (!out) {
      throw IoError("cannot write " + pgm_path.string());
    }
    out << "P5\n"
        << grid.width() << " " << grid.height() << "\n"
        << 255 << "\n";
    std::vector<std::uint8_t> bytes;
    bytes.reserve(grid.cells().size());
    for (CellState s : grid.cells()) {
      bytes.push_back(cell_state_byte(s));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      throw IoError("short write to " + pgm_path.string());
    }
  }
  nlohmann::json sidecar;
  sidecar["resolution"] = grid.resolution();
  sidecar["occupied_max"] = GridEncoding{}.occupied_max;
  sidecar["free_min"] = GridEncoding{}.free_min;
  std::ofstream out(sidecar_path(pgm_path));
  if (!out) {
    throw IoError("cannot write " + sidecar_path(pgm_path).string());
  }
  out << sidecar.dump(2) << "\n";
  if (!out) {
    throw IoError("short write to " + sidecar_path(pgm_path).string());
  }
}

EdgePointSet extract_edge_points(const OccupancyGrid& grid) {
  EdgePointSet points;
  const int w = grid.width();
  const int h = grid.height();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (grid.at(x, y) != CellState::Occupied) {
        continue;
      }
      const bool free_neighbor =
          (x > 0 && grid.at(x - 1, y) == CellState::Free) ||
          (x + 1 < w && grid.at(x + 1, y) == CellState::Free) ||
          (y > 0 && grid.at(x, y - 1) == CellState::Free) ||
          (y + 1 < h && grid.at(x, y + 1) == CellState::Free);
      if (free_neighbor) {
        points.emplace_back(x + 0.5, y + 0.5);
      }
    }
  }
  return points;
}

OccupancyGrid render_merged(const std::vector<OccupancyGrid>& grids,
                            const std::vector<Motion2D>& motions) {
  if (grids.empty()) {
    throw EmptyInput("render_merged needs at least one grid");
  }
  if (motions.size() != grids.size()) {
    throw std::invalid_argument("one motion per grid required");
  }
  const double resolution = grids.front().resolution();
  for (const OccupancyGrid& g : grids) {
    if (g.resolution() != resolution) {
      throw ResolutionMismatch("input grids have differing resolutions");
    }
  }

  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grids.size(); ++k) {
    const double w = grids[k].width();
    const double h = grids[k].height();
    const Eigen::Vector2d corners[4] = {
        {0.0, 0.0}, {w, 0.0}, {0.0, h}, {w, h}};
    for (const Eigen::Vector2d& c : corners) {
      const Eigen::Vector2d p = motions[k].apply(c);
      min_x = std::min(min_x, p.x());
      min_y = std::min(min_y, p.y());
      max_x = std::max(max_x, p.x());
      max_y = std::max(max_y, p.y());
    }
  }

  // Snap the origin to the cell lattice so identity inputs copy through
  // exactly; one-cell margin on every side.
  const double origin_x = std::floor(min_x) - 1.0;
  const double origin_y = std::floor(min_y) - 1.0;
  const int out_w = static_cast<int>(std::ceil(max_x) - origin_x) + 1;
  const int out_h = static_cast<int>(std::ceil(max_y) - origin_y) + 1;

  OccupancyGrid out(out_w, out_h, resolution, CellState::Unknown);
  std::vector<Motion2D> inverses;
  inverses.reserve(motions.size());
  for (const Motion2D& m : motions) {
    inverses.push_back(m.inverse());
  }

  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      const Eigen::Vector2d center(origin_x + x + 0.5, origin_y + y + 0.5);
      CellState fused = CellState::Unknown;
      for (std::size_t k = 0; k < grids.size(); ++k) {
        const Eigen::Vector2d p = inverses[k].apply(center);
        const int cx = static_cast<int>(std::floor(p.x()));
        const int cy = static_cast<int>(std::floor(p.y()));
        if (!grids[k].contains(cx, cy)) {
          continue;
        }
        const CellState s = grids[k].at(cx, cy);
        if (s == CellState::Occupied) {
          fused = CellState::Occupied;
          break;
        }
        if (s == CellState::Free) {
          fused = CellState::Free;
        }
      }
      out.set(x, y, fused);
    }
  }
  return out;
}

}  // namespace gridmerge

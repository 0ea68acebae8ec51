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

#include "gridmerge/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gridmerge/errors.hpp"
#include "gridmerge/rng.hpp"

namespace gridmerge {

namespace {

constexpr int kPlacementAttempts = 1000;
constexpr int kMinWindowOccupied = 150;
constexpr int kMinOverlapOccupied = 60;

struct Rect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool intersects(const Rect& o, int margin) const {
    return x0 - margin < o.x1 && o.x0 - margin < x1 && y0 - margin < o.y1 &&
           o.y0 - margin < y1;
  }
};

class Mask {
 public:
  Mask(int w, int h) : w_(w), h_(h), data_(static_cast<std::size_t>(w) * h) {}
  bool get(int x, int y) const {
    return data_[static_cast<std::size_t>(y) * w_ + x] != 0;
  }
  void set(int x, int y, bool v) {
    data_[static_cast<std::size_t>(y) * w_ + x] = v ? 1 : 0;
  }
  void fill_rect(const Rect& r, bool v) {
    for (int y = std::max(0, r.y0); y < std::min(h_, r.y1); ++y) {
      for (int x = std::max(0, r.x0); x < std::min(w_, r.x1); ++x) {
        set(x, y, v);
      }
    }
  }

 private:
  int w_, h_;
  std::vector<std::uint8_t> data_;
};

// Free interiors surrounded by Occupied boundary cells, Unknown elsewhere.
OccupancyGrid build_floorplan(const SynthParams& p, Rng& rng) {
  const int w = p.world_width;
  const int h = p.world_height;
  Mask free_mask(w, h);

  // Rooms: dispersed axis-aligned rectangles.
  std::vector<Rect> rooms;
  const int max_side = std::max(30, std::min({110, w - 8, h - 8}));
  const int min_side = std::min(30, max_side);
  for (int r = 0; r < p.room_count; ++r) {
    bool placed = false;
    for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
      Rect rect;
      rect.x0 = rng.next_int(3, std::max(4, w - min_side - 3));
      rect.y0 = rng.next_int(3, std::max(4, h - min_side - 3));
      rect.x1 = rect.x0 + rng.next_int(min_side, max_side + 1);
      rect.y1 = rect.y0 + rng.next_int(min_side, max_side + 1);
      rect.x1 = std::min(rect.x1, w - 3);
      rect.y1 = std::min(rect.y1, h - 3);
      if (rect.width() < min_side || rect.height() < min_side) {
        continue;
      }
      bool clash = false;
      for (const Rect& other : rooms) {
        if (rect.intersects(other, p.corridor_width + 3)) {
          clash = true;
          break;
        }
      }
      if (!clash) {
        rooms.push_back(rect);
        placed = true;
      }
    }
  }
  if (rooms.empty()) {
    throw InfeasibleParams("could not place any room in the world");
  }
  for (const Rect& room : rooms) {
    free_mask.fill_rect(room, true);
  }

  // L-shaped corridors between consecutive rooms.
  const int cw = std::max(1, p.corridor_width);
  for (std::size_t r = 1; r < rooms.size(); ++r) {
    const Rect& a = rooms[r - 1];
    const Rect& b = rooms[r];
    const int ax = rng.next_int(a.x0 + 1, std::max(a.x0 + 2, a.x1 - 1));
    const int ay = rng.next_int(a.y0 + 1, std::max(a.y0 + 2, a.y1 - 1));
    const int bx = rng.next_int(b.x0 + 1, std::max(b.x0 + 2, b.x1 - 1));
    const int by = rng.next_int(b.y0 + 1, std::max(b.y0 + 2, b.y1 - 1));
    Rect horiz{std::min(ax, bx), ay - cw / 2, std::max(ax, bx) + 1,
               ay - cw / 2 + cw};
    Rect vert{bx - cw / 2, std::min(ay, by), bx - cw / 2 + cw,
              std::max(ay, by) + 1};
    free_mask.fill_rect(horiz, true);
    free_mask.fill_rect(vert, true);
  }

  // Clutter: small blocks carved out of room interiors; they become
  // occupied islands that anchor features and break symmetries.
  for (const Rect& room : rooms) {
    const int blocks = 2 + (room.width() * room.height()) / 500;
    for (int bi = 0; bi < blocks; ++bi) {
      const int bw = rng.next_int(1, 4);
      const int bh = rng.next_int(1, 4);
      if (room.width() <= bw + 4 || room.height() <= bh + 4) {
        continue;
      }
      const int bx = rng.next_int(room.x0 + 2, room.x1 - bw - 2);
      const int by = rng.next_int(room.y0 + 2, room.y1 - bh - 2);
      free_mask.fill_rect(Rect{bx, by, bx + bw, by + bh}, false);
    }
  }

  OccupancyGrid world(w, h, p.resolution, CellState::Unknown);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (free_mask.get(x, y)) {
        world.set(x, y, CellState::Free);
        continue;
      }
      bool boundary = false;
      for (int dy = -1; dy <= 1 && !boundary; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx >= 0 && nx < w && ny >= 0 && ny < h &&
              free_mask.get(nx, ny)) {
            boundary = true;
            break;
          }
        }
      }
      if (boundary) {
        world.set(x, y, CellState::Occupied);
      }
    }
  }
  return world;
}

// Summed-area table of occupied cells for fast window-structure checks.
class OccupiedCounts {
 public:
  explicit OccupiedCounts(const OccupancyGrid& g)
      : w_(g.width()), h_(g.height()),
        sums_(static_cast<std::size_t>(w_ + 1) * (h_ + 1), 0) {
    for (int y = 0; y < h_; ++y) {
      for (int x = 0; x < w_; ++x) {
        const int occ = g.at(x, y) == CellState::Occupied ? 1 : 0;
        at(x + 1, y + 1) = occ + at(x, y + 1) + at(x + 1, y) - at(x, y);
      }
    }
  }
  // Occupied cells in [x0, x1) x [y0, y1), clamped to the world.
  long count(int x0, int y0, int x1, int y1) const {
    x0 = std::clamp(x0, 0, w_);
    y0 = std::clamp(y0, 0, h_);
    x1 = std::clamp(x1, 0, w_);
    y1 = std::clamp(y1, 0, h_);
    if (x1 <= x0 || y1 <= y0) {
      return 0;
    }
    return at(x1, y1) - at(x0, y1) - at(x1, y0) + at(x0, y0);
  }

 private:
  long& at(int x, int y) {
    return sums_[static_cast<std::size_t>(y) * (w_ + 1) + x];
  }
  long at(int x, int y) const {
    return sums_[static_cast<std::size_t>(y) * (w_ + 1) + x];
  }
  int w_, h_;
  std::vector<long> sums_;
};

std::vector<WindowRect> place_windows(const SynthParams& p,
                                      const OccupancyGrid& world, Rng& rng) {
  const int s = p.window_size;
  if (s > p.world_width || s > p.world_height) {
    throw InfeasibleParams("window does not fit inside the world");
  }
  const OccupiedCounts counts(world);
  const long min_overlap_area =
      static_cast<long>(std::ceil(p.min_overlap * s * s));
  const int max_x = p.world_width - s;
  const int max_y = p.world_height - s;

  std::vector<WindowRect> windows;
  for (int k = 0; k < p.n_submaps; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
      WindowRect w;
      w.size = s;
      if (k == 0) {
        w.x = rng.next_int(0, max_x + 1);
        w.y = rng.next_int(0, max_y + 1);
      } else {
        const WindowRect& anchor =
            windows[static_cast<std::size_t>(rng.next_int(0, k))];
        const int dmax = std::max(
            0, static_cast<int>(std::floor(s * (1.0 - p.min_overlap))));
        w.x = std::clamp(anchor.x + rng.next_int(-dmax, dmax + 1), 0, max_x);
        w.y = std::clamp(anchor.y + rng.next_int(-dmax, dmax + 1), 0, max_y);
        const long ox = s - std::abs(w.x - anchor.x);
        const long oy = s - std::abs(w.y - anchor.y);
        if (ox * oy < min_overlap_area) {
          continue;
        }
        // The shared region must carry enough structure to match on.
        const int ix0 = std::max(w.x, anchor.x);
        const int iy0 = std::max(w.y, anchor.y);
        const int ix1 = std::min(w.x, anchor.x) + s;
        const int iy1 = std::min(w.y, anchor.y) + s;
        if (counts.count(ix0, iy0, ix1, iy1) < kMinOverlapOccupied) {
          continue;
        }
      }
      if (counts.count(w.x, w.y, w.x + s, w.y + s) < kMinWindowOccupied) {
        continue;
      }
      windows.push_back(w);
      placed = true;
    }
    if (!placed) {
      throw InfeasibleParams(
          "could not satisfy the window overlap/structure constraint in " +
          std::to_string(kPlacementAttempts) + " attempts (window " +
          std::to_string(k) + ")");
    }
  }
  return windows;
}

}  // namespace

SynthOutput generate_synthetic(const SynthParams& params, std::uint64_t seed) {
  if (params.n_submaps < 1 || params.window_size < 16 ||
      params.world_width < 32 || params.world_height < 32 ||
      !(params.min_overlap > 0.0 && params.min_overlap <= 1.0) ||
      params.noise_p < 0.0 || params.noise_p > 1.0) {
    throw std::invalid_argument("invalid synthetic-world parameters");
  }

  Rng world_rng(derive_seed(seed, 1));
  OccupancyGrid world = build_floorplan(params, world_rng);

  Rng window_rng(derive_seed(seed, 2));
  const std::vector<WindowRect> windows =
      place_windows(params, world, window_rng);

  const int s = params.window_size;
  const Eigen::Vector2d center(s / 2.0, s / 2.0);
  const Eigen::Vector2d ref_offset(windows[0].x, windows[0].y);

  SynthOutput out{SynthWorld{world, windows, {}, params}, {}};
  for (int k = 0; k < params.n_submaps; ++k) {
    double theta = 0.0;
    Eigen::Vector2d jitter = Eigen::Vector2d::Zero();
    if (k > 0) {
      Rng motion_rng(derive_seed(seed, 3, static_cast<std::uint64_t>(k)));
      theta = motion_rng.next_range(-params.rotation_range,
                                    params.rotation_range);
      jitter.x() = motion_rng.next_range(-params.translation_jitter,
                                         params.translation_jitter);
      jitter.y() = motion_rng.next_range(-params.translation_jitter,
                                         params.translation_jitter);
    }
    const Eigen::Vector2d window_offset(windows[k].x, windows[k].y);
    const Eigen::Matrix2d rot = Motion2D(theta, 0, 0).rotation();
    const Motion2D truth(
        theta,
        center + jitter + window_offset - ref_offset - rot * center);
    out.world.ground_truth.push_back(truth);

    OccupancyGrid submap(s, s, params.resolution, CellState::Unknown);
    for (int row = 0; row < s; ++row) {
      for (int col = 0; col < s; ++col) {
        const Eigen::Vector2d p_sub(col + 0.5, row + 0.5);
        const Eigen::Vector2d p_loc = rot * (p_sub - center) + center + jitter;
        if (p_loc.x() < 0.0 || p_loc.x() >= s || p_loc.y() < 0.0 ||
            p_loc.y() >= s) {
          continue;  // outside the window: unexplored
        }
        const int wx = static_cast<int>(std::floor(p_loc.x())) + windows[k].x;
        const int wy = static_cast<int>(std::floor(p_loc.y())) + windows[k].y;
        if (world.contains(wx, wy)) {
          submap.set(col, row, world.at(wx, wy));
        }
      }
    }

    if (params.noise_p > 0.0) {
      Rng noise_rng(derive_seed(seed, 4, static_cast<std::uint64_t>(k)));
      for (int row = 0; row < s; ++row) {
        for (int col = 0; col < s; ++col) {
          const CellState state = submap.at(col, row);
          if (state == CellState::Unknown) {
            continue;
          }
          if (noise_rng.next_bernoulli(params.noise_p)) {
            submap.set(col, row,
                       state == CellState::Occupied ? CellState::Free
                                                    : CellState::Occupied);
          }
        }
      }
    }
    out.maps.push_back(std::move(submap));
  }
  return out;
}

}  // namespace gridmerge

// Deterministic synthetic images for the feature tests: a floorplan-like
// intensity image (walls 1.0, free space 0.0, unexplored 0.5) with
// irregular clutter so that no two local neighborhoods tie exactly.

#ifndef GRIDMERGE_TESTS_SUPPORT_TEST_IMAGES_HPP_
#define GRIDMERGE_TESTS_SUPPORT_TEST_IMAGES_HPP_

#include <Eigen/Core>

#include "gridmerge/image.hpp"
#include "gridmerge/rng.hpp"

namespace gridmerge_test {

inline void draw_rect_walls(gridmerge::Image& img, int x0, int y0, int x1,
                            int y1) {
  for (int x = x0; x <= x1; ++x) {
    img.at(x, y0) = 1.0;
    img.at(x, y1) = 1.0;
  }
  for (int y = y0; y <= y1; ++y) {
    img.at(x0, y) = 1.0;
    img.at(x1, y) = 1.0;
  }
  for (int y = y0 + 1; y < y1; ++y) {
    for (int x = x0 + 1; x < x1; ++x) {
      img.at(x, y) = 0.0;
    }
  }
}

// Odd-sized square floorplan (size must be odd for lossless 90-degree
// rotation of the scale pyramid's sample lattice).
inline gridmerge::Image make_floorplan_image(int size, std::uint64_t seed) {
  gridmerge::Image img(size, size, 0.5);
  draw_rect_walls(img, 4, 4, size / 2, size / 2 + 3);
  draw_rect_walls(img, size / 2 + 6, 8, size - 5, size / 2 - 2);
  draw_rect_walls(img, 7, size / 2 + 8, size - 12, size - 6);
  // Doorways.
  for (int x = size / 4; x < size / 4 + 4; ++x) {
    img.at(x, size / 2 + 3) = 0.0;
    img.at(x, size / 2 + 8) = 0.0;
  }
  for (int y = size / 4; y < size / 4 + 3; ++y) {
    img.at(size / 2, y) = 0.0;
    img.at(size / 2 + 6, y) = 0.0;
  }
  // Irregular clutter inside the rooms.
  gridmerge::Rng rng(seed);
  for (int b = 0; b < 26; ++b) {
    const int bw = rng.next_int(1, 4);
    const int bh = rng.next_int(1, 4);
    const int bx = rng.next_int(7, size - bw - 8);
    const int by = rng.next_int(7, size - bh - 8);
    bool inside_free = true;
    for (int y = by - 1; y <= by + bh && inside_free; ++y) {
      for (int x = bx - 1; x <= bx + bw; ++x) {
        if (img.at(x, y) != 0.0) {
          inside_free = false;
          break;
        }
      }
    }
    if (!inside_free) {
      continue;
    }
    for (int y = by; y < by + bh; ++y) {
      for (int x = bx; x < bx + bw; ++x) {
        img.at(x, y) = 1.0;
      }
    }
  }
  return img;
}

// Quarter-turn of a square image; pixel (x, y) moves to (y, S-1-x), so a
// keypoint at center position p maps to (p.y, S - p.x).
inline gridmerge::Image rot90(const gridmerge::Image& in) {
  gridmerge::Image out(in.height, in.width);
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      out.at(y, in.width - 1 - x) = in.at(x, y);
    }
  }
  return out;
}

inline Eigen::Vector2d rot90_position(const Eigen::Vector2d& p, int size) {
  return Eigen::Vector2d(p.y(), size - p.x());
}

// Copies `img` into a larger canvas at the given offset.
inline gridmerge::Image embed(const gridmerge::Image& img, int canvas_w,
                              int canvas_h, int off_x, int off_y,
                              double background = 0.5) {
  gridmerge::Image out(canvas_w, canvas_h, background);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      out.at(x + off_x, y + off_y) = img.at(x, y);
    }
  }
  return out;
}

}  // namespace gridmerge_test

#endif

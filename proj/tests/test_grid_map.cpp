#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <vector>

#include "gridmerge/errors.hpp"
#include "gridmerge/grid_map.hpp"
#include "gridmerge/rng.hpp"
#include "support/test_util.hpp"

using namespace gridmerge;
using gridmerge_test::TempDir;

namespace {

void write_pgm(const std::filesystem::path& path, int w, int h,
               const std::vector<std::uint8_t>& bytes,
               const std::string& sidecar) {
  {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n" << w << " " << h << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }
  std::filesystem::path sc = path;
  sc.replace_extension(".json");
  std::ofstream out(sc);
  out << sidecar;
}

OccupancyGrid random_trinary(int w, int h, std::uint64_t seed) {
  OccupancyGrid g(w, h, 0.05);
  Rng rng(seed);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int r = rng.next_int(0, 3);
      g.set(x, y,
            r == 0 ? CellState::Occupied
                   : (r == 1 ? CellState::Free : CellState::Unknown));
    }
  }
  return g;
}

// The extraction rule, re-derived cell by cell.
std::vector<Eigen::Vector2d> brute_force_edges(const OccupancyGrid& g) {
  std::vector<Eigen::Vector2d> out;
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      if (g.at(x, y) != CellState::Occupied) {
        continue;
      }
      bool free4 = false;
      const int nb[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
      for (const auto& d : nb) {
        const int nx = x + d[0];
        const int ny = y + d[1];
        if (g.contains(nx, ny) && g.at(nx, ny) == CellState::Free) {
          free4 = true;
        }
      }
      if (free4) {
        out.emplace_back(x + 0.5, y + 0.5);
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("load_grid maps bytes through the sidecar thresholds") {
  TempDir tmp;
  const auto path = tmp.path() / "a.pgm";
  write_pgm(path, 2, 2, {0, 254, 205, 0},
            R"({"resolution": 0.05, "occupied_max": 50, "free_min": 200})");
  const OccupancyGrid g = load_grid(path);
  CHECK(g.width() == 2);
  CHECK(g.height() == 2);
  CHECK(g.resolution() == doctest::Approx(0.05));
  CHECK(g.at(0, 0) == CellState::Occupied);
  CHECK(g.at(1, 0) == CellState::Free);
  CHECK(g.at(0, 1) == CellState::Unknown);
  CHECK(g.at(1, 1) == CellState::Occupied);
}

TEST_CASE("load_grid single unknown cell") {
  TempDir tmp;
  const auto path = tmp.path() / "b.pgm";
  write_pgm(path, 1, 1, {205}, R"({"resolution": 1.0})");
  const OccupancyGrid g = load_grid(path);
  CHECK(g.at(0, 0) == CellState::Unknown);
}

TEST_CASE("load_grid rejects truncated payloads and bad headers") {
  TempDir tmp;
  SUBCASE("truncated pixels") {
    const auto path = tmp.path() / "t.pgm";
    write_pgm(path, 2, 2, {0, 254}, R"({"resolution": 0.05})");
    CHECK_THROWS_AS(load_grid(path), FormatError);
  }
  SUBCASE("wrong magic") {
    const auto path = tmp.path() / "m.pgm";
    {
      std::ofstream out(path, std::ios::binary);
      out << "P2\n1 1\n255\n0";
    }
    std::ofstream(tmp.path() / "m.json") << R"({"resolution": 0.05})";
    CHECK_THROWS_AS(load_grid(path), FormatError);
  }
  SUBCASE("missing sidecar") {
    const auto path = tmp.path() / "n.pgm";
    std::ofstream out(path, std::ios::binary);
    out << "P5\n1 1\n255\n";
    out.put(0);
    out.close();
    CHECK_THROWS_AS(load_grid(path), FormatError);
  }
  SUBCASE("inverted thresholds") {
    const auto path = tmp.path() / "i.pgm";
    write_pgm(path, 1, 1, {0},
              R"({"resolution": 0.05, "occupied_max": 220, "free_min": 10})");
    CHECK_THROWS_AS(load_grid(path), FormatError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_grid(tmp.path() / "absent.pgm"), IoError);
  }
}

TEST_CASE("save_grid round trips bit-exactly") {
  TempDir tmp;
  SUBCASE("canonical 2x2") {
    OccupancyGrid g(2, 2, 0.05,
                    std::vector<CellState>{CellState::Occupied, CellState::Free,
                                           CellState::Unknown,
                                           CellState::Occupied});
    const auto path = tmp.path() / "rt.pgm";
    save_grid(g, path);
    CHECK(load_grid(path) == g);
  }
  SUBCASE("64x64 random trinary grid") {
    const OccupancyGrid g = random_trinary(64, 64, 20260810);
    const auto path = tmp.path() / "rand.pgm";
    save_grid(g, path);
    const OccupancyGrid back = load_grid(path);
    REQUIRE(back.cells().size() == g.cells().size());
    CHECK(back == g);
  }
  SUBCASE("unwritable directory") {
    const OccupancyGrid g(1, 1, 1.0);
    CHECK_THROWS_AS(save_grid(g, "/nonexistent_gridmerge_dir/x.pgm"), IoError);
  }
}

TEST_CASE("extract_edge_points basic shapes") {
  SUBCASE("all free yields nothing") {
    OccupancyGrid g(4, 4, 1.0, CellState::Free);
    CHECK(extract_edge_points(g).empty());
  }
  SUBCASE("single occupied center") {
    OccupancyGrid g(3, 3, 1.0, CellState::Free);
    g.set(1, 1, CellState::Occupied);
    const EdgePointSet pts = extract_edge_points(g);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].x() == doctest::Approx(1.5));
    CHECK(pts[0].y() == doctest::Approx(1.5));
  }
  SUBCASE("4x4 occupied block in a free field") {
    OccupancyGrid g(16, 16, 1.0, CellState::Free);
    for (int y = 6; y < 10; ++y) {
      for (int x = 6; x < 10; ++x) {
        g.set(x, y, CellState::Occupied);
      }
    }
    const EdgePointSet pts = extract_edge_points(g);
    const std::vector<Eigen::Vector2d> expected = brute_force_edges(g);
    REQUIRE(pts.size() == expected.size());
    CHECK(pts.size() == 12);  // block perimeter; interior 2x2 is enclosed
    for (std::size_t k = 0; k < pts.size(); ++k) {
      CHECK(pts[k] == expected[k]);
    }
  }
}

TEST_CASE("edge extraction properties on random grids") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
    const OccupancyGrid g = random_trinary(24, 17, seed);
    const EdgePointSet a = extract_edge_points(g);
    const EdgePointSet b = extract_edge_points(g);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k] == b[k]);
    }
    const std::vector<Eigen::Vector2d> expected = brute_force_edges(g);
    REQUIRE(a.size() == expected.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k] == expected[k]);
    }
    std::size_t occupied = 0;
    for (CellState s : g.cells()) {
      occupied += s == CellState::Occupied ? 1 : 0;
    }
    CHECK(a.size() <= occupied);
    std::set<std::pair<double, double>> uniq;
    for (const Eigen::Vector2d& p : a) {
      uniq.insert({p.x(), p.y()});
    }
    CHECK(uniq.size() == a.size());
  }
}

TEST_CASE("render_merged identity preserves content inside the margin") {
  const OccupancyGrid g = random_trinary(9, 7, 99);
  const OccupancyGrid out = render_merged({g}, {Motion2D::identity()});
  CHECK(out.width() == g.width() + 2);
  CHECK(out.height() == g.height() + 2);
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      CHECK(out.at(x + 1, y + 1) == g.at(x, y));
    }
  }
  for (int x = 0; x < out.width(); ++x) {
    CHECK(out.at(x, 0) == CellState::Unknown);
    CHECK(out.at(x, out.height() - 1) == CellState::Unknown);
  }
}

TEST_CASE("render_merged keeps disjoint translated grids disjoint") {
  OccupancyGrid a(4, 4, 1.0, CellState::Occupied);
  OccupancyGrid b(4, 4, 1.0, CellState::Occupied);
  // b shifts 10 cells right: extents [0,4]x[0,4] and [10,14]x[0,4],
  // bounding box [-1,15]x[-1,5] -> 16x6 output.
  const OccupancyGrid out =
      render_merged({a, b}, {Motion2D::identity(), Motion2D(0.0, 10.0, 0.0)});
  CHECK(out.width() == 16);
  CHECK(out.height() == 6);
  int occupied = 0;
  for (CellState s : out.cells()) {
    occupied += s == CellState::Occupied ? 1 : 0;
  }
  CHECK(occupied == 32);  // two 4x4 blocks, no overlap
  CHECK(out.at(1, 1) == CellState::Occupied);
  CHECK(out.at(11, 1) == CellState::Occupied);
  CHECK(out.at(6, 2) == CellState::Unknown);  // the gap between them
}

TEST_CASE("fusion precedence: occupied beats free beats unknown") {
  OccupancyGrid occ(2, 2, 1.0, CellState::Occupied);
  OccupancyGrid fre(2, 2, 1.0, CellState::Free);
  OccupancyGrid unk(2, 2, 1.0, CellState::Unknown);
  const Motion2D id = Motion2D::identity();
  CHECK(render_merged({occ, fre}, {id, id}).at(1, 1) == CellState::Occupied);
  CHECK(render_merged({fre, occ}, {id, id}).at(1, 1) == CellState::Occupied);
  CHECK(render_merged({fre, unk}, {id, id}).at(1, 1) == CellState::Free);
  CHECK(render_merged({unk, unk}, {id, id}).at(1, 1) == CellState::Unknown);
}

TEST_CASE("fusion matches a per-cell brute-force recomputation") {
  // Rotated/translated random grids; every output cell is re-fused here
  // with the same sampling rule, written independently.
  const OccupancyGrid a = random_trinary(12, 9, 5);
  const OccupancyGrid b = random_trinary(7, 11, 6);
  const std::vector<OccupancyGrid> grids{a, b};
  const std::vector<Motion2D> motions{Motion2D::identity(),
                                      Motion2D(0.7, 3.5, -2.25)};
  const OccupancyGrid out = render_merged(grids, motions);

  double min_x = 1e300;
  double min_y = 1e300;
  for (std::size_t k = 0; k < grids.size(); ++k) {
    const double w = grids[k].width();
    const double h = grids[k].height();
    for (const Eigen::Vector2d& corner :
         {Eigen::Vector2d{0, 0}, Eigen::Vector2d{w, 0}, Eigen::Vector2d{0, h},
          Eigen::Vector2d{w, h}}) {
      const Eigen::Vector2d p = motions[k].apply(corner);
      min_x = std::min(min_x, p.x());
      min_y = std::min(min_y, p.y());
    }
  }
  const double ox = std::floor(min_x) - 1.0;
  const double oy = std::floor(min_y) - 1.0;
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      CellState expected = CellState::Unknown;
      bool saw_free = false;
      for (std::size_t k = 0; k < grids.size(); ++k) {
        const Eigen::Vector2d local =
            motions[k].inverse().apply({ox + x + 0.5, oy + y + 0.5});
        const int cx = static_cast<int>(std::floor(local.x()));
        const int cy = static_cast<int>(std::floor(local.y()));
        if (!grids[k].contains(cx, cy)) {
          continue;
        }
        if (grids[k].at(cx, cy) == CellState::Occupied) {
          expected = CellState::Occupied;
          break;
        }
        saw_free = saw_free || grids[k].at(cx, cy) == CellState::Free;
      }
      if (expected != CellState::Occupied && saw_free) {
        expected = CellState::Free;
      }
      CHECK(out.at(x, y) == expected);
    }
  }
}

TEST_CASE("render_merged error cases") {
  CHECK_THROWS_AS(render_merged({}, {}), EmptyInput);
  OccupancyGrid a(2, 2, 1.0);
  OccupancyGrid b(2, 2, 0.5);
  CHECK_THROWS_AS(
      render_merged({a, b}, {Motion2D::identity(), Motion2D::identity()}),
      ResolutionMismatch);
}

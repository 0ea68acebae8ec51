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

#include "gridmerge/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include <Eigen/Dense>

#include "gridmerge/errors.hpp"

namespace gridmerge {

namespace {

constexpr int kOctaves = 3;
constexpr int kScalesPerOctave = 3;
constexpr int kGaussLevels = kScalesPerOctave + 3;  // 6
constexpr int kDogLevels = kScalesPerOctave + 2;    // 5
constexpr double kBaseSigma = 1.6;
constexpr double kAssumedInputSigma = 0.5;
constexpr double kContrastThreshold = 0.01;
constexpr double kEdgeRatio = 10.0;
constexpr int kBorder = 5;
constexpr int kMaxRefineSteps = 5;
constexpr int kOrientationBins = 36;
constexpr double kOrientationSigmaFactor = 1.5;
constexpr double kOrientationRadiusFactor = 3.0;  // * 1.5 * sigma
constexpr double kOrientationPeakRatio = 0.8;
constexpr int kDescWidth = 4;
constexpr int kDescOrientationBins = 8;
constexpr double kDescHistWidthFactor = 3.0;
constexpr double kDescClamp = 0.2;
constexpr double kPi = 3.141592653589793238462643383279502884;

struct Pyramid {
  // gauss[o][l]: sigma = kBaseSigma * 2^(l/3) in octave-o pixels.
  std::vector<std::vector<Image>> gauss;
  std::vector<std::vector<Image>> dog;
};

double level_k() { return std::pow(2.0, 1.0 / kScalesPerOctave); }

Pyramid build_pyramid(const Image& image) {
  Pyramid pyr;
  pyr.gauss.resize(kOctaves);
  pyr.dog.resize(kOctaves);
  const double k = level_k();

  Image base = gaussian_blur(
      image, std::sqrt(kBaseSigma * kBaseSigma -
                       kAssumedInputSigma * kAssumedInputSigma));
  for (int o = 0; o < kOctaves; ++o) {
    pyr.gauss[o].resize(kGaussLevels);
    pyr.gauss[o][0] = std::move(base);
    for (int l = 1; l < kGaussLevels; ++l) {
      const double sigma_prev = kBaseSigma * std::pow(k, l - 1);
      const double sigma_inc = sigma_prev * std::sqrt(k * k - 1.0);
      pyr.gauss[o][l] = gaussian_blur(pyr.gauss[o][l - 1], sigma_inc);
    }
    pyr.dog[o].resize(kDogLevels);
    for (int l = 0; l < kDogLevels; ++l) {
      const Image& a = pyr.gauss[o][l];
      const Image& b = pyr.gauss[o][l + 1];
      Image d(a.width, a.height);
      for (std::size_t idx = 0; idx < d.px.size(); ++idx) {
        d.px[idx] = b.px[idx] - a.px[idx];
      }
      pyr.dog[o][l] = std::move(d);
    }
    if (o + 1 < kOctaves) {
      // Level kScalesPerOctave carries sigma = 2 * base; halving the
      // resolution brings it back to the octave base sigma.
      base = downsample2(pyr.gauss[o][kScalesPerOctave]);
    }
  }
  return pyr;
}

struct Candidate {
  int octave = 0;
  int layer = 0;   // DoG layer in [1, kDogLevels - 2]
  double x = 0.0;  // octave-local pixel coordinates
  double y = 0.0;
  double layer_offset = 0.0;
};

bool refine_candidate(const std::vector<Image>& dog, int x, int y, int l,
                      Candidate& out) {
  const int w = dog[0].width;
  const int h = dog[0].height;
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();
  for (int step = 0; step < kMaxRefineSteps; ++step) {
    const Image& d0 = dog[l - 1];
    const Image& d1 = dog[l];
    const Image& d2 = dog[l + 1];

    const double dx = 0.5 * (d1.at(x + 1, y) - d1.at(x - 1, y));
    const double dy = 0.5 * (d1.at(x, y + 1) - d1.at(x, y - 1));
    const double ds = 0.5 * (d2.at(x, y) - d0.at(x, y));

    const double v = d1.at(x, y);
    const double dxx = d1.at(x + 1, y) + d1.at(x - 1, y) - 2.0 * v;
    const double dyy = d1.at(x, y + 1) + d1.at(x, y - 1) - 2.0 * v;
    const double dss = d2.at(x, y) + d0.at(x, y) - 2.0 * v;
    const double dxy = 0.25 * (d1.at(x + 1, y + 1) - d1.at(x - 1, y + 1) -
                               d1.at(x + 1, y - 1) + d1.at(x - 1, y - 1));
    const double dxs = 0.25 * (d2.at(x + 1, y) - d2.at(x - 1, y) -
                               d0.at(x + 1, y) + d0.at(x - 1, y));
    const double dys = 0.25 * (d2.at(x, y + 1) - d2.at(x, y - 1) -
                               d0.at(x, y + 1) + d0.at(x, y - 1));

    Eigen::Matrix3d hess;
    hess << dxx, dxy, dxs, dxy, dyy, dys, dxs, dys, dss;
    const Eigen::Vector3d grad(dx, dy, ds);
    offset = hess.partialPivLu().solve(-grad);
    if (!offset.allFinite()) {
      return false;
    }
    if (std::abs(offset.x()) < 0.5 && std::abs(offset.y()) < 0.5 &&
        std::abs(offset.z()) < 0.5) {
      const double refined = v + 0.5 * grad.dot(offset);
      if (std::abs(refined) < kContrastThreshold) {
        return false;
      }
      // Principal-curvature (edge response) test on the spatial Hessian.
      const double tr = dxx + dyy;
      const double det = dxx * dyy - dxy * dxy;
      if (det <= 0.0 ||
          tr * tr * kEdgeRatio >= (kEdgeRatio + 1.0) * (kEdgeRatio + 1.0) * det) {
        return false;
      }
      out.layer = l;
      out.x = x + offset.x();
      out.y = y + offset.y();
      out.layer_offset = offset.z();
      return true;
    }
    x += static_cast<int>(std::lround(offset.x()));
    y += static_cast<int>(std::lround(offset.y()));
    l += static_cast<int>(std::lround(offset.z()));
    if (l < 1 || l > kDogLevels - 2 || x < kBorder || x >= w - kBorder ||
        y < kBorder || y >= h - kBorder) {
      return false;
    }
  }
  return false;
}

// Dominant gradient directions from a 36-bin Gaussian-weighted histogram;
// every peak >= 0.8 * max (strict circular local maximum) yields one
// orientation via parabolic interpolation.
std::vector<double> dominant_orientations(const Image& img, double x, double y,
                                          double sigma) {
  const double ori_sigma = kOrientationSigmaFactor * sigma;
  const int radius = std::max(
      1, static_cast<int>(std::lround(kOrientationRadiusFactor * ori_sigma)));
  const int cx = static_cast<int>(std::lround(x));
  const int cy = static_cast<int>(std::lround(y));
  const double denom = 2.0 * ori_sigma * ori_sigma;
  const double bin_width = 2.0 * kPi / kOrientationBins;

  double hist[kOrientationBins] = {0.0};
  for (int i = -radius; i <= radius; ++i) {
    const int yy = cy + i;
    if (yy < 1 || yy >= img.height - 1) {
      continue;
    }
    for (int j = -radius; j <= radius; ++j) {
      const int xx = cx + j;
      if (xx < 1 || xx >= img.width - 1) {
        continue;
      }
      const double gx = img.at(xx + 1, yy) - img.at(xx - 1, yy);
      const double gy = img.at(xx, yy + 1) - img.at(xx, yy - 1);
      const double mag = std::sqrt(gx * gx + gy * gy);
      if (mag == 0.0) {
        continue;
      }
      const double weight = std::exp(-(i * i + j * j) / denom);
      const double ang = std::atan2(gy, gx);
      int bin = static_cast<int>(std::floor((ang + kPi) / bin_width));
      if (bin >= kOrientationBins) {
        bin -= kOrientationBins;
      }
      if (bin < 0) {
        bin = 0;
      }
      hist[bin] += weight * mag;
    }
  }

  double max_val = 0.0;
  for (double v : hist) {
    max_val = std::max(max_val, v);
  }
  std::vector<double> orientations;
  if (max_val <= 0.0) {
    return orientations;
  }
  for (int b = 0; b < kOrientationBins; ++b) {
    const double left = hist[(b + kOrientationBins - 1) % kOrientationBins];
    const double right = hist[(b + 1) % kOrientationBins];
    const double center = hist[b];
    if (center > left && center > right &&
        center >= kOrientationPeakRatio * max_val) {
      const double denom2 = left - 2.0 * center + right;
      const double shift = denom2 != 0.0 ? 0.5 * (left - right) / denom2 : 0.0;
      const double bin_pos = b + shift;
      const double angle = (bin_pos + 0.5) * bin_width - kPi;
      orientations.push_back(wrap_angle(angle));
    }
  }
  return orientations;
}

std::vector<Keypoint> detect_impl(const Pyramid& pyr) {
  std::vector<Keypoint> keypoints;
  const double k = level_k();
  for (int o = 0; o < kOctaves; ++o) {
    const std::vector<Image>& dog = pyr.dog[o];
    const int w = dog[0].width;
    const int h = dog[0].height;
    if (w < 2 * kBorder + 1 || h < 2 * kBorder + 1) {
      continue;
    }
    for (int l = 1; l <= kDogLevels - 2; ++l) {
      const Image& d0 = dog[l - 1];
      const Image& d1 = dog[l];
      const Image& d2 = dog[l + 1];
      for (int y = kBorder; y < h - kBorder; ++y) {
        for (int x = kBorder; x < w - kBorder; ++x) {
          const double v = d1.at(x, y);
          if (std::abs(v) < 0.5 * kContrastThreshold) {
            continue;
          }
          bool is_max = v > 0.0;
          bool is_min = v < 0.0;
          for (int dl = -1; dl <= 1 && (is_max || is_min); ++dl) {
            const Image& layer = dl < 0 ? d0 : (dl > 0 ? d2 : d1);
            for (int dy = -1; dy <= 1 && (is_max || is_min); ++dy) {
              for (int dx = -1; dx <= 1; ++dx) {
                if (dl == 0 && dy == 0 && dx == 0) {
                  continue;
                }
                const double nv = layer.at(x + dx, y + dy);
                if (is_max && v <= nv) {
                  is_max = false;
                }
                if (is_min && v >= nv) {
                  is_min = false;
                }
                if (!is_max && !is_min) {
                  break;
                }
              }
            }
          }
          if (!is_max && !is_min) {
            continue;
          }
          Candidate cand;
          cand.octave = o;
          if (!refine_candidate(dog, x, y, l, cand)) {
            continue;
          }
          const double octave_scale =
              kBaseSigma * std::pow(k, cand.layer + cand.layer_offset);
          const double cell_factor = static_cast<double>(1 << o);
          const Image& ori_img = pyr.gauss[o][cand.layer];
          const std::vector<double> orientations =
              dominant_orientations(ori_img, cand.x, cand.y, octave_scale);
          for (double angle : orientations) {
            Keypoint kp;
            kp.position = Eigen::Vector2d(cand.x * cell_factor + 0.5,
                                          cand.y * cell_factor + 0.5);
            kp.scale = octave_scale * cell_factor;
            kp.orientation = angle;
            kp.octave = o;
            kp.layer = cand.layer;
            keypoints.push_back(kp);
          }
        }
      }
    }
  }
  return keypoints;
}

Descriptor describe_impl(const Pyramid& pyr, const Keypoint& kp) {
  const int o = kp.octave;
  if (o < 0 || o >= kOctaves || kp.layer < 1 || kp.layer > kDogLevels - 2) {
    throw OutOfBounds("keypoint octave/layer outside the pyramid");
  }
  const Image& img = pyr.gauss[o][kp.layer];
  const double cell_factor = static_cast<double>(1 << o);
  const double x = (kp.position.x() - 0.5) / cell_factor;
  const double y = (kp.position.y() - 0.5) / cell_factor;
  const double sigma = kp.scale / cell_factor;

  const int d = kDescWidth;
  const int n = kDescOrientationBins;
  const double hist_width = kDescHistWidthFactor * sigma;
  const int radius = static_cast<int>(
      std::lround(hist_width * std::sqrt(2.0) * (d + 1) * 0.5));
  const int cx = static_cast<int>(std::lround(x));
  const int cy = static_cast<int>(std::lround(y));
  if (cx - radius < 1 || cx + radius >= img.width - 1 || cy - radius < 1 ||
      cy + radius >= img.height - 1) {
    throw OutOfBounds("descriptor support window leaves the image");
  }

  const double cos_t = std::cos(kp.orientation);
  const double sin_t = std::sin(kp.orientation);
  const double bins_per_rad = n / (2.0 * kPi);
  const double exp_denom = 0.5 * d * d;  // Gaussian sigma = d/2 hist units

  // (d+2)^2 x (n+2) working histogram to absorb trilinear spill.
  double hist[(kDescWidth + 2) * (kDescWidth + 2) * (kDescOrientationBins + 2)] =
      {0.0};
  const auto hidx = [n](int r, int c, int b) {
    return (r * (kDescWidth + 2) + c) * (kDescOrientationBins + 2) + b;
  };

  for (int i = -radius; i <= radius; ++i) {
    for (int j = -radius; j <= radius; ++j) {
      // Descriptor-frame coordinates in histogram units.
      const double u = (cos_t * j + sin_t * i) / hist_width;
      const double v = (-sin_t * j + cos_t * i) / hist_width;
      const double rbin = v + d / 2.0 - 0.5;
      const double cbin = u + d / 2.0 - 0.5;
      if (rbin <= -1.0 || rbin >= d || cbin <= -1.0 || cbin >= d) {
        continue;
      }
      const int xx = cx + j;
      const int yy = cy + i;
      const double gx = img.at(xx + 1, yy) - img.at(xx - 1, yy);
      const double gy = img.at(xx, yy + 1) - img.at(xx, yy - 1);
      const double mag = std::sqrt(gx * gx + gy * gy);
      if (mag == 0.0) {
        continue;
      }
      double ang = std::atan2(gy, gx) - kp.orientation;
      while (ang < 0.0) {
        ang += 2.0 * kPi;
      }
      while (ang >= 2.0 * kPi) {
        ang -= 2.0 * kPi;
      }
      const double obin = ang * bins_per_rad;
      const double weight = std::exp(-(u * u + v * v) / exp_denom);
      const double value = mag * weight;

      int r0 = static_cast<int>(std::floor(rbin));
      int c0 = static_cast<int>(std::floor(cbin));
      int o0 = static_cast<int>(std::floor(obin));
      const double dr = rbin - r0;
      const double dc = cbin - c0;
      const double dob = obin - o0;
      // Trilinear distribution over the 8 surrounding bins.
      for (int ri = 0; ri <= 1; ++ri) {
        const double wr = value * (ri == 0 ? 1.0 - dr : dr);
        for (int ci = 0; ci <= 1; ++ci) {
          const double wc = wr * (ci == 0 ? 1.0 - dc : dc);
          for (int oi = 0; oi <= 1; ++oi) {
            const double wo = wc * (oi == 0 ? 1.0 - dob : dob);
            int ob = (o0 + oi) % n;
            if (ob < 0) {
              ob += n;
            }
            hist[hidx(r0 + ri + 1, c0 + ci + 1, ob)] += wo;
          }
        }
      }
    }
  }

  Descriptor desc;
  int out = 0;
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      for (int b = 0; b < n; ++b) {
        desc.values[out++] = hist[hidx(r + 1, c + 1, b)];
      }
    }
  }

  double norm = 0.0;
  for (double v : desc.values) {
    norm += v * v;
  }
  if (norm <= 0.0) {
    return desc;  // degenerate all-zero descriptor
  }
  norm = std::sqrt(norm);
  for (double& v : desc.values) {
    v = std::min(v / norm, kDescClamp);
  }
  norm = 0.0;
  for (double v : desc.values) {
    norm += v * v;
  }
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& v : desc.values) {
      v /= norm;
    }
  }
  return desc;
}

// Nearest plus second-nearest search with the Lowe ratio test; the
// predicate d1 < 0.8 * d2 is evaluated on squared distances.
void match_one_direction(const std::vector<Descriptor>& from,
                         const std::vector<Descriptor>& to, bool swap_roles,
                         std::set<std::pair<int, int>>& seen,
                         std::vector<FeatureMatch>& out) {
  constexpr double kRatioSq = 0.8 * 0.8;
  if (to.size() < 2) {
    return;
  }
  for (int a = 0; a < static_cast<int>(from.size()); ++a) {
    double best = std::numeric_limits<double>::infinity();
    double second = best;
    int best_idx = -1;
    for (int b = 0; b < static_cast<int>(to.size()); ++b) {
      const double dist = from[a].squared_distance(to[b]);
      if (dist < best) {
        second = best;
        best = dist;
        best_idx = b;
      } else if (dist < second) {
        second = dist;
      }
    }
    if (best_idx < 0 || !(second > 0.0) || !(best < kRatioSq * second)) {
      continue;
    }
    const int ip = swap_roles ? best_idx : a;
    const int iq = swap_roles ? a : best_idx;
    if (seen.insert({ip, iq}).second) {
      FeatureMatch m;
      m.index_p = ip;
      m.index_q = iq;
      m.distance = std::sqrt(best);
      out.push_back(m);
    }
  }
}

}  // namespace

Image to_intensity(const OccupancyGrid& grid) {
  Image img(grid.width(), grid.height());
  const std::vector<CellState>& cells = grid.cells();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    switch (cells[k]) {
      case CellState::Occupied:
        img.px[k] = 1.0;
        break;
      case CellState::Free:
        img.px[k] = 0.0;
        break;
      default:
        img.px[k] = 0.5;
        break;
    }
  }
  return img;
}

std::vector<Keypoint> detect_keypoints(const Image& image) {
  if (image.width < 16 || image.height < 16) {
    throw ImageTooSmall("keypoint detection needs at least a 16x16 image");
  }
  return detect_impl(build_pyramid(image));
}

Descriptor describe(const Image& image, const Keypoint& keypoint) {
  if (image.width < 16 || image.height < 16) {
    throw ImageTooSmall("descriptor extraction needs at least a 16x16 image");
  }
  return describe_impl(build_pyramid(image), keypoint);
}

std::vector<FeatureMatch> match_bidirectional(
    const std::vector<Descriptor>& desc_p,
    const std::vector<Descriptor>& desc_q) {
  std::vector<FeatureMatch> matches;
  std::set<std::pair<int, int>> seen;
  match_one_direction(desc_p, desc_q, false, seen, matches);
  match_one_direction(desc_q, desc_p, true, seen, matches);
  std::sort(matches.begin(), matches.end(),
            [](const FeatureMatch& a, const FeatureMatch& b) {
              if (a.distance != b.distance) {
                return a.distance < b.distance;
              }
              if (a.index_p != b.index_p) {
                return a.index_p < b.index_p;
              }
              return a.index_q < b.index_q;
            });
  return matches;
}

FeatureSet compute_features(const Image& image) {
  if (image.width < 16 || image.height < 16) {
    throw ImageTooSmall("feature extraction needs at least a 16x16 image");
  }
  const Pyramid pyr = build_pyramid(image);
  const std::vector<Keypoint> all = detect_impl(pyr);
  FeatureSet set;
  set.keypoints.reserve(all.size());
  set.descriptors.reserve(all.size());
  for (const Keypoint& kp : all) {
    try {
      Descriptor d = describe_impl(pyr, kp);
      set.keypoints.push_back(kp);
      set.descriptors.push_back(d);
    } catch (const OutOfBounds&) {
      // support window leaves the image: drop the keypoint
    }
  }
  return set;
}

}  // namespace gridmerge

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

#include "gridmerge/kdtree2d.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace gridmerge {

KdTree2D::KdTree2D(const std::vector<Eigen::Vector2d>& points)
    : points_(points), indices_(points.size()) {
  std::iota(indices_.begin(), indices_.end(), 0);
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    root_ = build(0, static_cast<int>(points_.size()), 0);
  }
}

int KdTree2D::build(int begin, int end, int depth) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  if (end - begin <= kLeafSize) {
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }
  const int axis = depth % 2;
  const int mid = begin + (end - begin) / 2;
  std::nth_element(indices_.begin() + begin, indices_.begin() + mid,
                   indices_.begin() + end, [&](int a, int b) {
                     const double va = points_[a][axis];
                     const double vb = points_[b][axis];
                     if (va != vb) {
                       return va < vb;
                     }
                     return a < b;  // deterministic partition on ties
                   });
  const double split = points_[indices_[mid]][axis];
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  const int left = build(begin, mid, depth + 1);
  const int right = build(mid, end, depth + 1);
  nodes_[id].left = left;
  nodes_[id].right = right;
  nodes_[id].begin = -1;
  return id;
}

void KdTree2D::search(int node, const Eigen::Vector2d& query,
                      Result& best) const {
  const Node& n = nodes_[node];
  if (n.begin >= 0) {
    for (int k = n.begin; k < n.end; ++k) {
      const int idx = indices_[k];
      const double d = (points_[idx] - query).squaredNorm();
      if (d < best.sq_dist ||
          (d == best.sq_dist && idx < best.index)) {
        best.sq_dist = d;
        best.index = idx;
      }
    }
    return;
  }
  const double delta = query[n.axis] - n.split;
  const int near = delta < 0.0 ? n.left : n.right;
  const int far = delta < 0.0 ? n.right : n.left;
  search(near, query, best);
  if (delta * delta <= best.sq_dist) {
    search(far, query, best);
  }
}

KdTree2D::Result KdTree2D::nearest(const Eigen::Vector2d& query) const {
  Result best;
  best.index = -1;
  best.sq_dist = std::numeric_limits<double>::infinity();
  if (root_ >= 0) {
    search(root_, query, best);
  }
  return best;
}

}  // namespace gridmerge

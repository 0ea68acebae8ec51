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

#ifndef GRIDMERGE_KDTREE2D_HPP_
#define GRIDMERGE_KDTREE2D_HPP_

#include <vector>

#include <Eigen/Core>

namespace gridmerge {

// Exact nearest-neighbor search over a fixed 2D point set. Distance ties
// resolve to the smallest point index, matching a brute-force scan.
class KdTree2D {
 public:
  struct Result {
    int index = -1;
    double sq_dist = 0.0;
  };

  explicit KdTree2D(const std::vector<Eigen::Vector2d>& points);

  Result nearest(const Eigen::Vector2d& query) const;

  int size() const { return static_cast<int>(points_.size()); }

 private:
  struct Node {
    int left = -1;
    int right = -1;
    int begin = 0;   // leaf payload range into indices_
    int end = 0;
    int axis = 0;
    double split = 0.0;
  };

  int build(int begin, int end, int depth);
  void search(int node, const Eigen::Vector2d& query, Result& best) const;

  std::vector<Eigen::Vector2d> points_;
  std::vector<int> indices_;
  std::vector<Node> nodes_;
  int root_ = -1;

  static constexpr int kLeafSize = 8;
};

}  // namespace gridmerge

#endif  // GRIDMERGE_KDTREE2D_HPP_

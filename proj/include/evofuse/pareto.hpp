// Copyright 2026 The evofuse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Core>

namespace evofuse {

/// One row per point, columns are the two minimised objectives.
template <typename Scalar>
using ObjectivePoints = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

using Fronts = std::vector<std::vector<std::size_t>>;

template <typename Derived>
[[nodiscard]] bool dominates_row(const Eigen::MatrixBase<Derived>& pts, Eigen::Index a, Eigen::Index b) {
  bool strictly = false;
  for (Eigen::Index k = 0; k < pts.cols(); ++k) {
    if (pts(a, k) > pts(b, k)) return false;
    strictly = strictly || pts(a, k) < pts(b, k);
  }
  return strictly;
}

/// Deb's fast non-dominated sort. Front 0 holds every point no other point
/// dominates; indices inside each front are ascending.
template <typename Derived>
Fronts fast_nondominated_sort(const Eigen::MatrixBase<Derived>& pts) {
  auto const n = static_cast<std::size_t>(pts.rows());
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<std::size_t> counter(n, 0);
  Fronts fronts;
  if (n == 0) return fronts;
  fronts.emplace_back();
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      auto const ip = static_cast<Eigen::Index>(p);
      auto const iq = static_cast<Eigen::Index>(q);
      if (dominates_row(pts, ip, iq)) {
        dominated[p].push_back(q);
        ++counter[q];
      } else if (dominates_row(pts, iq, ip)) {
        dominated[q].push_back(p);
        ++counter[p];
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (counter[p] == 0) fronts[0].push_back(p);
  }
  for (std::size_t k = 0; !fronts[k].empty(); ++k) {
    std::vector<std::size_t> next;
    for (auto p : fronts[k]) {
      for (auto q : dominated[p]) {
        if (--counter[q] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(next));
  }
  fronts.pop_back();
  return fronts;
}

/// NSGA-II crowding distance of the rows of `pts` (one front). Boundary points
/// per objective are infinite; an objective with zero span contributes nothing.
template <typename Derived>
std::vector<typename Derived::Scalar> crowding_distance(const Eigen::MatrixBase<Derived>& pts) {
  using Scalar = typename Derived::Scalar;
  auto const n = static_cast<std::size_t>(pts.rows());
  std::vector<Scalar> dist(n, Scalar(0));
  if (n == 0) return dist;
  auto const inf = std::numeric_limits<Scalar>::infinity();
  if (n <= 2) {
    std::fill(dist.begin(), dist.end(), inf);
    return dist;
  }
  std::vector<std::size_t> order(n);
  for (Eigen::Index k = 0; k < pts.cols(); ++k) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return pts(static_cast<Eigen::Index>(a), k) < pts(static_cast<Eigen::Index>(b), k);
    });
    auto value = [&](std::size_t i) { return pts(static_cast<Eigen::Index>(order[i]), k); };
    Scalar const span = value(n - 1) - value(0);
    dist[order.front()] = inf;
    dist[order.back()] = inf;
    if (span <= Scalar(0)) continue;
    for (std::size_t i = 1; i + 1 < n; ++i) dist[order[i]] += (value(i + 1) - value(i - 1)) / span;
  }
  return dist;
}

/// Exact area dominated by `pts` inside the unit box [0,1]^2, for points
/// already divided by the reference point. Points with a coordinate >= 1 are
/// dropped.
template <typename Derived>
typename Derived::Scalar hypervolume_unit(const Eigen::MatrixBase<Derived>& pts) {
  using Scalar = typename Derived::Scalar;
  std::vector<std::pair<Scalar, Scalar>> kept;
  kept.reserve(static_cast<std::size_t>(pts.rows()));
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    if (pts(i, 0) < Scalar(1) && pts(i, 1) < Scalar(1)) {
      kept.emplace_back(std::max(pts(i, 0), Scalar(0)), std::max(pts(i, 1), Scalar(0)));
    }
  }
  if (kept.empty()) return Scalar(0);
  std::sort(kept.begin(), kept.end());
  Scalar area(0);
  Scalar best_y(1);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    best_y = std::min(best_y, kept[i].second);
    Scalar const next_x = i + 1 < kept.size() ? kept[i + 1].first : Scalar(1);
    area += (next_x - kept[i].first) * (Scalar(1) - best_y);
  }
  return area;
}

}  // namespace evofuse

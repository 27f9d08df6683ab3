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

#include "evofuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "evofuse/error.hpp"

namespace evofuse {

void CostModel::validate() const {
  if (!(c_miss > 0.0) || !(c_fa > 0.0)) throw ConfigError("cost model: c_miss and c_fa must be positive");
  if (!(p_target > 0.0 && p_target < 1.0)) throw ConfigError("cost model: p_target must lie in (0, 1)");
}

double CostModel::normalizer() const noexcept {
  return std::min(c_miss * p_target, c_fa * (1.0 - p_target));
}

double CostModel::dcf(const OperatingPoint& p) const noexcept {
  return (c_miss * p_target * p.frr + c_fa * (1.0 - p_target) * p.far) / normalizer();
}

DetCurve det_points(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size()) {
    throw ContractViolation("det_points: " + std::to_string(scores.size()) + " scores vs " +
                            std::to_string(labels.size()) + " labels");
  }
  std::size_t n_bona = 0;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (!std::isfinite(scores[j])) throw DataError("det_points: non-finite score at trial " + std::to_string(j));
    n_bona += labels[j] == Label::bonafide;
  }
  std::size_t const n_spoof = scores.size() - n_bona;
  if (n_bona == 0 || n_spoof == 0) throw DataError("det_points: both classes must be present");

  std::vector<std::pair<double, Label>> sorted(scores.size());
  for (std::size_t j = 0; j < scores.size(); ++j) sorted[j] = {scores[j], labels[j]};
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  auto const nb = static_cast<double>(n_bona);
  auto const ns = static_cast<double>(n_spoof);
  DetCurve curve;
  curve.points.reserve(sorted.size() + 1);
  std::size_t bona_below = 0;
  std::size_t spoof_below = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    double const value = sorted[i].first;
    curve.points.push_back({value, static_cast<double>(n_spoof - spoof_below) / ns,
                            static_cast<double>(bona_below) / nb});
    // every trial sharing this value crosses the boundary together
    for (; i < sorted.size() && sorted[i].first == value; ++i) {
      if (sorted[i].second == Label::bonafide) {
        ++bona_below;
      } else {
        ++spoof_below;
      }
    }
  }
  double const above = std::nextafter(sorted.back().first, std::numeric_limits<double>::infinity());
  curve.points.push_back({above, 0.0, 1.0});
  return curve;
}

double eer(const DetCurve& curve) {
  auto const& pts = curve.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double const d = pts[i].far - pts[i].frr;
    if (d == 0.0) return pts[i].far;
    if (d < 0.0) {
      // i > 0 because the first point has far - frr = 1
      auto const& a = pts[i - 1];
      double const da = a.far - a.frr;
      double const t = da / (da - d);
      return a.far + t * (pts[i].far - a.far);
    }
  }
  return pts.back().far;
}

double eer(std::span<const double> scores, std::span<const Label> labels) {
  return eer(det_points(scores, labels));
}

double min_dcf(const DetCurve& curve, const CostModel& cost) {
  cost.validate();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : curve.points) best = std::min(best, cost.dcf(p));
  return best;
}

double min_dcf(std::span<const double> scores, std::span<const Label> labels, const CostModel& cost) {
  return min_dcf(det_points(scores, labels), cost);
}

DetectionSummary summarize(std::span<const double> scores, std::span<const Label> labels,
                           const CostModel& cost) {
  auto const curve = det_points(scores, labels);
  return {eer(curve), min_dcf(curve, cost)};
}

}  // namespace evofuse

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

#include <span>
#include <vector>

#include <Eigen/Core>

#include "evofuse/score_data.hpp"

namespace evofuse {

/// Decision rule everywhere: score >= threshold is accepted as bonafide.
struct OperatingPoint {
  double threshold = 0.0;
  double far = 0.0;  ///< spoof accepted / spoof total
  double frr = 0.0;  ///< bonafide rejected / bonafide total
};

/// Thresholds strictly increasing. The first point (threshold = lowest score)
/// accepts everything, the last (just above the highest score) rejects everything.
struct DetCurve {
  std::vector<OperatingPoint> points;
};

/// Detection cost model. Defaults: c_miss = 1, c_fa = 10, p_target = 0.05.
struct CostModel {
  double c_miss = 1.0;
  double c_fa = 10.0;
  double p_target = 0.05;

  /// Throws ConfigError unless both costs are positive and 0 < p_target < 1.
  void validate() const;
  [[nodiscard]] double normalizer() const noexcept;
  /// Normalised cost at one operating point.
  [[nodiscard]] double dcf(const OperatingPoint& p) const noexcept;
};

DetCurve det_points(std::span<const double> scores, std::span<const Label> labels);
double eer(const DetCurve& curve);
double eer(std::span<const double> scores, std::span<const Label> labels);
double min_dcf(const DetCurve& curve, const CostModel& cost);
double min_dcf(std::span<const double> scores, std::span<const Label> labels, const CostModel& cost);

/// EER and minDCF from one sweep.
struct DetectionSummary {
  double eer = 0.0;
  double min_dcf = 0.0;
};
DetectionSummary summarize(std::span<const double> scores, std::span<const Label> labels,
                           const CostModel& cost);

namespace detail {
template <typename Derived>
Eigen::VectorXd as_vector(const Eigen::DenseBase<Derived>& scores) {
  return scores.derived().template cast<double>().reshaped();
}
}  // namespace detail

// Expression-friendly overloads: accept any Eigen vector expression.

template <typename Derived>
DetCurve det_points(const Eigen::DenseBase<Derived>& scores, const TrialLabels& labels) {
  const Eigen::VectorXd v = detail::as_vector(scores);
  return det_points(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())), labels.labels());
}

template <typename Derived>
double eer(const Eigen::DenseBase<Derived>& scores, const TrialLabels& labels) {
  const Eigen::VectorXd v = detail::as_vector(scores);
  return eer(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())), labels.labels());
}

template <typename Derived>
double min_dcf(const Eigen::DenseBase<Derived>& scores, const TrialLabels& labels, const CostModel& cost) {
  const Eigen::VectorXd v = detail::as_vector(scores);
  return min_dcf(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())), labels.labels(),
                 cost);
}

}  // namespace evofuse

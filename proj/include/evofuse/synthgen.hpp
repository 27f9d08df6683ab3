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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "evofuse/score_data.hpp"

namespace evofuse {

/// Gaussian score model of one synthetic detector:
///   spoof ~ N(0, 1), bonafide ~ N(d_prime, 1),
/// with the unit noise split as rho * shared_factor + sqrt(1 - rho^2) * own_noise.
struct SynthDetectorSpec {
  double d_prime = 1.0;
  double rho = 0.0;
  std::int64_t param_count = 1;
};

struct SynthScenario {
  std::string name = "custom";
  std::vector<SynthDetectorSpec> detectors;
  std::size_t n_bonafide = 1000;
  std::size_t n_spoof = 1000;
  std::uint64_t seed = 0;
};

/// Standard normal CDF.
double normal_cdf(double x);

/// EER of a single Gaussian detector with separation d': Phi(-d'/2).
double analytic_eer(double d_prime);

/// Closed-form EER of the fused score sum_i w_i s_i under the shared-factor model.
double analytic_fusion_eer(const std::vector<SynthDetectorSpec>& detectors, const Eigen::VectorXd& weights);

/// Noise covariance across detectors: 1 on the diagonal, rho_i * rho_j off it.
Eigen::MatrixXd noise_covariance(const std::vector<SynthDetectorSpec>& detectors);

struct GroundTruthRow {
  std::string detector;
  double d_prime = 0.0;
  double analytic_eer = 0.0;
  std::int64_t param_count = 0;
};

struct SynthData {
  ScoreMatrix matrix;
  std::vector<GroundTruthRow> truth;
  double average_fusion_eer = 0.0;  ///< analytic EER of the equal-weight all-detector average
};

/// Deterministic under `scenario.seed`. Trials are bonafide first, then spoof.
SynthData generate(const SynthScenario& scenario);

/// 12 detectors, d' in [0.5, 3.0], rho 0.5, parameter counts 10M..1B.
SynthScenario scenario_s1(std::uint64_t seed = 1, std::size_t n_per_class = 1000);
/// Linearly separable pool (d' = 8).
SynthScenario scenario_sep(std::uint64_t seed = 1, std::size_t n_per_class = 1000);
/// Throws ConfigError for an unknown name. Known: S1, SEP.
SynthScenario named_scenario(std::string_view name, std::uint64_t seed, std::size_t n_per_class);

}  // namespace evofuse

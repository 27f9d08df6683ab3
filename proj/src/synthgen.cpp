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

#include "evofuse/synthgen.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "evofuse/error.hpp"

namespace evofuse {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double analytic_eer(double d_prime) { return normal_cdf(-d_prime / 2.0); }

Eigen::MatrixXd noise_covariance(const std::vector<SynthDetectorSpec>& detectors) {
  auto const d = static_cast<Eigen::Index>(detectors.size());
  Eigen::VectorXd rho(d);
  for (Eigen::Index i = 0; i < d; ++i) rho(i) = detectors[static_cast<std::size_t>(i)].rho;
  Eigen::MatrixXd cov = rho * rho.transpose();
  cov.diagonal().setOnes();
  return cov;
}

double analytic_fusion_eer(const std::vector<SynthDetectorSpec>& detectors, const Eigen::VectorXd& weights) {
  Eigen::VectorXd means(static_cast<Eigen::Index>(detectors.size()));
  for (std::size_t i = 0; i < detectors.size(); ++i) means(static_cast<Eigen::Index>(i)) = detectors[i].d_prime;
  double const separation = weights.dot(means);
  double const sd = std::sqrt(weights.dot(noise_covariance(detectors) * weights));
  return analytic_eer(separation / sd);
}

SynthData generate(const SynthScenario& scenario) {
  if (scenario.detectors.empty()) throw ConfigError("synthetic scenario has no detectors");
  if (scenario.n_bonafide == 0 || scenario.n_spoof == 0) throw ConfigError("synthetic scenario needs both classes");
  for (const auto& s : scenario.detectors) {
    if (!(s.d_prime >= 0.0) || !(s.rho >= 0.0 && s.rho < 1.0) || s.param_count <= 0) {
      throw ConfigError("invalid synthetic detector spec");
    }
  }

  auto const d = scenario.detectors.size();
  std::size_t const t = scenario.n_bonafide + scenario.n_spoof;
  std::vector<DetectorMeta> metas;
  std::vector<GroundTruthRow> truth;
  char name[32];
  for (std::size_t i = 0; i < d; ++i) {
    std::snprintf(name, sizeof(name), "synth_%02zu", i);
    auto const& spec = scenario.detectors[i];
    metas.push_back({i, name, spec.param_count, std::string("scores/") + name + ".txt"});
    truth.push_back({name, spec.d_prime, analytic_eer(spec.d_prime), spec.param_count});
  }

  std::vector<std::string> ids;
  std::vector<Label> labels;
  ids.reserve(t);
  labels.reserve(t);
  char id[32];
  for (std::size_t j = 0; j < t; ++j) {
    std::snprintf(id, sizeof(id), "T%07zu", j);
    ids.emplace_back(id);
    labels.push_back(j < scenario.n_bonafide ? Label::bonafide : Label::spoof);
  }

  std::mt19937_64 rng(scenario.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ScoreArray scores(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(t));
  for (std::size_t j = 0; j < t; ++j) {
    double const shared = normal(rng);
    bool const bona = labels[j] == Label::bonafide;
    for (std::size_t i = 0; i < d; ++i) {
      auto const& spec = scenario.detectors[i];
      double const mean = bona ? spec.d_prime : 0.0;
      scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          mean + spec.rho * shared + std::sqrt(1.0 - spec.rho * spec.rho) * normal(rng);
    }
  }

  Eigen::VectorXd const uniform = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d), 1.0 / static_cast<double>(d));
  double const fused = analytic_fusion_eer(scenario.detectors, uniform);
  return {ScoreMatrix(DetectorPool(std::move(metas)), TrialLabels(std::move(ids), std::move(labels)),
                      std::move(scores)),
          std::move(truth), fused};
}

SynthScenario scenario_s1(std::uint64_t seed, std::size_t n_per_class) {
  // Separation is deliberately not monotone in size: a few small detectors are strong.
  static constexpr double kDPrime[] = {0.5, 0.9, 1.3, 2.0, 1.1, 1.6, 2.4, 1.2, 2.2, 2.6, 2.8, 3.0};
  static constexpr std::int64_t kParamsM[] = {10, 15, 22, 33, 50, 75, 110, 160, 240, 360, 550, 1000};
  SynthScenario s{"S1", {}, n_per_class, n_per_class, seed};
  for (std::size_t i = 0; i < 12; ++i) s.detectors.push_back({kDPrime[i], 0.5, kParamsM[i] * 1'000'000});
  return s;
}

SynthScenario scenario_sep(std::uint64_t seed, std::size_t n_per_class) {
  SynthScenario s{"SEP", {}, n_per_class, n_per_class, seed};
  static constexpr std::int64_t kParamsM[] = {95, 317, 964, 2160};
  for (auto p : kParamsM) s.detectors.push_back({8.0, 0.5, p * 1'000'000});
  return s;
}

SynthScenario named_scenario(std::string_view name, std::uint64_t seed, std::size_t n_per_class) {
  if (name == "S1" || name == "s1") return scenario_s1(seed, n_per_class);
  if (name == "SEP" || name == "sep") return scenario_sep(seed, n_per_class);
  throw ConfigError("unknown synthetic scenario '" + std::string(name) + "' (expected S1 or SEP)");
}

}  // namespace evofuse

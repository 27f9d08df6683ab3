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

#include <doctest.h>

#include <cmath>
#include <random>

#include "evofuse/error.hpp"
#include "evofuse/metrics.hpp"
#include "oracles.hpp"

using namespace evofuse;

namespace {

struct Instance {
  std::vector<double> scores;
  std::vector<Label> labels;
  std::vector<double> bona;
  std::vector<double> spoof;
};

Instance make(std::vector<double> bona, std::vector<double> spoof) {
  Instance in;
  for (double s : bona) {
    in.scores.push_back(s);
    in.labels.push_back(Label::bonafide);
  }
  for (double s : spoof) {
    in.scores.push_back(s);
    in.labels.push_back(Label::spoof);
  }
  in.bona = std::move(bona);
  in.spoof = std::move(spoof);
  return in;
}

/// Random instance with both classes; `ties` rounds scores to create shared values.
Instance random_instance(std::mt19937_64& rng, std::size_t max_t, bool ties) {
  std::uniform_int_distribution<std::size_t> size(2, max_t);
  std::size_t const t = size(rng);
  std::uniform_int_distribution<std::size_t> split(1, t - 1);
  std::size_t const nb = split(rng);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> sep(-1.0, 3.0);
  double const d = sep(rng);
  std::vector<double> bona;
  std::vector<double> spoof;
  for (std::size_t j = 0; j < t; ++j) {
    double s = noise(rng) + (j < nb ? d : 0.0);
    if (ties) s = std::round(s * 2.0) / 2.0;
    (j < nb ? bona : spoof).push_back(s);
  }
  return make(std::move(bona), std::move(spoof));
}

std::span<const double> sp(const Instance& in) { return in.scores; }
std::span<const Label> lb(const Instance& in) { return in.labels; }

}  // namespace

TEST_CASE("det_points on perfect separation") {
  auto const in = make({1.0}, {0.0});
  auto const curve = det_points(sp(in), lb(in));
  bool found = false;
  for (const auto& p : curve.points) found = found || (p.far == 0.0 && p.frr == 0.0);
  CHECK(found);
  CHECK(curve.points.front().far == 1.0);
  CHECK(curve.points.front().frr == 0.0);
  CHECK(curve.points.back().far == 0.0);
  CHECK(curve.points.back().frr == 1.0);
}

TEST_CASE("det_points with all scores equal has only the two sentinels") {
  auto const in = make({0.3, 0.3}, {0.3, 0.3, 0.3});
  auto const curve = det_points(sp(in), lb(in));
  REQUIRE(curve.points.size() == 2);
  CHECK(curve.points[0].far == 1.0);
  CHECK(curve.points[0].frr == 0.0);
  CHECK(curve.points[1].far == 0.0);
  CHECK(curve.points[1].frr == 1.0);
}

TEST_CASE("det_points 3v3 example") {
  auto const in = make({0.8, 0.6, 0.4}, {0.5, 0.3, 0.2});
  auto const curve = det_points(sp(in), lb(in));
  bool seen = false;
  for (const auto& p : curve.points) {
    if (p.threshold == 0.5) {
      seen = true;
      CHECK(p.far == doctest::Approx(1.0 / 3.0));
      CHECK(p.frr == doctest::Approx(1.0 / 3.0));
    }
  }
  CHECK(seen);
  auto const direct = oracle::count_rates(in.bona, in.spoof, 0.5);
  CHECK(direct.far == doctest::Approx(1.0 / 3.0));
  CHECK(direct.frr == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("det_points errors") {
  std::vector<double> s{0.1, 0.2};
  std::vector<Label> one_class{Label::spoof, Label::spoof};
  CHECK_THROWS_AS(det_points(s, one_class), DataError);
  std::vector<double> nan{0.1, std::nan("")};
  std::vector<Label> both{Label::spoof, Label::bonafide};
  CHECK_THROWS_AS(det_points(nan, both), DataError);
}

TEST_CASE("eer examples") {
  CHECK(eer(sp(make({1.0}, {0.0})), lb(make({1.0}, {0.0}))) == 0.0);
  auto const flat = make({2.0, 2.0, 2.0}, {2.0});
  CHECK(eer(sp(flat), lb(flat)) == doctest::Approx(0.5));
  auto const in = make({0.8, 0.6, 0.4}, {0.5, 0.3, 0.2});
  CHECK(eer(sp(in), lb(in)) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(oracle::sweep_eer(in.bona, in.spoof) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("eer accepts Eigen expressions") {
  Eigen::RowVector4d s(0.9, 0.7, 0.1, 0.2);
  TrialLabels labels({"a", "b", "c", "d"}, {Label::bonafide, Label::bonafide, Label::spoof, Label::spoof});
  CHECK(eer(s, labels) == 0.0);
  CHECK(eer(-s, labels) == 1.0);
  CHECK(eer(2.0 * s.array() + 1.0, labels) == 0.0);
}

TEST_CASE("min_dcf examples") {
  CostModel unit{1.0, 1.0, 0.5};
  auto const perfect = make({1.0, 2.0}, {0.0, -1.0});
  CHECK(min_dcf(sp(perfect), lb(perfect), unit) == 0.0);
  CHECK(min_dcf(sp(perfect), lb(perfect), CostModel{}) == 0.0);
  auto const flat = make({2.0, 2.0}, {2.0, 2.0});
  CHECK(min_dcf(sp(flat), lb(flat), unit) == doctest::Approx(1.0));
  // Exhaustive sweep: tau = 0.4 gives far = 1/3, frr = 0, so the minimum is 1/3.
  auto const in = make({0.8, 0.6, 0.4}, {0.5, 0.3, 0.2});
  double const expected = oracle::sweep_min_dcf(in.bona, in.spoof, 1.0, 1.0, 0.5);
  CHECK(expected == doctest::Approx(1.0 / 3.0));
  CHECK(min_dcf(sp(in), lb(in), unit) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("cost model validation") {
  CHECK_THROWS_AS((CostModel{0.0, 1.0, 0.5}.validate()), ConfigError);
  CHECK_THROWS_AS((CostModel{1.0, 1.0, 1.0}.validate()), ConfigError);
  CHECK_NOTHROW(CostModel{}.validate());
  CHECK(CostModel{}.normalizer() == doctest::Approx(0.05));
}

TEST_CASE("property: eer and min_dcf match the sweep oracles on random instances") {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 200; ++k) {
    auto const in = random_instance(rng, 200, k % 3 == 0);
    CHECK(eer(sp(in), lb(in)) == doctest::Approx(oracle::sweep_eer(in.bona, in.spoof, 1000)).epsilon(1e-9));
    CostModel const cost{1.0, 10.0, 0.05};
    CHECK(min_dcf(sp(in), lb(in), cost) ==
          doctest::Approx(oracle::sweep_min_dcf(in.bona, in.spoof, 1.0, 10.0, 0.05)).epsilon(1e-12));
  }
}

TEST_CASE("property: FAR non-increasing and FRR non-decreasing along thresholds") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    auto const in = random_instance(rng, 150, k % 2 == 0);
    auto const curve = det_points(sp(in), lb(in));
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
      CHECK(curve.points[i].threshold > curve.points[i - 1].threshold);
      CHECK(curve.points[i].far <= curve.points[i - 1].far);
      CHECK(curve.points[i].frr >= curve.points[i - 1].frr);
    }
  }
}

TEST_CASE("property: strictly increasing transforms leave EER and minDCF unchanged") {
  std::mt19937_64 rng(11);
  CostModel const cost;
  for (int k = 0; k < 100; ++k) {
    auto const in = random_instance(rng, 120, k % 2 == 1);
    std::vector<double> mapped(in.scores.size());
    for (std::size_t j = 0; j < mapped.size(); ++j) mapped[j] = std::exp(0.5 * in.scores[j]) * 3.0 - 7.0;
    CHECK(eer(mapped, lb(in)) == eer(sp(in), lb(in)));
    CHECK(min_dcf(mapped, lb(in), cost) == min_dcf(sp(in), lb(in), cost));
  }
}

TEST_CASE("property: negating scores maps EER e to 1 - e") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 100; ++k) {
    auto const in = random_instance(rng, 120, false);
    std::vector<double> neg(in.scores.size());
    for (std::size_t j = 0; j < neg.size(); ++j) neg[j] = -in.scores[j];
    CHECK(eer(neg, lb(in)) == doctest::Approx(1.0 - eer(sp(in), lb(in))).epsilon(1e-12));
  }
}

TEST_CASE("property: min_dcf within [0,1] and no larger than DCF near the EER threshold") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 100; ++k) {
    auto const in = random_instance(rng, 150, k % 4 == 0);
    CostModel const cost{1.0 + k % 3, 1.0 + k % 5, 0.05 + 0.009 * k};
    auto const curve = det_points(sp(in), lb(in));
    double const m = min_dcf(curve, cost);
    CHECK(m >= 0.0);
    CHECK(m <= 1.0 + 1e-12);
    for (const auto& p : curve.points) {
      if (p.far - p.frr <= 0.0) {
        CHECK(m <= cost.dcf(p) + 1e-12);
        break;
      }
    }
  }
}

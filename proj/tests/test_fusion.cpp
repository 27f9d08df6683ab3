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

#include <random>

#include "evofuse/error.hpp"
#include "evofuse/fusion.hpp"
#include "evofuse/metrics.hpp"
#include "evofuse/synthgen.hpp"
#include "matrix_fixtures.hpp"
#include "test_util.hpp"

using namespace evofuse;
using testutil::bits;
using testutil::genes;
using testutil::make_matrix;

namespace {

RealChromosome random_genes(std::mt19937_64& rng, std::size_t d) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RealChromosome c{Eigen::VectorXd(static_cast<Eigen::Index>(d))};
  for (auto& g : c.genes) g = unit(rng) < 0.3 ? 0.0 : unit(rng);
  repair(c, 0.001);
  return c;
}

BinaryChromosome random_bits(std::mt19937_64& rng, std::size_t d) {
  std::bernoulli_distribution coin(0.4);
  BinaryChromosome c{Eigen::Array<bool, Eigen::Dynamic, 1>(static_cast<Eigen::Index>(d))};
  for (auto& b : c.bits) b = coin(rng);
  repair(c, rng);
  return c;
}

}  // namespace

TEST_CASE("fuse_binary examples") {
  auto const m = make_matrix({{1.0, 3.0}, {3.0, 1.0}});
  auto const both = fuse_binary(bits({1, 1}), m);
  CHECK(both(0) == 2.0);
  CHECK(both(1) == 2.0);

  auto const one = fuse_binary(bits({0, 1}), m);
  CHECK((one.array() == m.row(1).array()).all());

  auto const three = make_matrix({{0.9, 0.0}, {0.3, 0.0}, {0.5, 0.0}});
  CHECK(fuse_binary(bits({1, 1, 0}), three)(0) == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("fuse_binary contract violations") {
  auto const m = make_matrix({{1.0, 3.0}, {3.0, 1.0}});
  CHECK_THROWS_AS(fuse_binary(bits({0, 0}), m), ContractViolation);
  CHECK_THROWS_AS(fuse_binary(bits({1, 0, 1}), m), ContractViolation);
}

TEST_CASE("effective_weights examples") {
  auto const a = effective_weights(genes({1.0, 0.0, 0.0}), 0.001);
  CHECK(a.weights(0) == 1.0);
  CHECK(a.weights(1) == 0.0);
  CHECK(a.support == std::vector<std::size_t>{0});

  auto const b = effective_weights(genes({0.5, 0.5}), 0.001);
  CHECK(b.weights(0) == 0.5);
  CHECK(b.weights(1) == 0.5);

  auto const c = effective_weights(genes({0.8, 0.0005, 0.2}), 0.001);
  CHECK(c.weights(0) == doctest::Approx(0.8));
  CHECK(c.weights(1) == 0.0);
  CHECK(c.weights(2) == doctest::Approx(0.2));
  CHECK(c.support == std::vector<std::size_t>{0, 2});

  CHECK_THROWS_AS(effective_weights(genes({0.0005, 0.0}), 0.001), ContractViolation);
}

TEST_CASE("fuse_real examples") {
  auto const m = make_matrix({{1.0, 3.0}, {3.0, 1.0}});
  auto const half = fuse_real(genes({0.5, 0.5}), m, 0.001);
  CHECK(half(0) == 2.0);
  CHECK(half(1) == 2.0);
  auto const onehot = fuse_real(genes({0.0, 1.0}), m, 0.001);
  CHECK((onehot.array() == m.row(1).array()).all());

  auto const three = make_matrix({{1.0, 0.0}, {9.9, 0.0}, {0.5, 0.0}});
  CHECK(fuse_real(genes({0.8, 0.0, 0.2}), three, 0.001)(0) == doctest::Approx(0.9).epsilon(1e-15));
}

TEST_CASE("param_count on the detector fixture") {
  auto const pool = load_manifest(testutil::fixture("ssl_detectors.csv"));
  auto ids = [&](const std::vector<std::string>& names) {
    std::vector<std::size_t> out;
    for (const auto& n : names) out.push_back(pool.find(n).value());
    return out;
  };
  CHECK(std::abs(static_cast<double>(param_count(ids(testutil::light_subset()), pool)) - 3.52e9) <= 0.01e9);
  CHECK(std::abs(static_cast<double>(param_count(ids(testutil::heavy_subset()), pool)) - 6.21e9) <= 0.01e9);
  std::vector<std::size_t> all(pool.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  CHECK(std::abs(static_cast<double>(param_count(all, pool)) - 18.56e9) <= 0.01e9);
  CHECK(param_count(std::vector<std::size_t>{}, pool) == 0);
}

TEST_CASE("evaluate examples") {
  SynthScenario sc{"one", {{2.0, 0.0, 123}, {1.0, 0.0, 7}}, 20000, 20000, 4};
  auto const data = generate(sc);
  auto const obj = evaluate(bits({1, 0}), data.matrix, 0.001);
  CHECK(obj.eer == doctest::Approx(analytic_eer(2.0)).epsilon(0.05));
  CHECK(obj.params == 123);

  auto const twins = make_matrix({{0.9, 0.1, 0.8, 0.5, 0.3, 0.2}, {0.9, 0.1, 0.8, 0.5, 0.3, 0.2}}, {}, {5, 6});
  auto const pair = evaluate(bits({1, 1}), twins, 0.001);
  auto const alone = evaluate(bits({1, 0}), twins, 0.001);
  CHECK(pair.eer == alone.eer);
  CHECK(pair.params == 11);

  SynthScenario comp{"pair", {{2.0, 0.0, 1}, {2.0, 0.0, 1}}, 20000, 20000, 5};
  auto const cd = generate(comp);
  auto const fused = evaluate(bits({1, 1}), cd.matrix, 0.001);
  CHECK(fused.eer < evaluate(bits({1, 0}), cd.matrix, 0.001).eer);
  CHECK(fused.eer < evaluate(bits({0, 1}), cd.matrix, 0.001).eer);
}

TEST_CASE("property: binary fusion equals real fusion with normalised bit weights") {
  auto const data = generate(scenario_s1(3, 100));
  std::mt19937_64 rng(1);
  for (int k = 0; k < 200; ++k) {
    auto const b = random_bits(rng, data.matrix.detectors());
    RealChromosome r{b.bits.cast<double>().matrix() / static_cast<double>(b.count())};
    double const w = 0.5 / static_cast<double>(data.matrix.detectors());
    auto const diff = (fuse_binary(b, data.matrix) - fuse_real(r, data.matrix, w)).cwiseAbs().maxCoeff();
    CHECK(diff <= 1e-12);
  }
}

TEST_CASE("property: effective weights sum to one over the support") {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 500; ++k) {
    auto const c = random_genes(rng, 1 + k % 40);
    auto const ew = effective_weights(c, 0.001);
    double sum = 0.0;
    for (auto i : ew.support) sum += ew.weights(static_cast<Eigen::Index>(i));
    CHECK(std::abs(sum - 1.0) <= 1e-9);
    CHECK(!ew.support.empty());
    for (Eigen::Index i = 0; i < c.genes.size(); ++i) {
      if (c.genes(i) < 0.001) CHECK(ew.weights(i) == 0.0);
    }
  }
}

TEST_CASE("property: a below-cut-off gene changes neither scores nor params") {
  auto const data = generate(scenario_s1(4, 100));
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    auto c = random_genes(rng, data.matrix.detectors());
    auto const before = evaluate(c, data.matrix, 0.001);
    auto const fused_before = fuse_real(c, data.matrix, 0.001);
    std::size_t const slot = static_cast<std::size_t>(k) % data.matrix.detectors();
    if (c.genes(static_cast<Eigen::Index>(slot)) >= 0.001) continue;
    c.genes(static_cast<Eigen::Index>(slot)) = 0.0009;
    CHECK(evaluate(c, data.matrix, 0.001) == before);
    CHECK((fuse_real(c, data.matrix, 0.001).array() == fused_before.array()).all());
  }
}

TEST_CASE("property: evaluate is deterministic and params grow with the support") {
  auto const data = generate(scenario_s1(5, 200));
  std::mt19937_64 rng(4);
  for (int k = 0; k < 100; ++k) {
    Chromosome c = random_bits(rng, data.matrix.detectors());
    CHECK(evaluate(c, data.matrix, 0.001) == evaluate(c, data.matrix, 0.001));
    auto superset = std::get<BinaryChromosome>(c);
    superset.bits(k % 12) = true;
    CHECK(evaluate(superset, data.matrix, 0.001).params >= evaluate(c, data.matrix, 0.001).params);
  }
}

TEST_CASE("repair restores feasibility") {
  std::mt19937_64 rng(9);
  auto zero = bits({0, 0, 0, 0});
  CHECK(repair(zero, rng));
  CHECK(zero.count() == 1);
  auto fine = bits({0, 1});
  CHECK_FALSE(repair(fine, rng));

  auto low = genes({0.0002, 0.0007, 0.0001});
  CHECK(repair(low, 0.001));
  CHECK(low.genes(1) == 0.001);
  CHECK(low.genes(0) == 0.0002);
  CHECK(is_feasible(low, 0.001));
  CHECK_FALSE(is_feasible(Chromosome{genes({0.0, 0.0})}, 0.001));
}

TEST_CASE("serialize and parse round trip") {
  Chromosome b = bits({1, 0, 1, 1});
  CHECK(serialize(b) == "1011");
  CHECK(parse_chromosome("1011") == b);
  Chromosome r = genes({0.25, 0.0, 1.0});
  CHECK(serialize(r) == "0.25,0,1");
  CHECK(parse_chromosome("0.25,0,1") == r);
  CHECK(encoding_of(parse_chromosome("1", Encoding::real)) == Encoding::real);
  CHECK(encoding_of(parse_chromosome("1")) == Encoding::binary);
  CHECK_THROWS_AS(parse_chromosome("0.5,1.5"), DataError);
  CHECK_THROWS_AS(parse_chromosome(""), DataError);
  CHECK(parse_encoding("real") == Encoding::real);
  CHECK_THROWS_AS(parse_encoding("ternary"), ConfigError);
}

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

#include "evofuse/nsga2.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "evofuse/error.hpp"

namespace evofuse {

namespace {

std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream,
                    0x65766f66u};
  return std::mt19937_64(seq);
}

bool draw(double p, std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

}  // namespace

ReferencePoint resolve_reference(ReferencePoint ref, const DetectorPool& pool) {
  if (ref.params <= 0) ref.params = pool.total_params();
  return ref;
}

RunConfig RunConfig::defaults(Encoding encoding) {
  RunConfig c;
  c.encoding = encoding;
  if (encoding == Encoding::real) {
    c.crossover_rate = 0.5;
    c.mutation_rate = 0.01;
  }
  return c;
}

void RunConfig::validate(std::size_t pool_size) const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (population_size < pool_size + 1) {
    throw ConfigError("population size " + std::to_string(population_size) + " must be at least D + 1 = " +
                      std::to_string(pool_size + 1) + " to hold the seed individuals");
  }
  if (population_size < 2) throw ConfigError("population size must be at least 2");
  if (max_generations < 1) throw ConfigError("max_generations must be positive");
  if (!in_unit(crossover_rate)) throw ConfigError("crossover rate must lie in [0, 1]");
  if (!in_unit(mutation_rate)) throw ConfigError("mutation rate must lie in [0, 1]");
  if (!(eta_m >= 0.0)) throw ConfigError("eta_m must be non-negative");
  if (!(cutoff > 0.0 && cutoff < 1.0)) throw ConfigError("cut-off W must lie in (0, 1)");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be non-negative");
  if (patience < 1) throw ConfigError("patience must be positive");
  if (!(reference.eer > 0.0)) throw ConfigError("reference EER must be positive");
}

RunStreams::RunStreams(std::uint64_t seed)
    : seeding(make_stream(seed, 1)),
      selection(make_stream(seed, 2)),
      crossover(make_stream(seed, 3)),
      mutation(make_stream(seed, 4)) {}

std::uint64_t derive_seed(std::uint64_t base, std::size_t run) {
  // splitmix64 finaliser
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(run) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

ObjectivePoints<double> objective_points(std::span<const FusionObjectives> objectives) {
  ObjectivePoints<double> pts(static_cast<Eigen::Index>(objectives.size()), 2);
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    pts(static_cast<Eigen::Index>(i), 0) = objectives[i].eer;
    pts(static_cast<Eigen::Index>(i), 1) = static_cast<double>(objectives[i].params);
  }
  return pts;
}

Fronts fast_nondominated_sort(std::span<const FusionObjectives> objectives) {
  return fast_nondominated_sort(objective_points(objectives));
}

std::vector<double> crowding_distance(std::span<const FusionObjectives> front) {
  return crowding_distance(objective_points(front));
}

ParetoFront make_front(std::vector<FrontMember> candidates) {
  std::vector<FusionObjectives> objs;
  objs.reserve(candidates.size());
  for (const auto& c : candidates) objs.push_back(c.objectives);
  ParetoFront front;
  if (candidates.empty()) return front;
  auto const fronts = fast_nondominated_sort(objs);
  for (auto i : fronts.front()) {
    bool const seen = std::any_of(front.members.begin(), front.members.end(),
                                  [&](const FrontMember& m) { return m.objectives == objs[i]; });
    if (!seen) front.members.push_back(std::move(candidates[i]));
  }
  std::stable_sort(front.members.begin(), front.members.end(), [](const FrontMember& a, const FrontMember& b) {
    return a.objectives.eer < b.objectives.eer ||
           (a.objectives.eer == b.objectives.eer && a.objectives.params < b.objectives.params);
  });
  return front;
}

double hypervolume_2d(std::span<const FusionObjectives> points, const ReferencePoint& ref) {
  ObjectivePoints<double> pts = objective_points(points);
  pts.col(0) /= ref.eer;
  pts.col(1) /= static_cast<double>(ref.params);
  return hypervolume_unit(pts);
}

double hypervolume_2d(const ParetoFront& front, const ReferencePoint& ref) {
  std::vector<FusionObjectives> objs;
  objs.reserve(front.size());
  for (const auto& m : front.members) objs.push_back(m.objectives);
  return hypervolume_2d(objs, ref);
}

const Individual& tournament_select(std::span<const Individual> population, std::mt19937_64& rng) {
  if (population.empty()) throw ContractViolation("tournament_select: empty population");
  if (population.size() == 1) return population.front();
  std::uniform_int_distribution<std::size_t> first(0, population.size() - 1);
  std::uniform_int_distribution<std::size_t> second(0, population.size() - 2);
  std::size_t const a = first(rng);
  std::size_t b = second(rng);
  if (b >= a) ++b;
  const auto& x = population[a];
  const auto& y = population[b];
  if (x.rank != y.rank) return x.rank < y.rank ? x : y;
  if (y.crowding > x.crowding) return y;
  return x;
}

std::pair<Chromosome, Chromosome> uniform_crossover(const Chromosome& p1, const Chromosome& p2, double p_c,
                                                    std::mt19937_64& rng) {
  if (p1.index() != p2.index()) throw ContractViolation("uniform_crossover: mixed encodings");
  if (chromosome_size(p1) != chromosome_size(p2)) throw ContractViolation("uniform_crossover: length mismatch");
  std::pair<Chromosome, Chromosome> kids{p1, p2};
  if (!draw(p_c, rng)) return kids;
  std::bernoulli_distribution coin(0.5);
  auto swap_genes = [&](auto& a, auto& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (coin(rng)) std::swap(a(i), b(i));
    }
  };
  if (auto* a = std::get_if<BinaryChromosome>(&kids.first)) {
    swap_genes(a->bits, std::get<BinaryChromosome>(kids.second).bits);
  } else {
    swap_genes(std::get<RealChromosome>(kids.first).genes, std::get<RealChromosome>(kids.second).genes);
  }
  return kids;
}

BinaryChromosome bitflip_mutation(BinaryChromosome chrom, double p_m, std::mt19937_64& rng) {
  for (Eigen::Index i = 0; i < chrom.bits.size(); ++i) {
    if (draw(p_m, rng)) chrom.bits(i) = !chrom.bits(i);
  }
  repair(chrom, rng);
  return chrom;
}

double polynomial_delta(double x, double u, double eta_m) {
  double const power = 1.0 / (eta_m + 1.0);
  if (u < 0.5) {
    double const val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - x, eta_m + 1.0);
    return std::pow(val, power) - 1.0;
  }
  double const val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(x, eta_m + 1.0);
  return 1.0 - std::pow(val, power);
}

RealChromosome polynomial_mutation(RealChromosome chrom, double p_m, double eta_m, double cutoff,
                                   std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Eigen::Index i = 0; i < chrom.genes.size(); ++i) {
    if (unit(rng) >= p_m) continue;
    double const x = chrom.genes(i);
    chrom.genes(i) = std::clamp(x + polynomial_delta(x, unit(rng), eta_m), 0.0, 1.0);
  }
  repair(chrom, cutoff);
  return chrom;
}

std::vector<Chromosome> seed_population(const DetectorPool& pool, const RunConfig& config,
                                        std::mt19937_64& rng) {
  auto const d = static_cast<Eigen::Index>(pool.size());
  if (config.population_size < pool.size() + 1) {
    throw ConfigError("seed_population: N = " + std::to_string(config.population_size) + " < D + 1 = " +
                      std::to_string(pool.size() + 1));
  }
  std::vector<Chromosome> out;
  out.reserve(config.population_size);
  if (config.encoding == Encoding::binary) {
    out.emplace_back(BinaryChromosome{Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(d, true)});
    for (Eigen::Index k = 0; k < d; ++k) {
      BinaryChromosome one{Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(d, false)};
      one.bits(k) = true;
      out.emplace_back(std::move(one));
    }
    std::bernoulli_distribution coin(0.5);
    while (out.size() < config.population_size) {
      BinaryChromosome c{Eigen::Array<bool, Eigen::Dynamic, 1>(d)};
      for (Eigen::Index i = 0; i < d; ++i) c.bits(i) = coin(rng);
      repair(c, rng);
      out.emplace_back(std::move(c));
    }
  } else {
    double const uniform = std::max(1.0 / static_cast<double>(d), config.cutoff);
    out.emplace_back(RealChromosome{Eigen::VectorXd::Constant(d, uniform)});
    for (Eigen::Index k = 0; k < d; ++k) {
      RealChromosome one{Eigen::VectorXd::Zero(d)};
      one.genes(k) = 1.0;
      out.emplace_back(std::move(one));
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (out.size() < config.population_size) {
      RealChromosome c{Eigen::VectorXd(d)};
      for (Eigen::Index i = 0; i < d; ++i) c.genes(i) = unit(rng);
      repair(c, config.cutoff);
      out.emplace_back(std::move(c));
    }
  }
  return out;
}

namespace {

std::vector<FusionObjectives> objectives_of(std::span<const Individual> pop) {
  std::vector<FusionObjectives> objs;
  objs.reserve(pop.size());
  for (const auto& ind : pop) objs.push_back(ind.objectives);
  return objs;
}

/// Ranks and per-front crowding; returns the fronts for reuse.
Fronts rank_population(std::span<Individual> population) {
  auto const objs = objectives_of(population);
  auto fronts = fast_nondominated_sort(objs);
  std::vector<FusionObjectives> members;
  for (std::size_t r = 0; r < fronts.size(); ++r) {
    members.clear();
    for (auto i : fronts[r]) members.push_back(objs[i]);
    auto const dist = crowding_distance(members);
    for (std::size_t k = 0; k < fronts[r].size(); ++k) {
      auto& ind = population[fronts[r][k]];
      ind.rank = r;
      ind.crowding = dist[k];
    }
  }
  return fronts;
}

double front_hypervolume(std::span<const Individual> population, const ReferencePoint& ref) {
  std::vector<FusionObjectives> objs;
  for (const auto& ind : population) {
    if (ind.rank == 0) objs.push_back(ind.objectives);
  }
  return hypervolume_2d(objs, ref);
}

}  // namespace

void assign_rank_and_crowding(std::span<Individual> population) { rank_population(population); }

std::vector<Individual> select_survivors(std::vector<Individual> combined, std::size_t n) {
  auto const fronts = rank_population(combined);
  std::vector<Individual> next;
  next.reserve(n);
  for (const auto& front : fronts) {
    if (next.size() + front.size() <= n) {
      for (auto i : front) next.push_back(std::move(combined[i]));
      if (next.size() == n) break;
      continue;
    }
    struct Candidate {
      std::size_t index;
      bool duplicate;
    };
    std::vector<Candidate> order;
    order.reserve(front.size());
    for (std::size_t k = 0; k < front.size(); ++k) {
      bool dup = false;
      for (std::size_t j = 0; j < k && !dup; ++j) {
        dup = combined[front[j]].objectives == combined[front[k]].objectives;
      }
      order.push_back({front[k], dup});
    }
    std::stable_sort(order.begin(), order.end(), [&](const Candidate& a, const Candidate& b) {
      if (a.duplicate != b.duplicate) return !a.duplicate;
      return combined[a.index].crowding > combined[b.index].crowding;
    });
    for (std::size_t k = 0; next.size() < n; ++k) next.push_back(std::move(combined[order[k].index]));
    break;
  }
  return next;
}

void evaluate_population(std::span<Individual> population, const ScoreMatrix& matrix, double cutoff,
                         std::size_t workers) {
  std::size_t n_threads = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
  n_threads = std::max<std::size_t>(1, std::min(n_threads, population.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(population.size());
  auto work = [&] {
    for (std::size_t i = next++; i < population.size(); i = next++) {
      try {
        population[i].objectives = evaluate(population[i].chromosome, matrix, cutoff);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> threads;
    for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(work);
    work();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

std::vector<Individual> make_offspring(std::span<const Individual> parents, const RunConfig& config,
                                       RunStreams& streams) {
  std::size_t const n = config.population_size;
  std::size_t const pairs = (n + 1) / 2;
  std::vector<const Individual*> winners;
  winners.reserve(2 * pairs);
  for (std::size_t k = 0; k < 2 * pairs; ++k) winners.push_back(&tournament_select(parents, streams.selection));

  std::vector<Individual> kids;
  kids.reserve(2 * pairs);
  for (std::size_t p = 0; p < pairs; ++p) {
    auto [a, b] = uniform_crossover(winners[2 * p]->chromosome, winners[2 * p + 1]->chromosome,
                                    config.crossover_rate, streams.crossover);
    for (Chromosome* c : {&a, &b}) {
      if (auto* bin = std::get_if<BinaryChromosome>(c)) {
        *bin = bitflip_mutation(std::move(*bin), config.mutation_rate, streams.mutation);
      } else {
        auto& real = std::get<RealChromosome>(*c);
        real = polynomial_mutation(std::move(real), config.mutation_rate, config.eta_m, config.cutoff,
                                   streams.mutation);
      }
      kids.push_back(Individual{std::move(*c), {}, 0, 0.0});
    }
  }
  kids.resize(n);
  return kids;
}

}  // namespace

RunReport evolve(const ScoreMatrix& matrix, const RunConfig& config, const GenerationObserver& observer) {
  config.validate(matrix.detectors());
  auto const start = std::chrono::steady_clock::now();
  auto const ref = resolve_reference(config.reference, matrix.pool());
  RunStreams streams(config.seed);

  std::vector<Individual> population;
  for (auto& c : seed_population(matrix.pool(), config, streams.seeding)) {
    population.push_back(Individual{std::move(c), {}, 0, 0.0});
  }
  evaluate_population(population, matrix, config.cutoff, config.workers);
  assign_rank_and_crowding(population);

  RunReport report;
  report.seed = config.seed;
  report.hv_trace.push_back(front_hypervolume(population, ref));
  if (observer) observer(0, population);

  std::size_t stagnant = 0;
  while (report.hv_trace.size() < config.max_generations && stagnant < config.patience) {
    auto offspring = make_offspring(population, config, streams);
    evaluate_population(offspring, matrix, config.cutoff, config.workers);
    std::vector<Individual> combined = std::move(population);
    combined.insert(combined.end(), std::make_move_iterator(offspring.begin()),
                    std::make_move_iterator(offspring.end()));
    population = select_survivors(std::move(combined), config.population_size);

    double const hv = front_hypervolume(population, ref);
    stagnant = hv - report.hv_trace.back() < config.epsilon ? stagnant + 1 : 0;
    report.hv_trace.push_back(hv);
    if (observer) observer(report.hv_trace.size() - 1, population);
  }

  std::vector<FrontMember> rank0;
  for (auto& ind : population) {
    if (ind.rank == 0) rank0.push_back({ind.objectives, std::move(ind.chromosome)});
  }
  report.front = make_front(std::move(rank0));
  report.generations_run = report.hv_trace.size();
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ParetoFront super_pareto(std::span<const ParetoFront> fronts) {
  std::vector<FrontMember> all;
  std::optional<Encoding> encoding;
  for (const auto& f : fronts) {
    for (const auto& m : f.members) {
      auto const e = encoding_of(m.chromosome);
      if (encoding && *encoding != e) throw ContractViolation("super_pareto: fronts mix encodings");
      encoding = e;
      all.push_back(m);
    }
  }
  return make_front(std::move(all));
}

}  // namespace evofuse

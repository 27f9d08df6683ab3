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
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "evofuse/fusion.hpp"
#include "evofuse/pareto.hpp"
#include "evofuse/score_data.hpp"

namespace evofuse {

/// Hypervolume reference point in raw units. `params <= 0` means "total
/// parameter count of the pool" and is resolved by resolve_reference().
struct ReferencePoint {
  double eer = 0.20;
  std::int64_t params = 0;
};

ReferencePoint resolve_reference(ReferencePoint ref, const DetectorPool& pool);

struct Individual {
  Chromosome chromosome;
  FusionObjectives objectives;
  std::size_t rank = 0;
  double crowding = 0.0;
};

struct RunConfig {
  Encoding encoding = Encoding::binary;
  std::size_t population_size = 100;
  std::size_t max_generations = 500;
  double crossover_rate = 0.7;
  double mutation_rate = 1.0 / 36.0;
  double eta_m = 15.0;
  double cutoff = 0.001;
  double epsilon = 1e-5;
  std::size_t patience = 30;
  std::uint64_t seed = 0;
  ReferencePoint reference;
  /// Threads for objective evaluation; 0 = hardware concurrency. Never affects results.
  std::size_t workers = 0;

  /// Tuned defaults per encoding (binary: p_c 0.7, p_m 1/36; real: p_c 0.5, p_m 0.01).
  static RunConfig defaults(Encoding encoding);
  /// Throws ConfigError on out-of-range values or N < D + 1.
  void validate(std::size_t pool_size) const;
};

struct FrontMember {
  FusionObjectives objectives;
  Chromosome chromosome;
};

/// Mutually non-dominated, one member per objective pair, ascending by EER.
struct ParetoFront {
  std::vector<FrontMember> members;

  [[nodiscard]] std::size_t size() const noexcept { return members.size(); }
  [[nodiscard]] bool empty() const noexcept { return members.empty(); }
};

struct RunReport {
  ParetoFront front;
  std::vector<double> hv_trace;  ///< entry 0 is the initial population
  std::size_t generations_run = 0;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
};

/// Independent generators derived from one root seed. Evaluation draws nothing.
struct RunStreams {
  std::mt19937_64 seeding;
  std::mt19937_64 selection;
  std::mt19937_64 crossover;
  std::mt19937_64 mutation;

  explicit RunStreams(std::uint64_t seed);
};

/// Seed of the k-th independent run derived from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::size_t run);

ObjectivePoints<double> objective_points(std::span<const FusionObjectives> objectives);
Fronts fast_nondominated_sort(std::span<const FusionObjectives> objectives);
std::vector<double> crowding_distance(std::span<const FusionObjectives> front);

/// Non-dominated filter + objective dedup (first occurrence wins) + sort.
ParetoFront make_front(std::vector<FrontMember> candidates);

double hypervolume_2d(std::span<const FusionObjectives> points, const ReferencePoint& ref);
double hypervolume_2d(const ParetoFront& front, const ReferencePoint& ref);

/// Binary tournament: lower rank wins, then higher crowding, then the first draw.
const Individual& tournament_select(std::span<const Individual> population, std::mt19937_64& rng);

std::pair<Chromosome, Chromosome> uniform_crossover(const Chromosome& p1, const Chromosome& p2, double p_c,
                                                    std::mt19937_64& rng);

BinaryChromosome bitflip_mutation(BinaryChromosome chrom, double p_m, std::mt19937_64& rng);

/// Bounded polynomial perturbation on [0,1] for one gene with draw `u`.
double polynomial_delta(double x, double u, double eta_m);

RealChromosome polynomial_mutation(RealChromosome chrom, double p_m, double eta_m, double cutoff,
                                   std::mt19937_64& rng);

/// All-detector fusion, then one-hot per detector, then random fill to N.
std::vector<Chromosome> seed_population(const DetectorPool& pool, const RunConfig& config,
                                        std::mt19937_64& rng);

/// Sets rank and crowding for every individual of `population`.
void assign_rank_and_crowding(std::span<Individual> population);

/// (mu + lambda) truncation to `n` survivors: whole fronts by rank, the
/// boundary front by descending crowding. Within the boundary front the
/// first copy of each objective pair is preferred over later duplicates.
std::vector<Individual> select_survivors(std::vector<Individual> combined, std::size_t n);

/// Fills objectives in place. Results do not depend on `workers`.
void evaluate_population(std::span<Individual> population, const ScoreMatrix& matrix, double cutoff,
                         std::size_t workers);

using GenerationObserver = std::function<void(std::size_t generation, std::span<const Individual>)>;

RunReport evolve(const ScoreMatrix& matrix, const RunConfig& config, const GenerationObserver& observer = {});

/// Union of several fronts reduced to its global non-dominated set.
/// Throws ContractViolation when the fronts mix encodings.
ParetoFront super_pareto(std::span<const ParetoFront> fronts);

}  // namespace evofuse

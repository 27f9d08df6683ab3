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
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "evofuse/score_data.hpp"

namespace evofuse {

enum class Encoding { binary, real };

std::string_view to_string(Encoding e) noexcept;
Encoding parse_encoding(std::string_view text);

/// Detector selection: gene i set means detector i is averaged in.
struct BinaryChromosome {
  Eigen::Array<bool, Eigen::Dynamic, 1> bits;

  [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(bits.size()); }
  [[nodiscard]] std::size_t count() const noexcept { return static_cast<std::size_t>(bits.count()); }
  friend bool operator==(const BinaryChromosome& a, const BinaryChromosome& b) {
    return a.bits.size() == b.bits.size() && (a.bits == b.bits).all();
  }
};

/// Raw detector weights in [0,1]. Not normalised; see effective_weights().
struct RealChromosome {
  Eigen::VectorXd genes;

  [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(genes.size()); }
  friend bool operator==(const RealChromosome& a, const RealChromosome& b) {
    return a.genes.size() == b.genes.size() && (a.genes.array() == b.genes.array()).all();
  }
};

using Chromosome = std::variant<BinaryChromosome, RealChromosome>;

[[nodiscard]] Encoding encoding_of(const Chromosome& c) noexcept;
[[nodiscard]] std::size_t chromosome_size(const Chromosome& c) noexcept;

/// Phenotype of a real chromosome after the cut-off.
struct EffectiveWeights {
  Eigen::VectorXd weights;
  std::vector<std::size_t> support;
};

/// f1 = EER of the fused scores, f2 = summed parameter count of the support.
struct FusionObjectives {
  double eer = 0.0;
  std::int64_t params = 0;

  friend bool operator==(const FusionObjectives&, const FusionObjectives&) = default;
};

/// `a` is no worse in both objectives and strictly better in one.
[[nodiscard]] inline bool dominates(const FusionObjectives& a, const FusionObjectives& b) noexcept {
  return a.eer <= b.eer && a.params <= b.params && (a.eer < b.eer || a.params < b.params);
}

/// Equal-weight average of the selected rows. Throws ContractViolation on an
/// all-zero chromosome or a length mismatch.
Eigen::RowVectorXd fuse_binary(const BinaryChromosome& chrom, const ScoreMatrix& matrix);

/// Genes below `cutoff` are zeroed, the rest normalised to sum to one.
/// Throws ContractViolation if no gene reaches the cut-off.
EffectiveWeights effective_weights(const RealChromosome& chrom, double cutoff);

Eigen::RowVectorXd fuse_real(const RealChromosome& chrom, const ScoreMatrix& matrix, double cutoff);

/// Weighted sum of detector rows for an explicit weight vector.
template <typename Derived>
Eigen::RowVectorXd fuse_weighted(const Eigen::MatrixBase<Derived>& weights, const ScoreMatrix& matrix) {
  return weights.transpose() * matrix.scores();
}

std::int64_t param_count(std::span<const std::size_t> support, const DetectorPool& pool);

std::vector<std::size_t> support_of(const Chromosome& chrom, double cutoff);

/// Pure function of its inputs; safe to call concurrently on one matrix.
FusionObjectives evaluate(const Chromosome& chrom, const ScoreMatrix& matrix, double cutoff);

/// Fused score vector for either encoding.
Eigen::RowVectorXd fuse(const Chromosome& chrom, const ScoreMatrix& matrix, double cutoff);

/// Feasibility repair. Binary: an all-zero chromosome gets one uniformly drawn
/// bit set. Real: if every gene is below `cutoff`, the largest gene (first on
/// ties) is raised to exactly `cutoff`. Returns true if a repair happened.
bool repair(BinaryChromosome& chrom, std::mt19937_64& rng);
bool repair(RealChromosome& chrom, double cutoff);

[[nodiscard]] bool is_feasible(const Chromosome& chrom, double cutoff) noexcept;

/// Binary: string of '0'/'1'. Real: comma-separated genes, 6 significant digits.
std::string serialize(const Chromosome& chrom);
/// Inverse of serialize(). Without a hint, a pure 0/1 string is read as binary.
Chromosome parse_chromosome(std::string_view text, std::optional<Encoding> hint = std::nullopt);

}  // namespace evofuse

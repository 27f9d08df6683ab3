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

#include "evofuse/fusion.hpp"

#include <sstream>

#include "evofuse/csv.hpp"
#include "evofuse/error.hpp"
#include "evofuse/metrics.hpp"

namespace evofuse {

std::string_view to_string(Encoding e) noexcept { return e == Encoding::binary ? "binary" : "real"; }

Encoding parse_encoding(std::string_view text) {
  if (text == "binary") return Encoding::binary;
  if (text == "real") return Encoding::real;
  throw ConfigError("unknown encoding '" + std::string(text) + "' (expected binary or real)");
}

Encoding encoding_of(const Chromosome& c) noexcept {
  return std::holds_alternative<BinaryChromosome>(c) ? Encoding::binary : Encoding::real;
}

std::size_t chromosome_size(const Chromosome& c) noexcept {
  return std::visit([](const auto& x) { return x.size(); }, c);
}

Eigen::RowVectorXd fuse_binary(const BinaryChromosome& chrom, const ScoreMatrix& matrix) {
  if (chrom.size() != matrix.detectors()) {
    throw ContractViolation("fuse_binary: chromosome length " + std::to_string(chrom.size()) +
                            " != pool size " + std::to_string(matrix.detectors()));
  }
  auto const selected = chrom.count();
  if (selected == 0) throw ContractViolation("fuse_binary: all-zero chromosome");
  Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(matrix.trials()));
  for (Eigen::Index i = 0; i < chrom.bits.size(); ++i) {
    if (chrom.bits(i)) sum += matrix.scores().row(i);
  }
  return sum / static_cast<double>(selected);
}

EffectiveWeights effective_weights(const RealChromosome& chrom, double cutoff) {
  EffectiveWeights out;
  out.weights = (chrom.genes.array() >= cutoff).select(chrom.genes, 0.0);
  for (Eigen::Index i = 0; i < out.weights.size(); ++i) {
    if (out.weights(i) > 0.0) out.support.push_back(static_cast<std::size_t>(i));
  }
  if (out.support.empty()) throw ContractViolation("effective_weights: every gene is below the cut-off");
  out.weights /= out.weights.sum();
  return out;
}

Eigen::RowVectorXd fuse_real(const RealChromosome& chrom, const ScoreMatrix& matrix, double cutoff) {
  if (chrom.size() != matrix.detectors()) {
    throw ContractViolation("fuse_real: chromosome length " + std::to_string(chrom.size()) +
                            " != pool size " + std::to_string(matrix.detectors()));
  }
  auto const w = effective_weights(chrom, cutoff);
  Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(matrix.trials()));
  // Only the support contributes, so excluded rows cannot leak through 0 * x.
  for (auto i : w.support) out += w.weights(static_cast<Eigen::Index>(i)) * matrix.row(i);
  return out;
}

std::int64_t param_count(std::span<const std::size_t> support, const DetectorPool& pool) {
  std::int64_t total = 0;
  for (auto i : support) total += pool[i].param_count;
  return total;
}

std::vector<std::size_t> support_of(const Chromosome& chrom, double cutoff) {
  std::vector<std::size_t> support;
  if (auto const* b = std::get_if<BinaryChromosome>(&chrom)) {
    for (Eigen::Index i = 0; i < b->bits.size(); ++i) {
      if (b->bits(i)) support.push_back(static_cast<std::size_t>(i));
    }
  } else {
    auto const& r = std::get<RealChromosome>(chrom);
    for (Eigen::Index i = 0; i < r.genes.size(); ++i) {
      if (r.genes(i) >= cutoff && r.genes(i) > 0.0) support.push_back(static_cast<std::size_t>(i));
    }
  }
  return support;
}

Eigen::RowVectorXd fuse(const Chromosome& chrom, const ScoreMatrix& matrix, double cutoff) {
  if (auto const* b = std::get_if<BinaryChromosome>(&chrom)) return fuse_binary(*b, matrix);
  return fuse_real(std::get<RealChromosome>(chrom), matrix, cutoff);
}

FusionObjectives evaluate(const Chromosome& chrom, const ScoreMatrix& matrix, double cutoff) {
  Eigen::RowVectorXd const fused = fuse(chrom, matrix, cutoff);
  auto const support = support_of(chrom, cutoff);
  return {eer(std::span<const double>(fused.data(), static_cast<std::size_t>(fused.size())),
              matrix.labels().labels()),
          param_count(support, matrix.pool())};
}

bool repair(BinaryChromosome& chrom, std::mt19937_64& rng) {
  if (chrom.bits.any() || chrom.bits.size() == 0) return false;
  std::uniform_int_distribution<Eigen::Index> pick(0, chrom.bits.size() - 1);
  chrom.bits(pick(rng)) = true;
  return true;
}

bool repair(RealChromosome& chrom, double cutoff) {
  if (chrom.genes.size() == 0 || (chrom.genes.array() >= cutoff).any()) return false;
  Eigen::Index best = 0;
  chrom.genes.maxCoeff(&best);
  chrom.genes(best) = cutoff;
  return true;
}

bool is_feasible(const Chromosome& chrom, double cutoff) noexcept {
  if (auto const* b = std::get_if<BinaryChromosome>(&chrom)) return b->bits.any();
  auto const& g = std::get<RealChromosome>(chrom).genes;
  return (g.array() >= 0.0).all() && (g.array() <= 1.0).all() && (g.array() >= cutoff).any();
}

std::string serialize(const Chromosome& chrom) {
  std::string out;
  if (auto const* b = std::get_if<BinaryChromosome>(&chrom)) {
    out.reserve(b->size());
    for (Eigen::Index i = 0; i < b->bits.size(); ++i) out.push_back(b->bits(i) ? '1' : '0');
    return out;
  }
  auto const& g = std::get<RealChromosome>(chrom).genes;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += io::format_sig(g(i), 6);
  }
  return out;
}

Chromosome parse_chromosome(std::string_view text, std::optional<Encoding> hint) {
  auto const trimmed = io::trim(text);
  if (trimmed.empty()) throw DataError("empty chromosome");
  bool const bit_string = trimmed.find_first_not_of("01") == std::string::npos;
  if (hint == Encoding::binary && !bit_string) throw DataError("invalid binary chromosome '" + trimmed + "'");
  if (bit_string && hint != Encoding::real) {
    BinaryChromosome b{Eigen::Array<bool, Eigen::Dynamic, 1>(static_cast<Eigen::Index>(trimmed.size()))};
    for (std::size_t i = 0; i < trimmed.size(); ++i) b.bits(static_cast<Eigen::Index>(i)) = trimmed[i] == '1';
    return b;
  }
  auto const fields = io::split_csv(trimmed);
  RealChromosome r{Eigen::VectorXd(static_cast<Eigen::Index>(fields.size()))};
  for (std::size_t i = 0; i < fields.size(); ++i) {
    auto const v = io::parse_real(fields[i]);
    if (!v || *v < 0.0 || *v > 1.0) throw DataError("invalid real gene '" + fields[i] + "'");
    r.genes(static_cast<Eigen::Index>(i)) = *v;
  }
  return r;
}

}  // namespace evofuse

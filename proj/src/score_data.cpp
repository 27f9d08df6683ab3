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

#include "evofuse/score_data.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "evofuse/csv.hpp"
#include "evofuse/error.hpp"

namespace evofuse {

namespace {

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

std::size_t resolve_workers(std::size_t requested, std::size_t jobs) {
  std::size_t n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return std::max<std::size_t>(1, std::min(n, jobs));
}

}  // namespace

DetectorPool::DetectorPool(std::vector<DetectorMeta> detectors) : detectors_(std::move(detectors)) {
  if (detectors_.empty()) throw DataError("detector pool is empty");
  std::unordered_set<std::string> names;
  for (std::size_t i = 0; i < detectors_.size(); ++i) {
    auto& d = detectors_[i];
    d.id = i;
    if (d.name.empty()) throw DataError("detector " + std::to_string(i) + " has an empty name");
    if (!names.insert(d.name).second) throw DataError("duplicate detector name '" + d.name + "'");
    if (d.param_count <= 0) {
      throw DataError("detector '" + d.name + "' has non-positive param_count " +
                      std::to_string(d.param_count));
    }
  }
}

std::int64_t DetectorPool::total_params() const noexcept {
  std::int64_t total = 0;
  for (const auto& d : detectors_) total += d.param_count;
  return total;
}

std::optional<std::size_t> DetectorPool::find(std::string_view name) const {
  for (const auto& d : detectors_) {
    if (d.name == name) return d.id;
  }
  return std::nullopt;
}

std::string_view to_string(Label label) noexcept {
  return label == Label::bonafide ? "bonafide" : "spoof";
}

TrialLabels::TrialLabels(std::vector<std::string> trial_ids, std::vector<Label> labels)
    : trial_ids_(std::move(trial_ids)), labels_(std::move(labels)) {
  if (trial_ids_.size() != labels_.size()) throw DataError("trial id / label count mismatch");
  std::unordered_set<std::string_view> seen;
  seen.reserve(trial_ids_.size());
  for (const auto& id : trial_ids_) {
    if (!seen.insert(id).second) throw DataError("duplicate trial id '" + id + "'");
  }
  n_bonafide_ = static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), Label::bonafide));
  if (n_bonafide_ == 0) throw DataError("labels contain no bonafide trials");
  if (n_bonafide_ == labels_.size()) throw DataError("labels contain no spoof trials");
}

TrialLabels TrialLabels::select(std::span<const std::size_t> columns) const {
  std::vector<std::string> ids;
  std::vector<Label> labels;
  ids.reserve(columns.size());
  labels.reserve(columns.size());
  for (auto c : columns) {
    ids.push_back(trial_ids_.at(c));
    labels.push_back(labels_.at(c));
  }
  return TrialLabels(std::move(ids), std::move(labels));
}

ScoreMatrix::ScoreMatrix(DetectorPool pool, TrialLabels labels, ScoreArray scores)
    : pool_(std::move(pool)), labels_(std::move(labels)), scores_(std::move(scores)) {
  if (static_cast<std::size_t>(scores_.rows()) != pool_.size()) {
    throw DataError("score matrix has " + std::to_string(scores_.rows()) + " rows but pool has " +
                    std::to_string(pool_.size()) + " detectors");
  }
  if (static_cast<std::size_t>(scores_.cols()) != labels_.size()) {
    throw DataError("score matrix has " + std::to_string(scores_.cols()) + " columns but " +
                    std::to_string(labels_.size()) + " trials are labelled");
  }
  if (!scores_.allFinite()) throw DataError("score matrix contains non-finite values");
}

ScoreMatrix ScoreMatrix::select_detectors(std::span<const std::size_t> ids) const {
  std::vector<DetectorMeta> metas;
  ScoreArray sub(static_cast<Eigen::Index>(ids.size()), scores_.cols());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    metas.push_back(pool_[ids[k]]);
    sub.row(static_cast<Eigen::Index>(k)) = scores_.row(static_cast<Eigen::Index>(ids[k]));
  }
  return ScoreMatrix(DetectorPool(std::move(metas)), labels_, std::move(sub));
}

DetectorPool load_manifest(const std::filesystem::path& path) {
  auto const lines = io::read_lines(path);
  if (lines.empty()) throw DataError(path.string() + ": empty manifest");
  auto const header = io::split_csv(lines.front().text);
  if (header != std::vector<std::string>{"name", "param_count", "score_file"}) {
    throw DataError(where(path, lines.front().number) +
                    "expected header 'name,param_count,score_file'");
  }
  auto const base = path.parent_path();
  std::vector<DetectorMeta> detectors;
  std::unordered_set<std::string> names;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto const& line = lines[i];
    auto const fields = io::split_csv(line.text);
    if (fields.size() != 3) throw DataError(where(path, line.number) + "expected 3 fields");
    auto const count = io::parse_int(fields[1]);
    if (!count) throw DataError(where(path, line.number) + "param_count '" + fields[1] + "' is not an integer");
    if (*count <= 0) throw DataError(where(path, line.number) + "param_count must be positive");
    if (!names.insert(fields[0]).second) {
      throw DataError(where(path, line.number) + "duplicate detector name '" + fields[0] + "'");
    }
    std::filesystem::path score = fields[2];
    if (score.is_relative()) score = base / score;
    detectors.push_back({detectors.size(), fields[0], *count, score});
  }
  return DetectorPool(std::move(detectors));
}

TrialLabels load_labels(const std::filesystem::path& path) {
  std::vector<std::string> ids;
  std::vector<Label> labels;
  std::unordered_set<std::string> seen;
  for (const auto& line : io::read_lines(path)) {
    auto const tok = io::split_ws(line.text);
    if (tok.size() != 2) throw DataError(where(path, line.number) + "expected 'trial_id label'");
    Label label;
    if (tok[1] == "bonafide") {
      label = Label::bonafide;
    } else if (tok[1] == "spoof") {
      label = Label::spoof;
    } else {
      throw DataError(where(path, line.number) + "unknown label '" + tok[1] + "'");
    }
    if (!seen.insert(tok[0]).second) {
      throw DataError(where(path, line.number) + "duplicate trial id '" + tok[0] + "'");
    }
    ids.push_back(tok[0]);
    labels.push_back(label);
  }
  try {
    return TrialLabels(std::move(ids), std::move(labels));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

namespace {

DetectorStats read_detector_row(const DetectorMeta& det,
                                const std::unordered_map<std::string_view, std::size_t>& column,
                                std::span<const std::string> trial_ids, double* row) {
  std::vector<char> filled(trial_ids.size(), 0);
  DetectorStats stats{det.name};
  for (const auto& line : io::read_lines(det.score_path)) {
    auto const tok = io::split_ws(line.text);
    if (tok.size() != 2) {
      throw DataError(where(det.score_path, line.number) + "expected 'trial_id score'");
    }
    auto const it = column.find(tok[0]);
    if (it == column.end()) {
      ++stats.unused_lines;
      continue;
    }
    auto const value = io::parse_real(tok[1]);
    if (!value) throw DataError(where(det.score_path, line.number) + "invalid score '" + tok[1] + "'");
    if (!std::isfinite(*value)) {
      throw DataError(where(det.score_path, line.number) + "non-finite score for trial '" + tok[0] +
                      "' in detector '" + det.name + "'");
    }
    if (filled[it->second]) {
      throw DataError(where(det.score_path, line.number) + "duplicate trial '" + tok[0] + "'");
    }
    filled[it->second] = 1;
    row[it->second] = *value;
  }
  for (std::size_t j = 0; j < filled.size(); ++j) {
    if (!filled[j]) {
      throw DataError("detector '" + det.name + "' (" + det.score_path.string() +
                      ") is missing a score for trial '" + trial_ids[j] + "'");
    }
  }
  return stats;
}

}  // namespace

Assembled assemble_matrix(const DetectorPool& pool, const TrialLabels& labels,
                          const AssembleOptions& options) {
  auto const ids = labels.trial_ids();
  std::unordered_map<std::string_view, std::size_t> column;
  column.reserve(ids.size());
  for (std::size_t j = 0; j < ids.size(); ++j) column.emplace(ids[j], j);

  ScoreArray scores(static_cast<Eigen::Index>(pool.size()), static_cast<Eigen::Index>(ids.size()));
  std::vector<DetectorStats> stats(pool.size());
  std::vector<std::exception_ptr> errors(pool.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < pool.size(); i = next++) {
      try {
        stats[i] = read_detector_row(pool[i], column, ids, scores.row(static_cast<Eigen::Index>(i)).data());
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  auto const n_workers = resolve_workers(options.workers, pool.size());
  {
    std::vector<std::jthread> threads;
    for (std::size_t w = 1; w < n_workers; ++w) threads.emplace_back(work);
    work();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (std::size_t i = 0; i < pool.size(); ++i) {
    auto row = scores.row(static_cast<Eigen::Index>(i));
    stats[i].min = row.minCoeff();
    stats[i].max = row.maxCoeff();
    stats[i].mean = row.mean();
    if (options.znorm) {
      double const sd = std::sqrt((row.array() - stats[i].mean).square().mean());
      row.array() -= stats[i].mean;
      if (sd > 0.0) row /= sd;
    }
  }
  return {ScoreMatrix(pool, labels, std::move(scores)), std::move(stats)};
}

void write_manifest(const std::filesystem::path& path, const DetectorPool& pool) {
  std::ostringstream out;
  out << "name,param_count,score_file\n";
  auto const base = path.parent_path();
  for (const auto& d : pool) {
    auto score = d.score_path;
    if (!base.empty()) {
      score = std::filesystem::absolute(score).lexically_normal().lexically_relative(
          std::filesystem::absolute(base).lexically_normal());
    }
    out << io::csv_quote(d.name) << ',' << d.param_count << ',' << io::csv_quote(score.generic_string())
        << '\n';
  }
  io::write_file_atomic(path, out.str());
}

void write_labels(const std::filesystem::path& path, const TrialLabels& labels) {
  std::ostringstream out;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    out << labels.trial_ids()[j] << ' ' << to_string(labels.labels()[j]) << '\n';
  }
  io::write_file_atomic(path, out.str());
}

void write_scores(const std::filesystem::path& path, const ScoreMatrix& matrix, std::size_t detector) {
  std::ostringstream out;
  auto const ids = matrix.labels().trial_ids();
  auto const row = matrix.row(detector);
  for (std::size_t j = 0; j < ids.size(); ++j) {
    out << ids[j] << ' ' << io::format_exact(row(static_cast<Eigen::Index>(j))) << '\n';
  }
  io::write_file_atomic(path, out.str());
}

}  // namespace evofuse

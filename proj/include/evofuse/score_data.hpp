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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace evofuse {

/// Row-major so each detector's scores are contiguous.
using ScoreArray = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct DetectorMeta {
  std::size_t id = 0;
  std::string name;
  std::int64_t param_count = 0;
  std::filesystem::path score_path;
};

/// Ordered detector manifest. The order is the gene order of every chromosome.
class DetectorPool {
 public:
  DetectorPool() = default;
  /// Assigns ids in list order. Throws DataError on an empty list, duplicate
  /// names or a non-positive parameter count.
  explicit DetectorPool(std::vector<DetectorMeta> detectors);

  [[nodiscard]] std::size_t size() const noexcept { return detectors_.size(); }
  [[nodiscard]] const DetectorMeta& operator[](std::size_t i) const { return detectors_[i]; }
  [[nodiscard]] std::span<const DetectorMeta> detectors() const noexcept { return detectors_; }
  [[nodiscard]] auto begin() const noexcept { return detectors_.begin(); }
  [[nodiscard]] auto end() const noexcept { return detectors_.end(); }

  [[nodiscard]] std::int64_t total_params() const noexcept;
  [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const;

 private:
  std::vector<DetectorMeta> detectors_;
};

enum class Label : std::uint8_t { spoof = 0, bonafide = 1 };

std::string_view to_string(Label label) noexcept;

class TrialLabels {
 public:
  TrialLabels() = default;
  /// Throws DataError on duplicate ids, length mismatch, or a missing class.
  TrialLabels(std::vector<std::string> trial_ids, std::vector<Label> labels);

  [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
  [[nodiscard]] std::span<const std::string> trial_ids() const noexcept { return trial_ids_; }
  [[nodiscard]] std::span<const Label> labels() const noexcept { return labels_; }
  [[nodiscard]] std::size_t bonafide_count() const noexcept { return n_bonafide_; }
  [[nodiscard]] std::size_t spoof_count() const noexcept { return size() - n_bonafide_; }

  /// Sub-selection keeping the given column indices, in the given order.
  [[nodiscard]] TrialLabels select(std::span<const std::size_t> columns) const;

 private:
  std::vector<std::string> trial_ids_;
  std::vector<Label> labels_;
  std::size_t n_bonafide_ = 0;
};

/// Immutable D×T score matrix aligned to a pool (rows) and trial labels
/// (columns). Higher score means more bonafide.
class ScoreMatrix {
 public:
  /// Throws DataError if shapes disagree or any score is non-finite.
  ScoreMatrix(DetectorPool pool, TrialLabels labels, ScoreArray scores);

  [[nodiscard]] const DetectorPool& pool() const noexcept { return pool_; }
  [[nodiscard]] const TrialLabels& labels() const noexcept { return labels_; }
  [[nodiscard]] const ScoreArray& scores() const noexcept { return scores_; }
  [[nodiscard]] std::size_t detectors() const noexcept { return static_cast<std::size_t>(scores_.rows()); }
  [[nodiscard]] std::size_t trials() const noexcept { return static_cast<std::size_t>(scores_.cols()); }

  [[nodiscard]] auto row(std::size_t detector) const { return scores_.row(static_cast<Eigen::Index>(detector)); }

  /// Copy restricted to a subset of detectors (in the given order).
  [[nodiscard]] ScoreMatrix select_detectors(std::span<const std::size_t> ids) const;

 private:
  DetectorPool pool_;
  TrialLabels labels_;
  ScoreArray scores_;
};

struct DetectorStats {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  std::size_t unused_lines = 0;  ///< score lines whose trial id is not in the label file
};

struct AssembleOptions {
  bool znorm = false;  ///< per-detector z-normalisation; off by default
  std::size_t workers = 0;  ///< 0 = hardware concurrency
};

struct Assembled {
  ScoreMatrix matrix;
  std::vector<DetectorStats> stats;
};

/// CSV with header `name,param_count,score_file`. Relative score paths resolve
/// against the manifest's directory.
DetectorPool load_manifest(const std::filesystem::path& path);

/// Lines of `trial_id label` with label in {bonafide, spoof}.
TrialLabels load_labels(const std::filesystem::path& path);

/// Joins every detector score file onto the label file's trial order.
/// The label file is authoritative: every labelled trial must have exactly
/// one finite score in every detector file.
Assembled assemble_matrix(const DetectorPool& pool, const TrialLabels& labels,
                          const AssembleOptions& options = {});

void write_manifest(const std::filesystem::path& path, const DetectorPool& pool);
void write_labels(const std::filesystem::path& path, const TrialLabels& labels);
/// Writes one detector row in the score-file format with round-trip precision.
void write_scores(const std::filesystem::path& path, const ScoreMatrix& matrix, std::size_t detector);

}  // namespace evofuse

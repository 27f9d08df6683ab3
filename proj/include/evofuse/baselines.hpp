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
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "evofuse/fusion.hpp"
#include "evofuse/score_data.hpp"

namespace evofuse {

/// Equal-weight score average over `subset`. Throws ContractViolation if empty.
FusionObjectives average_fusion(std::span<const std::size_t> subset, const ScoreMatrix& matrix);

struct LogRegHyper {
  double l2_lambda = 1e-3;
  std::size_t max_iters = 10000;
  double tol = 1e-8;
};

/// Linear fusion `w · s + b` fitted by L2-regularised logistic regression on
/// standardised scores. `weights`/`bias` act on raw scores; the standardised
/// coefficients and statistics are kept for pruning and reuse.
struct LogRegModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  Eigen::VectorXd standardized_weights;
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
  std::size_t iterations = 0;
  double final_loss = 0.0;
  double final_grad_norm = 0.0;
  bool converged = false;
  /// Training loss after every accepted step (entry 0 is the starting loss).
  std::vector<double> loss_trace;
};

/// Full-batch gradient descent with backtracking line search. A model is
/// always returned; check `converged` / `final_grad_norm`.
LogRegModel logreg_fit(const ScoreMatrix& dev, const LogRegHyper& hyper = {});

/// Throws ContractViolation if the model dimension differs from the matrix.
Eigen::RowVectorXd logreg_fuse(const LogRegModel& model, const ScoreMatrix& matrix);

enum class PruneMode { by_individual_eer, by_weight };

std::string_view to_string(PruneMode mode) noexcept;
PruneMode parse_prune_mode(std::string_view text);

struct PruneRecord {
  std::vector<std::size_t> active;  ///< detector ids into the full pool
  double eer = 0.0;                 ///< eval EER of the refitted logreg fusion
  std::int64_t params = 0;
};

struct PruneSweep {
  PruneMode mode = PruneMode::by_weight;
  std::vector<PruneRecord> records;  ///< sizes D, D-1, ..., 1
};

/// Drops one detector at a time (smallest |standardised weight| of a refit, or
/// worst individual dev EER) and records the eval EER of a logreg fusion
/// refitted on dev for each surviving set.
PruneSweep prune_sweep(const ScoreMatrix& dev, const ScoreMatrix& eval, PruneMode mode,
                       const LogRegHyper& hyper = {});

}  // namespace evofuse

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

#include "evofuse/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evofuse/error.hpp"
#include "evofuse/metrics.hpp"

namespace evofuse {

FusionObjectives average_fusion(std::span<const std::size_t> subset, const ScoreMatrix& matrix) {
  if (subset.empty()) throw ContractViolation("average_fusion: empty subset");
  BinaryChromosome chrom{Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(
      static_cast<Eigen::Index>(matrix.detectors()), false)};
  for (auto i : subset) {
    if (i >= matrix.detectors()) throw ContractViolation("average_fusion: detector id out of range");
    chrom.bits(static_cast<Eigen::Index>(i)) = true;
  }
  return evaluate(Chromosome{chrom}, matrix, 0.0);
}

namespace {

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double const e = std::exp(z);
  return e / (1.0 + e);
}

struct Problem {
  Eigen::MatrixXd x;  // T x D, standardised
  Eigen::VectorXd y;  // 1 = bonafide
  double lambda;

  double loss(const Eigen::VectorXd& w, double b) const {
    Eigen::VectorXd const z = (x * w).array() + b;
    double nll = 0.0;
    for (Eigen::Index j = 0; j < z.size(); ++j) nll += softplus(z(j)) - y(j) * z(j);
    return nll / static_cast<double>(z.size()) + 0.5 * lambda * w.squaredNorm();
  }

  void gradient(const Eigen::VectorXd& w, double b, Eigen::VectorXd& gw, double& gb) const {
    Eigen::VectorXd r = (x * w).array() + b;
    for (Eigen::Index j = 0; j < r.size(); ++j) r(j) = sigmoid(r(j)) - y(j);
    auto const t = static_cast<double>(r.size());
    gw = x.transpose() * r / t + lambda * w;
    gb = r.sum() / t;
  }
};

}  // namespace

LogRegModel logreg_fit(const ScoreMatrix& dev, const LogRegHyper& hyper) {
  auto const d = static_cast<Eigen::Index>(dev.detectors());
  auto const& s = dev.scores();
  LogRegModel model;
  model.mean = s.rowwise().mean();
  model.scale = ((s.colwise() - model.mean).array().square().rowwise().mean()).sqrt();
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!(model.scale(i) > 0.0)) model.scale(i) = 1.0;
  }

  Problem prob{((s.colwise() - model.mean).array().colwise() / model.scale.array()).matrix().transpose(),
               Eigen::VectorXd(s.cols()), hyper.l2_lambda};
  auto const labels = dev.labels().labels();
  for (std::size_t j = 0; j < labels.size(); ++j) {
    prob.y(static_cast<Eigen::Index>(j)) = labels[j] == Label::bonafide ? 1.0 : 0.0;
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0.0;
  double loss = prob.loss(w, b);
  model.loss_trace.push_back(loss);
  Eigen::VectorXd gw;
  double gb = 0.0;
  double step = 1.0;
  std::size_t it = 0;
  for (; it < hyper.max_iters; ++it) {
    prob.gradient(w, b, gw, gb);
    double const g2 = gw.squaredNorm() + gb * gb;
    model.final_grad_norm = std::sqrt(g2);
    if (model.final_grad_norm < hyper.tol) {
      model.converged = true;
      break;
    }
    // Armijo backtracking; the step is allowed to grow again between iterations.
    step = std::min(step * 2.0, 1e6);
    bool accepted = false;
    while (step > 1e-18) {
      Eigen::VectorXd const w_new = w - step * gw;
      double const b_new = b - step * gb;
      double const cand = prob.loss(w_new, b_new);
      if (cand <= loss - 1e-4 * step * g2) {
        w = w_new;
        b = b_new;
        loss = cand;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    model.loss_trace.push_back(loss);
  }
  if (!model.converged) {
    prob.gradient(w, b, gw, gb);
    model.final_grad_norm = std::sqrt(gw.squaredNorm() + gb * gb);
    model.converged = model.final_grad_norm < hyper.tol;
  }
  model.iterations = it;
  model.final_loss = loss;
  model.standardized_weights = w;
  model.weights = w.array() / model.scale.array();
  model.bias = b - (w.array() * model.mean.array() / model.scale.array()).sum();
  return model;
}

Eigen::RowVectorXd logreg_fuse(const LogRegModel& model, const ScoreMatrix& matrix) {
  if (static_cast<std::size_t>(model.weights.size()) != matrix.detectors()) {
    throw ContractViolation("logreg_fuse: model has " + std::to_string(model.weights.size()) +
                            " weights but the matrix has " + std::to_string(matrix.detectors()) + " detectors");
  }
  return (model.weights.transpose() * matrix.scores()).array() + model.bias;
}

std::string_view to_string(PruneMode mode) noexcept {
  return mode == PruneMode::by_weight ? "by_weight" : "by_eer";
}

PruneMode parse_prune_mode(std::string_view text) {
  if (text == "by_weight") return PruneMode::by_weight;
  if (text == "by_eer" || text == "by_individual_eer") return PruneMode::by_individual_eer;
  throw ConfigError("unknown prune mode '" + std::string(text) + "' (expected by_weight or by_eer)");
}

PruneSweep prune_sweep(const ScoreMatrix& dev, const ScoreMatrix& eval, PruneMode mode, const LogRegHyper& hyper) {
  if (dev.detectors() != eval.detectors()) throw ContractViolation("prune_sweep: dev/eval pools differ");
  for (std::size_t i = 0; i < dev.detectors(); ++i) {
    if (dev.pool()[i].name != eval.pool()[i].name) throw ContractViolation("prune_sweep: dev/eval pools differ");
  }
  std::vector<double> individual(dev.detectors());
  if (mode == PruneMode::by_individual_eer) {
    for (std::size_t i = 0; i < dev.detectors(); ++i) individual[i] = eer(dev.row(i), dev.labels());
  }

  PruneSweep sweep{mode, {}};
  std::vector<std::size_t> active(dev.detectors());
  for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;
  while (!active.empty()) {
    auto const dev_sub = dev.select_detectors(active);
    auto const eval_sub = eval.select_detectors(active);
    auto const model = logreg_fit(dev_sub, hyper);
    Eigen::RowVectorXd const fused = logreg_fuse(model, eval_sub);
    sweep.records.push_back({active, eer(fused, eval.labels()), param_count(active, dev.pool())});
    if (active.size() == 1) break;

    std::size_t drop = 0;
    for (std::size_t k = 1; k < active.size(); ++k) {
      if (mode == PruneMode::by_weight) {
        auto const wk = std::abs(model.standardized_weights(static_cast<Eigen::Index>(k)));
        auto const wd = std::abs(model.standardized_weights(static_cast<Eigen::Index>(drop)));
        if (wk < wd) drop = k;
      } else if (individual[active[k]] > individual[active[drop]]) {
        drop = k;
      }
    }
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(drop));
  }
  return sweep;
}

}  // namespace evofuse

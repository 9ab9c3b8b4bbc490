// Copyright 2026 The lnndx Authors
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


#include "lnn/training.hpp"

#include <cmath>
#include <stdexcept>

#include "lnn/error.hpp"
#include "lnn/gradient.hpp"

namespace lnn {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning rate must be positive");
  }
  if (epochs < 0) throw ConfigError("epochs must be nonnegative");
  CrispnessConfig{alpha};
  if (!(slope > 0.0) || !std::isfinite(slope)) {
    throw ConfigError("slope must be positive");
  }
  if (!(decision_threshold > 0.0 && decision_threshold < 1.0)) {
    throw ConfigError("decision threshold must lie strictly between 0 and 1");
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test fraction must lie strictly between 0 and 1");
  }
}

double bce(const Eigen::VectorXi& labels, const Eigen::VectorXd& probs) {
  if (labels.size() != probs.size()) {
    throw StructuralError("bce: " + std::to_string(labels.size()) +
                          " labels but " + std::to_string(probs.size()) +
                          " probabilities");
  }
  if (labels.size() == 0) throw StructuralError("bce: empty batch");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    sum += bce_term(labels[i], probs[i]);
  }
  return sum / double(labels.size());
}

void project_all(Expression& expr, const CrispnessConfig& cfg) {
  for (Eigen::Index i = 0; i < expr.size(); ++i) {
    const auto kind = expr.node(i).kind;
    if (kind == NodeKind::kAnd || kind == NodeKind::kOr) {
      expr.set_gate(i, project_params(expr.gate(i), cfg));
    }
  }
}

std::vector<NodeViolation> check_expression(const Expression& expr,
                                            const CrispnessConfig& cfg) {
  std::vector<NodeViolation> out;
  for (Eigen::Index i = 0; i < expr.size(); ++i) {
    const auto kind = expr.node(i).kind;
    if (kind != NodeKind::kAnd && kind != NodeKind::kOr) continue;
    for (const auto& v : check_constraints(expr.gate(i), cfg)) {
      out.push_back({expr.path(i), v});
    }
  }
  return out;
}

TrainedModel train(const RuleSpec& spec, const Dataset& dataset,
                   const TrainConfig& config, const TrainHooks& hooks) {
  config.validate();
  if (dataset.size() == 0) throw StructuralError("cannot train on an empty dataset");
  const CrispnessConfig cfg(config.alpha);

  TrainedModel model{bind_params(spec, config.init, cfg, config.slope),
                     config,
                     dataset.stats,
                     {},
                     to_string(spec),
                     {}};
  model.history.reserve(std::size_t(config.epochs));
  if (config.epochs == 0) return model;

  Expression& expr = model.expression;
  auto count = [&](std::int64_t epochs) {
    if (!hooks.counters) return;
    hooks.counters->epochs += epochs;
    hooks.counters->record_passes += dataset.size();
  };

  BatchGradient step = batch_gradient(expr, dataset.features, dataset.labels);
  count(0);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    expr.set_params(expr.params() - config.learning_rate * step.gradient);
    project_all(expr, cfg);
    if (hooks.check_feasibility) {
      const auto bad = check_expression(expr, cfg);
      if (!bad.empty()) {
        throw std::logic_error("epoch " + std::to_string(epoch) + ": " +
                               bad.front().path + " " +
                               bad.front().violation.describe());
      }
    }
    // The gradient at the new point also gives the post-step loss.
    step = batch_gradient(expr, dataset.features, dataset.labels);
    count(1);
    model.history.push_back(step.loss);
    if (hooks.on_epoch) hooks.on_epoch(epoch, step.loss, expr);
  }
  return model;
}

double predict(const TrainedModel& model, const RawRecord& raw) {
  return eval_expression(model.expression, model.stats.apply(raw)).value();
}

Eigen::VectorXd predict(const TrainedModel& model, const Dataset& data) {
  return eval_rows(model.expression, data.features);
}

EvalReport evaluate(const TrainedModel& model, const Dataset& data,
                    double threshold) {
  return evaluate(predict(model, data), data.labels, threshold);
}

}  // namespace lnn

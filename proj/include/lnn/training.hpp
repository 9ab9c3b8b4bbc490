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

#ifndef LNN_TRAINING_HPP
#define LNN_TRAINING_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lnn/constraints.hpp"
#include "lnn/data.hpp"
#include "lnn/metrics.hpp"
#include "lnn/rules.hpp"

namespace lnn {

struct TrainConfig {
  double learning_rate = 0.05;
  int epochs = 500;
  double alpha = 0.9;
  double slope = 10.0;
  std::uint64_t seed = 42;
  InitStrategy init = InitStrategy::randomized(42);
  double decision_threshold = 0.5;
  double test_fraction = 0.2;
  bool impute_median = false;

  /// Throws ConfigError on the first out-of-range field.
  void validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// Mean BCE with eps-stabilized logs. Throws StructuralError on a length
/// mismatch or an empty batch.
double bce(const Eigen::VectorXi& labels, const Eigen::VectorXd& probs);

/// Projects every And/Or gate of `expr` in place.
void project_all(Expression& expr, const CrispnessConfig& cfg);

struct NodeViolation {
  std::string path;
  Violation violation;
};

/// Constraint violations of every gate, tagged with the node path.
std::vector<NodeViolation> check_expression(const Expression& expr,
                                            const CrispnessConfig& cfg);

struct TrainedModel {
  Expression expression;
  TrainConfig config;
  NormalizationStats stats;
  std::vector<double> history;  ///< mean training BCE after each step
  std::string rule;             ///< canonical rule text
  std::string rule_name;        ///< built-in name, empty for custom rules
};

/// Work performed by a run, for manifests (wall-clock time is never
/// recorded there).
struct TrainCounters {
  std::int64_t epochs = 0;
  std::int64_t record_passes = 0;  ///< forward/backward sweeps over one row
};

struct TrainHooks {
  /// Called after each step and projection with the epoch index (0-based)
  /// and the post-step loss.
  std::function<void(int, double, const Expression&)> on_epoch;
  /// Re-checks every gate after each epoch; throws std::logic_error on a
  /// violation.
  bool check_feasibility = false;
  TrainCounters* counters = nullptr;
};

/// Full-batch projected gradient descent on mean BCE.
TrainedModel train(const RuleSpec& spec, const Dataset& dataset,
                   const TrainConfig& config, const TrainHooks& hooks = {});

/// Normalizes `raw` with the model's statistics and evaluates it.
double predict(const TrainedModel& model, const RawRecord& raw);

/// Root value of every row of an already-normalized dataset.
Eigen::VectorXd predict(const TrainedModel& model, const Dataset& data);

/// Metrics of the model on an already-normalized dataset.
EvalReport evaluate(const TrainedModel& model, const Dataset& data,
                    double threshold);

/// 1 iff probability >= threshold.
inline int classify(double probability, double threshold) {
  return probability >= threshold ? 1 : 0;
}

}  // namespace lnn

#endif  // LNN_TRAINING_HPP

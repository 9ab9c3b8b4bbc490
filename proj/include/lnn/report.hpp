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


// Interpretability artifacts and the model file.
//
// The model file is the JSON explain document itself:
//
//   {
//     "format": "lnndx-model", "format_version": 1,
//     "rule": "...", "rule_name": "..." | null,
//     "config": {...},
//     "normalization": [{"feature", "column", "min", "max", "impute"}...],
//     "nodes": [ pre-order; predicates carry theta, gates beta and weights ],
//     "history": [...],
//     "evaluation": {...}          (optional, ignored when loading)
//   }
//
// Every learnable parameter appears once, in "nodes". README.md documents
// each field.

#ifndef LNN_REPORT_HPP
#define LNN_REPORT_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lnn/metrics.hpp"
#include "lnn/training.hpp"

namespace lnn {

inline constexpr std::string_view kModelFormat = "lnndx-model";
inline constexpr int kModelFormatVersion = 1;

struct ExplainNode {
  std::string path;
  NodeKind kind = NodeKind::kPredicate;
  // predicates
  Eigen::Index feature = -1;
  double theta = 0.0;           ///< stored (normalized, unconstrained)
  double theta_reported = 0.0;  ///< theta clamped to [0, 1]
  double raw_threshold = 0.0;   ///< min + theta_reported (max - min)
  double slope = 0.0;
  // gates
  double beta = 0.0;
  std::vector<double> weights;
};

/// Per-node parameters in pre-order, thresholds de-normalized.
std::vector<ExplainNode> explain(const TrainedModel& model);

nlohmann::ordered_json to_json(const EvalReport& report);
nlohmann::ordered_json to_json(const TrainConfig& config);

/// The model document; `evaluation` is attached when given.
nlohmann::ordered_json export_json(
    const TrainedModel& model,
    const std::optional<EvalReport>& evaluation = std::nullopt);

/// Rebuilds a model. Throws SerializationError on any schema problem.
TrainedModel model_from_json(const nlohmann::ordered_json& doc);

/// export_json(...).dump(2) plus a trailing newline.
std::string serialize(const TrainedModel& model,
                      const std::optional<EvalReport>& evaluation = std::nullopt);
TrainedModel deserialize(std::string_view text);

void save_model(const std::filesystem::path& path, const TrainedModel& model,
                const std::optional<EvalReport>& evaluation = std::nullopt);
TrainedModel load_model(const std::filesystem::path& path);

/// Graphviz digraph of the rule tree: operators drawn as the logic symbols,
/// leaves as feature letters with the raw threshold beneath, edges labeled
/// with the raw gate weights.
std::string export_dot(const TrainedModel& model);

/// Fixed-point text with `decimals` places; never prints "-0.00".
std::string fixed(double value, int decimals);

}  // namespace lnn

#endif  // LNN_REPORT_HPP

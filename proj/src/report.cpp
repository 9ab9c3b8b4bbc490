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


#include "lnn/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lnn/error.hpp"

namespace lnn {

using nlohmann::ordered_json;

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string out(buf);
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) {
    out.erase(0, 1);
  }
  return out;
}

std::vector<ExplainNode> explain(const TrainedModel& model) {
  const Expression& expr = model.expression;
  std::vector<ExplainNode> out;
  out.reserve(std::size_t(expr.size()));
  for (Eigen::Index i = 0; i < expr.size(); ++i) {
    const Node& node = expr.node(i);
    ExplainNode e;
    e.path = expr.path(i);
    e.kind = node.kind;
    switch (node.kind) {
      case NodeKind::kPredicate: {
        e.feature = node.feature;
        e.theta = expr.params()[node.offset];
        e.theta_reported = clamp_unit(e.theta);
        e.raw_threshold = model.stats.unscale(node.feature, e.theta_reported);
        e.slope = node.slope;
        break;
      }
      case NodeKind::kAnd:
      case NodeKind::kOr: {
        const AndParams g = expr.gate(i);
        e.beta = g.beta;
        e.weights.assign(g.weights.data(), g.weights.data() + g.arity());
        break;
      }
      case NodeKind::kNot:
        break;
    }
    out.push_back(std::move(e));
  }
  return out;
}

ordered_json to_json(const EvalReport& r) {
  ordered_json roc = ordered_json::array();
  for (const auto& p : r.roc) {
    roc.push_back({{"threshold", std::isfinite(p.threshold) ? ordered_json(p.threshold)
                                                            : ordered_json(nullptr)},
                   {"fpr", p.fpr},
                   {"tpr", p.tpr}});
  }
  return {{"accuracy", r.accuracy},
          {"precision", r.precision},
          {"recall", r.recall},
          {"f1", r.f1},
          {"auc", r.auc},
          {"precision_degenerate", r.precision_degenerate},
          {"confusion",
           {{"tp", r.counts.tp}, {"fp", r.counts.fp}, {"tn", r.counts.tn}, {"fn", r.counts.fn}}},
          {"roc", roc}};
}

ordered_json to_json(const TrainConfig& c) {
  return {{"learning_rate", c.learning_rate},
          {"epochs", c.epochs},
          {"alpha", c.alpha},
          {"slope", c.slope},
          {"seed", c.seed},
          {"init", c.init.to_string()},
          {"decision_threshold", c.decision_threshold},
          {"test_fraction", c.test_fraction},
          {"impute_median", c.impute_median}};
}

ordered_json export_json(const TrainedModel& model,
                         const std::optional<EvalReport>& evaluation) {
  ordered_json doc;
  doc["format"] = kModelFormat;
  doc["format_version"] = kModelFormatVersion;
  doc["rule"] = model.rule;
  doc["rule_name"] = model.rule_name.empty() ? ordered_json(nullptr)
                                             : ordered_json(model.rule_name);
  doc["config"] = to_json(model.config);

  ordered_json norm = ordered_json::array();
  for (std::size_t f = 0; f < kFeatures.size(); ++f) {
    norm.push_back({{"feature", kFeatures[f].dsl_name},
                    {"column", kFeatures[f].csv_column},
                    {"min", model.stats.min[f]},
                    {"max", model.stats.max[f]},
                    {"impute", model.stats.impute_medians
                                   ? ordered_json((*model.stats.impute_medians)[f])
                                   : ordered_json(nullptr)}});
  }
  doc["normalization"] = norm;

  ordered_json nodes = ordered_json::array();
  for (const auto& e : explain(model)) {
    ordered_json n;
    n["path"] = e.path;
    n["kind"] = to_string(e.kind);
    if (e.kind == NodeKind::kPredicate) {
      const auto& info = feature_info(e.feature);
      n["feature"] = info.dsl_name;
      n["letter"] = std::string(1, info.letter);
      n["theta"] = e.theta;
      n["theta_reported"] = e.theta_reported;
      n["raw_threshold"] = e.raw_threshold;
      n["slope"] = e.slope;
    } else if (e.kind != NodeKind::kNot) {
      n["beta"] = e.beta;
      n["weights"] = e.weights;
    }
    nodes.push_back(std::move(n));
  }
  doc["nodes"] = nodes;
  doc["history"] = model.history;
  if (evaluation) doc["evaluation"] = to_json(*evaluation);
  return doc;
}

namespace {

const ordered_json& field(const ordered_json& obj, const char* key,
                          const std::string& where) {
  if (!obj.is_object()) throw SerializationError(where + " is not an object");
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw SerializationError(where + " lacks field '" + key + "'");
  }
  return *it;
}

double number(const ordered_json& obj, const char* key, const std::string& where) {
  const auto& v = field(obj, key, where);
  if (!v.is_number()) {
    throw SerializationError(where + "." + key + " must be a number");
  }
  return v.get<double>();
}

std::string text(const ordered_json& obj, const char* key, const std::string& where) {
  const auto& v = field(obj, key, where);
  if (!v.is_string()) {
    throw SerializationError(where + "." + key + " must be a string");
  }
  return v.get<std::string>();
}

TrainConfig config_from_json(const ordered_json& c) {
  const std::string where = "config";
  TrainConfig out;
  out.learning_rate = number(c, "learning_rate", where);
  const auto& epochs = field(c, "epochs", where);
  if (!epochs.is_number_integer()) {
    throw SerializationError("config.epochs must be an integer");
  }
  out.epochs = epochs.get<int>();
  out.alpha = number(c, "alpha", where);
  out.slope = number(c, "slope", where);
  const auto& seed = field(c, "seed", where);
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
    throw SerializationError("config.seed must be a nonnegative integer");
  }
  out.seed = seed.get<std::uint64_t>();
  out.init = InitStrategy::parse(text(c, "init", where), out.seed);
  out.decision_threshold = number(c, "decision_threshold", where);
  out.test_fraction = number(c, "test_fraction", where);
  const auto& impute = field(c, "impute_median", where);
  if (!impute.is_boolean()) {
    throw SerializationError("config.impute_median must be a boolean");
  }
  out.impute_median = impute.get<bool>();
  out.validate();
  return out;
}

NormalizationStats stats_from_json(const ordered_json& norm, bool impute) {
  if (!norm.is_array() || norm.size() != kFeatures.size()) {
    throw SerializationError("normalization must list all " +
                             std::to_string(kFeatures.size()) + " features");
  }
  NormalizationStats stats;
  std::array<double, kFeatureCount> medians{};
  for (std::size_t f = 0; f < kFeatures.size(); ++f) {
    const std::string where = "normalization[" + std::to_string(f) + "]";
    const auto& entry = norm[f];
    if (text(entry, "feature", where) != kFeatures[f].dsl_name) {
      throw SerializationError(where + " must describe feature " +
                               std::string(kFeatures[f].dsl_name));
    }
    stats.min[f] = number(entry, "min", where);
    stats.max[f] = number(entry, "max", where);
    if (!(stats.min[f] <= stats.max[f])) {
      throw SerializationError(where + " has min above max");
    }
    const auto& m = field(entry, "impute", where);
    if (impute) {
      if (!m.is_number()) throw SerializationError(where + ".impute must be a number");
      medians[f] = m.get<double>();
    } else if (!m.is_null()) {
      throw SerializationError(where + ".impute must be null without imputation");
    }
  }
  if (impute) stats.impute_medians = medians;
  return stats;
}

}  // namespace

TrainedModel model_from_json(const ordered_json& doc) {
  try {
    const std::string where = "model";
    if (text(doc, "format", where) != kModelFormat) {
      throw SerializationError("not an lnndx model document");
    }
    const auto& version = field(doc, "format_version", where);
    if (!version.is_number_integer() || version.get<int>() != kModelFormatVersion) {
      throw SerializationError("unsupported format_version " + version.dump());
    }
    const TrainConfig config = config_from_json(field(doc, "config", where));
    const std::string rule_text = text(doc, "rule", where);
    const RuleSpec spec = parse_rule(rule_text);

    std::string rule_name;
    if (const auto& name = field(doc, "rule_name", where); !name.is_null()) {
      if (!name.is_string()) throw SerializationError("rule_name must be a string or null");
      rule_name = name.get<std::string>();
    }

    const CrispnessConfig cfg(config.alpha);
    Expression expr = bind_params(spec, InitStrategy::neutral(), cfg, config.slope);
    const auto& nodes = field(doc, "nodes", where);
    if (!nodes.is_array() || Eigen::Index(nodes.size()) != expr.size()) {
      throw SerializationError("nodes must hold " + std::to_string(expr.size()) +
                               " entries for rule '" + rule_text + "'");
    }
    Eigen::VectorXd params = expr.params();
    for (Eigen::Index i = 0; i < expr.size(); ++i) {
      const Node& node = expr.node(i);
      const auto& entry = nodes[std::size_t(i)];
      const std::string at = "nodes[" + std::to_string(i) + "]";
      if (text(entry, "path", at) != expr.path(i) ||
          text(entry, "kind", at) != to_string(node.kind)) {
        throw SerializationError(at + " does not match the rule structure");
      }
      switch (node.kind) {
        case NodeKind::kPredicate:
          if (text(entry, "feature", at) != feature_info(node.feature).dsl_name) {
            throw SerializationError(at + " names the wrong feature");
          }
          if (number(entry, "slope", at) != node.slope) {
            throw SerializationError(at + ".slope disagrees with config.slope");
          }
          params[node.offset] = number(entry, "theta", at);
          break;
        case NodeKind::kAnd:
        case NodeKind::kOr: {
          params[node.offset] = number(entry, "beta", at);
          const auto& w = field(entry, "weights", at);
          if (!w.is_array() || w.size() != node.children.size()) {
            throw SerializationError(at + ".weights must hold " +
                                     std::to_string(node.children.size()) + " numbers");
          }
          for (std::size_t k = 0; k < w.size(); ++k) {
            if (!w[k].is_number()) throw SerializationError(at + ".weights must be numbers");
            params[node.offset + 1 + Eigen::Index(k)] = w[k].get<double>();
          }
          break;
        }
        case NodeKind::kNot:
          break;
      }
    }
    if (!params.allFinite()) throw SerializationError("parameters must be finite");
    expr.set_params(params);
    if (const auto bad = check_expression(expr, cfg); !bad.empty()) {
      throw SerializationError("parameters violate the crispness constraints at " +
                               bad.front().path + ": " + bad.front().violation.describe());
    }

    std::vector<double> history;
    const auto& h = field(doc, "history", where);
    if (!h.is_array()) throw SerializationError("history must be an array");
    for (const auto& v : h) {
      if (!v.is_number()) throw SerializationError("history must hold numbers");
      history.push_back(v.get<double>());
    }
    if (Eigen::Index(history.size()) != config.epochs) {
      throw SerializationError("history has " + std::to_string(history.size()) +
                               " entries for " + std::to_string(config.epochs) + " epochs");
    }

    return TrainedModel{std::move(expr),
                        config,
                        stats_from_json(field(doc, "normalization", where),
                                        config.impute_median),
                        std::move(history),
                        to_string(spec),
                        std::move(rule_name)};
  } catch (const SerializationError&) {
    throw;
  } catch (const std::exception& e) {
    throw SerializationError(std::string("invalid model: ") + e.what());
  }
}

std::string serialize(const TrainedModel& model,
                      const std::optional<EvalReport>& evaluation) {
  return export_json(model, evaluation).dump(2) + "\n";
}

TrainedModel deserialize(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text.begin(), text.end());
  } catch (const std::exception& e) {
    throw SerializationError(std::string("model is not valid JSON: ") + e.what());
  }
  return model_from_json(doc);
}

void save_model(const std::filesystem::path& path, const TrainedModel& model,
                const std::optional<EvalReport>& evaluation) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SerializationError("cannot write " + path.string());
  out << serialize(model, evaluation);
  if (!out) throw SerializationError("failed writing " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SerializationError("cannot open model " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

std::string export_dot(const TrainedModel& model) {
  const Expression& expr = model.expression;
  const auto nodes = explain(model);
  std::ostringstream out;
  out << "// Rule: " << model.rule << "\n";
  out << "// Leaves:";
  for (const auto& info : kFeatures) out << ' ' << info.letter << '=' << info.description;
  out << "\n";
  out << "// Leaf labels show the learned threshold in raw units.\n";
  out << "// Edge labels are the raw gate weights w_i (not normalized per node).\n";
  out << "digraph lnn {\n";
  out << "  node [fontname=\"Helvetica\"];\n";
  for (Eigen::Index i = 0; i < expr.size(); ++i) {
    const auto& e = nodes[std::size_t(i)];
    out << "  n" << i << " [label=\"";
    switch (e.kind) {
      case NodeKind::kPredicate:
        out << feature_info(e.feature).letter << "\\n" << fixed(e.raw_threshold, 2)
            << "\", shape=box";
        break;
      case NodeKind::kAnd:
        out << "∧\", shape=circle";
        break;
      case NodeKind::kOr:
        out << "∨\", shape=circle";
        break;
      case NodeKind::kNot:
        out << "¬\", shape=circle";
        break;
    }
    out << "];\n";
  }
  for (Eigen::Index i = 0; i < expr.size(); ++i) {
    const Node& node = expr.node(i);
    const auto& e = nodes[std::size_t(i)];
    for (std::size_t c = 0; c < node.children.size(); ++c) {
      out << "  n" << i << " -> n" << node.children[c];
      if (!e.weights.empty()) out << " [label=\"" << fixed(e.weights[c], 2) << "\"]";
      out << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace lnn

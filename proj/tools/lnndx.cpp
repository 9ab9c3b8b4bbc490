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


// lnndx: train, evaluate and explain logical rule models on Pima-format data.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lnn/data.hpp"
#include "lnn/error.hpp"
#include "lnn/metrics.hpp"
#include "lnn/report.hpp"
#include "lnn/rules.hpp"
#include "lnn/training.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitMetric = 3;
constexpr int kExitSerialization = 4;

std::uint64_t default_seed() {
  const char* env = std::getenv("LNNDX_SEED");
  if (!env || !*env) return 42;
  char* end = nullptr;
  const auto v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw lnn::ConfigError("LNNDX_SEED must be a nonnegative integer");
  return v;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lnn::ConfigError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw lnn::ConfigError("cannot write " + path.string());
  out << text;
}

// FNV-1a, enough to tell inputs apart in a manifest.
std::string fingerprint(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ordered_json describe_input(const fs::path& path) {
  const auto bytes = read_text(path);
  return {{"path", path.generic_string()},
          {"bytes", bytes.size()},
          {"fnv1a64", fingerprint(bytes)}};
}

struct RuleChoice {
  lnn::RuleSpec spec;
  std::string name;  // built-in name, or empty
};

// A bare word names a built-in model; anything with an operator is rule text.
RuleChoice resolve_rule(const std::string& rule, const std::string& rule_file) {
  if (!rule_file.empty()) return {lnn::parse_rule(read_text(rule_file)), {}};
  if (rule.empty()) throw lnn::ConfigError("one of --rule or --rule-file is required");
  if (rule.find_first_of("&|!()") != std::string::npos) {
    return {lnn::parse_rule(rule), {}};
  }
  return {lnn::builtin_model(rule), rule};
}

struct Options {
  std::string data;
  std::string rule;
  std::string rule_file;
  std::optional<std::uint64_t> seed;
  int epochs = 500;
  double lr = 0.05;
  double alpha = 0.9;
  double slope = 10.0;
  double test_fraction = 0.2;
  std::optional<double> threshold;
  std::string init = "randomized";
  bool impute_median = false;
  std::string out = "lnndx-out";
  std::string model;
  std::string manifest;
  long long n = 1000;
  double noise = 0.0;
  double generator_theta = 0.3;
};

class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv) {
    doc_["format"] = "lnndx-manifest";
    doc_["format_version"] = 1;
    doc_["command"] = std::move(command);
    doc_["argv"] = std::move(argv);
    doc_["inputs"] = ordered_json::object();
    doc_["outputs"] = ordered_json::array();
    doc_["timing"] = {{"epochs", 0}, {"record_passes", 0}};
  }

  ordered_json& operator[](const char* key) { return doc_[key]; }
  void input(const char* role, const fs::path& path) { doc_["inputs"][role] = describe_input(path); }
  void output(const fs::path& path) { doc_["outputs"].push_back(path.generic_string()); }
  void counters(const lnn::TrainCounters& c) {
    doc_["timing"] = {{"epochs", c.epochs}, {"record_passes", c.record_passes}};
  }

  void write(const fs::path& dir) const {
    const auto path = dir / (doc_["command"].get<std::string>() + ".manifest.json");
    write_text(path, doc_.dump(2) + "\n");
    std::cerr << "manifest: " << path.generic_string() << "\n";
  }

 private:
  ordered_json doc_;
};

lnn::TrainConfig config_from(const Options& o) {
  lnn::TrainConfig c;
  c.learning_rate = o.lr;
  c.epochs = o.epochs;
  c.alpha = o.alpha;
  c.slope = o.slope;
  c.seed = o.seed.value_or(default_seed());
  c.init = lnn::InitStrategy::parse(o.init, c.seed);
  c.decision_threshold = o.threshold.value_or(0.5);
  c.test_fraction = o.test_fraction;
  c.impute_median = o.impute_median;
  c.validate();
  return c;
}

std::vector<lnn::RawRecord> load_data(const std::string& path) {
  std::vector<std::string> warnings;
  auto records = lnn::load_csv(path, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return records;
}

void print_metrics(const char* label, const lnn::EvalReport& r) {
  std::cout << label << " accuracy " << lnn::fixed(r.accuracy, 4) << "  precision "
            << lnn::fixed(r.precision, 4) << (r.precision_degenerate ? " (no positive predictions)" : "")
            << "  recall " << lnn::fixed(r.recall, 4) << "  f1 " << lnn::fixed(r.f1, 4)
            << "  auc " << lnn::fixed(r.auc, 4) << "\n";
}

int cmd_train(const Options& o, const std::vector<std::string>& argv) {
  const auto config = config_from(o);
  const auto rule = resolve_rule(o.rule, o.rule_file);
  if (config.epochs == 0) {
    std::cerr << "warning: --epochs 0 writes the untrained initialization\n";
  }
  const auto records = load_data(o.data);
  const auto parts = lnn::split(records, config.test_fraction, config.seed);
  const auto norm = lnn::normalize(parts.train, parts.test, config.impute_median);
  for (const auto& w : norm.warnings) std::cerr << "warning: " << w << "\n";

  lnn::TrainCounters counters;
  lnn::TrainHooks hooks;
  hooks.counters = &counters;
  auto model = lnn::train(rule.spec, norm.train, config, hooks);
  model.rule_name = rule.name;

  const fs::path dir(o.out);
  fs::create_directories(dir);
  const auto model_path = dir / "model.json";
  lnn::save_model(model_path, model);

  const double loss = model.history.empty()
                          ? lnn::bce(norm.train.labels, lnn::predict(model, norm.train))
                          : model.history.back();
  std::cout << "rule " << model.rule << "\n";
  std::cout << "final loss " << lnn::fixed(loss, 6) << "\n";
  try {
    print_metrics("train", lnn::evaluate(model, norm.train, config.decision_threshold));
  } catch (const lnn::MetricError& e) {
    std::cout << "train metrics unavailable: " << e.what() << "\n";
  }
  std::cout << "model " << model_path.generic_string() << "\n";

  Manifest m("train", argv);
  m["config"] = lnn::to_json(config);
  m["rule"] = model.rule;
  m["rule_name"] = rule.name.empty() ? ordered_json(nullptr) : ordered_json(rule.name);
  m["seed"] = config.seed;
  m.input("data", o.data);
  m["split"] = {{"train", parts.train.size()}, {"test", parts.test.size()}};
  m.output(model_path);
  m.counters(counters);
  m.write(dir);
  return kExitOk;
}

int cmd_eval(const Options& o, const std::vector<std::string>& argv) {
  const auto model = lnn::load_model(o.model);
  std::string data = o.data;
  if (!o.manifest.empty()) {
    const auto doc = ordered_json::parse(read_text(o.manifest));
    if (data.empty()) data = doc.at("inputs").at("data").at("path").get<std::string>();
  }
  if (data.empty()) throw lnn::ConfigError("eval needs --data or --manifest");
  const double threshold = o.threshold.value_or(model.config.decision_threshold);
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw lnn::ConfigError("threshold must lie strictly between 0 and 1");
  }

  const auto records = load_data(data);
  const auto parts = lnn::split(records, model.config.test_fraction, model.config.seed);
  const auto test = lnn::apply_stats(parts.test, model.stats, lnn::Provenance::kTest);
  const auto report = lnn::evaluate(model, test, threshold);

  const fs::path dir(o.out);
  fs::create_directories(dir);
  const auto report_path = dir / "eval.json";
  ordered_json doc;
  doc["format"] = "lnndx-eval";
  doc["format_version"] = 1;
  doc["rule"] = model.rule;
  doc["threshold"] = threshold;
  doc["split"] = {{"seed", model.config.seed},
                  {"test_fraction", model.config.test_fraction},
                  {"test", parts.test.size()}};
  doc["evaluation"] = lnn::to_json(report);
  write_text(report_path, doc.dump(2) + "\n");

  print_metrics("test", report);
  std::cout << "report " << report_path.generic_string() << "\n";

  Manifest m("eval", argv);
  m["rule"] = model.rule;
  m["seed"] = model.config.seed;
  m["threshold"] = threshold;
  m.input("model", o.model);
  m.input("data", data);
  m.output(report_path);
  m.counters({0, test.size()});
  m.write(dir);
  return kExitOk;
}

int cmd_explain(const Options& o, const std::vector<std::string>& argv) {
  const auto model = lnn::load_model(o.model);
  std::optional<lnn::EvalReport> evaluation;
  if (!o.data.empty()) {
    const auto parts = lnn::split(load_data(o.data), model.config.test_fraction,
                                  model.config.seed);
    const auto test = lnn::apply_stats(parts.test, model.stats, lnn::Provenance::kTest);
    evaluation = lnn::evaluate(model, test,
                               o.threshold.value_or(model.config.decision_threshold));
  }
  const fs::path dir(o.out);
  fs::create_directories(dir);
  const auto json_path = dir / "explain.json";
  const auto dot_path = dir / "model.dot";
  write_text(json_path, lnn::serialize(model, evaluation));
  write_text(dot_path, lnn::export_dot(model));

  for (const auto& n : lnn::explain(model)) {
    std::cout << n.path << "  " << lnn::to_string(n.kind);
    if (n.kind == lnn::NodeKind::kPredicate) {
      std::cout << " " << lnn::feature_info(n.feature).dsl_name << " > "
                << lnn::fixed(n.raw_threshold, 2) << " (theta " << lnn::fixed(n.theta_reported, 4)
                << ")";
    } else if (n.kind != lnn::NodeKind::kNot) {
      std::cout << " beta " << lnn::fixed(n.beta, 4) << " w";
      for (double w : n.weights) std::cout << " " << lnn::fixed(w, 4);
    }
    std::cout << "\n";
  }
  std::cout << "json " << json_path.generic_string() << "\ndot " << dot_path.generic_string()
            << "\n";

  Manifest m("explain", argv);
  m["rule"] = model.rule;
  m.input("model", o.model);
  if (!o.data.empty()) m.input("data", o.data);
  m.output(json_path);
  m.output(dot_path);
  m.write(dir);
  return kExitOk;
}

int cmd_synth(const Options& o, const std::vector<std::string>& argv) {
  const auto rule = resolve_rule(o.rule, o.rule_file);
  const std::uint64_t seed = o.seed.value_or(default_seed());
  const lnn::CrispnessConfig cfg(o.alpha);
  const auto generator = lnn::bind_generator(rule.spec, cfg, o.generator_theta, o.slope);
  const auto data = lnn::synthesize(o.n, seed, generator, o.noise);

  const fs::path dir(o.out);
  fs::create_directories(dir);
  const auto csv_path = dir / "synth.csv";
  lnn::write_csv(csv_path, lnn::to_records(data));
  std::cout << "wrote " << data.size() << " records (" << data.positives()
            << " positive) to " << csv_path.generic_string() << "\n";

  Manifest m("synth", argv);
  m["rule"] = lnn::to_string(rule.spec);
  m["seed"] = seed;
  m["generator"] = {{"alpha", o.alpha},
                    {"slope", o.slope},
                    {"theta", o.generator_theta},
                    {"n", o.n},
                    {"noise", o.noise}};
  m.output(csv_path);
  m.write(dir);
  return kExitOk;
}

int run(const std::vector<std::string>& argv, int depth = 0);

int cmd_rerun(const Options& o, int depth) {
  if (depth > 0) throw lnn::ConfigError("a rerun manifest cannot itself be rerun");
  const auto doc = ordered_json::parse(read_text(o.manifest));
  if (doc.value("format", "") != "lnndx-manifest") {
    throw lnn::SerializationError(o.manifest + " is not an lnndx manifest");
  }
  return run(doc.at("argv").get<std::vector<std::string>>(), depth + 1);
}

int run(const std::vector<std::string>& argv, int depth) {
  CLI::App app{"Logical rule models for diabetes diagnosis", "lnndx"};
  app.require_subcommand(1);
  Options o;

  auto add_rule = [&](CLI::App* sub) {
    auto* r = sub->add_option("--rule", o.rule,
                              "built-in model (" + [] {
                                std::string names;
                                for (const auto& n : lnn::builtin_names()) {
                                  names += (names.empty() ? "" : ", ") + n;
                                }
                                return names;
                              }() + ") or rule text such as \"gluc & bmi\"");
    auto* f = sub->add_option("--rule-file", o.rule_file, "file holding rule text")
                  ->check(CLI::ExistingFile);
    r->excludes(f);
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "seed (default: $LNNDX_SEED or 42)");
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
  };

  auto* train = app.add_subcommand("train", "train a rule model and write model.json");
  train->add_option("--data", o.data, "Pima-format CSV")->required()->check(CLI::ExistingFile);
  add_rule(train);
  add_common(train);
  train->add_option("--epochs", o.epochs, "gradient steps")->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  train->add_option("--lr", o.lr, "learning rate")->capture_default_str();
  train->add_option("--alpha", o.alpha, "crispness level in [0.5, 1]")->capture_default_str();
  train->add_option("--slope", o.slope, "predicate sigmoid steepness")->capture_default_str();
  train->add_option("--test-fraction", o.test_fraction, "held-out share")->capture_default_str();
  train->add_option("--threshold", o.threshold, "decision threshold (default 0.5)");
  train->add_option("--init", o.init, "neutral | randomized | randomized:<seed>")
      ->capture_default_str();
  train->add_flag("--impute-median", o.impute_median,
                  "replace impossible zeros with training medians");

  auto* eval = app.add_subcommand("eval", "evaluate a model on its held-out split");
  eval->add_option("--model", o.model, "model.json")->required()->check(CLI::ExistingFile);
  eval->add_option("--data", o.data, "Pima-format CSV")->check(CLI::ExistingFile);
  eval->add_option("--manifest", o.manifest, "train manifest supplying the data path")
      ->check(CLI::ExistingFile);
  eval->add_option("--threshold", o.threshold, "decision threshold (default: the model's)");
  eval->add_option("--out", o.out, "output directory")->capture_default_str();

  auto* explain = app.add_subcommand("explain", "write explain.json and model.dot");
  explain->add_option("--model", o.model, "model.json")->required()->check(CLI::ExistingFile);
  explain->add_option("--data", o.data, "attach held-out metrics from this CSV")
      ->check(CLI::ExistingFile);
  explain->add_option("--threshold", o.threshold, "decision threshold (default: the model's)");
  explain->add_option("--out", o.out, "output directory")->capture_default_str();

  auto* synth = app.add_subcommand("synth", "write a synthetic CSV labeled by a rule");
  add_rule(synth);
  add_common(synth);
  synth->add_option("--n", o.n, "records")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--noise", o.noise, "label flip probability in [0, 0.5)")
      ->capture_default_str();
  synth->add_option("--alpha", o.alpha, "crispness level of the generator")->capture_default_str();
  synth->add_option("--slope", o.slope, "predicate steepness of the generator")
      ->capture_default_str();
  synth->add_option("--theta", o.generator_theta, "generator threshold on every feature")
      ->capture_default_str();

  auto* rerun = app.add_subcommand("rerun", "repeat the run recorded in a manifest");
  rerun->add_option("--manifest", o.manifest, "*.manifest.json")->required()
      ->check(CLI::ExistingFile);

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const auto started = std::chrono::steady_clock::now();
  int status = kExitOk;
  if (*train) status = cmd_train(o, argv);
  else if (*eval) status = cmd_eval(o, argv);
  else if (*explain) status = cmd_explain(o, argv);
  else if (*synth) status = cmd_synth(o, argv);
  else if (*rerun) status = cmd_rerun(o, depth);
  const std::chrono::duration<double> took = std::chrono::steady_clock::now() - started;
  if (depth == 0) std::cerr << "elapsed " << lnn::fixed(took.count(), 3) << " s\n";
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args);
  } catch (const lnn::MetricError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMetric;
  } catch (const lnn::SerializationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSerialization;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSerialization;
  } catch (const lnn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

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


#include <doctest.h>

#include "lnn/error.hpp"
#include "lnn/report.hpp"
#include "oracles.hpp"

using nlohmann::ordered_json;

namespace {

lnn::TrainedModel trained(const char* rule, int epochs = 30, std::uint64_t seed = 1) {
  const auto gen = lnn::bind_generator(lnn::builtin_model(rule), lnn::CrispnessConfig(0.9));
  auto data = lnn::synthesize(300, seed, gen, 0.05);
  // Give the features raw-unit statistics so de-normalization is not trivial.
  for (std::size_t f = 0; f < lnn::kFeatures.size(); ++f) {
    data.stats.min[f] = 0.01 * double(f) * lnn::kFeatures[f].reference_max;
    data.stats.max[f] = lnn::kFeatures[f].reference_max;
  }
  lnn::TrainConfig c;
  c.epochs = epochs;
  c.seed = seed;
  c.init = lnn::InitStrategy::randomized(seed);
  auto m = lnn::train(lnn::builtin_model(rule), data, c);
  m.rule_name = rule;
  return m;
}

std::size_t count_params(const ordered_json& doc) {
  std::size_t n = 0;
  for (const auto& node : doc["nodes"]) {
    if (node.contains("theta")) ++n;
    if (node.contains("beta")) ++n;
    if (node.contains("weights")) n += node["weights"].size();
  }
  return n;
}

}  // namespace

TEST_CASE("serialize, deserialize, serialize is byte-identical") {
  for (const auto& name : lnn::builtin_names()) {
    const auto m = trained(name.c_str());
    const auto first = lnn::serialize(m);
    const auto back = lnn::deserialize(first);
    CHECK(lnn::serialize(back) == first);
    CHECK(back.expression.params() == m.expression.params());
    CHECK(back.history == m.history);
    CHECK(back.stats == m.stats);
    CHECK(back.config == m.config);
    CHECK(back.rule_name == name);
  }
}

TEST_CASE("every parameter appears exactly once") {
  for (const auto& name : lnn::builtin_names()) {
    const auto m = trained(name.c_str(), 5);
    CHECK(count_params(lnn::export_json(m)) == std::size_t(m.expression.param_count()));
  }
  const auto doc = lnn::export_json(trained("glucose-bmi", 5));
  int thetas = 0, weights = 0, betas = 0;
  for (const auto& node : doc["nodes"]) {
    thetas += node.contains("theta");
    betas += node.contains("beta");
    if (node.contains("weights")) weights += int(node["weights"].size());
  }
  CHECK(thetas == 2);
  CHECK(weights == 2);
  CHECK(betas == 1);
}

TEST_CASE("reported thresholds de-normalize exactly") {
  const auto m = trained("balanced");
  for (const auto& node : lnn::explain(m)) {
    if (node.kind != lnn::NodeKind::kPredicate) continue;
    const auto f = std::size_t(node.feature);
    const double span = m.stats.max[f] - m.stats.min[f];
    CHECK(std::abs((node.raw_threshold - m.stats.min[f]) / span - node.theta_reported) < 1e-9);
    CHECK(node.theta_reported >= 0.0);
    CHECK(node.theta_reported <= 1.0);
  }
}

TEST_CASE("evaluation is attached but ignored on load") {
  const auto m = trained("glucose-bmi", 5);
  lnn::EvalReport r;
  r.accuracy = 0.75;
  r.roc = {{std::numeric_limits<double>::infinity(), 0, 0}, {0.5, 1, 1}};
  const auto doc = lnn::export_json(m, r);
  CHECK(doc["evaluation"]["accuracy"] == 0.75);
  CHECK(doc["evaluation"]["roc"][0]["threshold"].is_null());
  CHECK(lnn::serialize(lnn::model_from_json(doc)) == lnn::serialize(m));
}

TEST_CASE("corrupt documents are rejected") {
  const auto good = lnn::export_json(trained("comprehensive", 5));
  auto broken = [&](auto mutate) {
    ordered_json doc = good;
    mutate(doc);
    return doc;
  };
  const std::vector<ordered_json> bad{
      broken([](auto& d) { d["format"] = "other"; }),
      broken([](auto& d) { d["format_version"] = 2; }),
      broken([](auto& d) { d.erase("nodes"); }),
      broken([](auto& d) { d["rule"] = "gluc & & bmi"; }),
      broken([](auto& d) { d["rule"] = "gluc & bmi"; }),
      broken([](auto& d) { d["nodes"][1]["beta"] = "x"; }),
      broken([](auto& d) { d["nodes"][1]["weights"].push_back(1.0); }),
      broken([](auto& d) { d["nodes"][1]["beta"] = -100.0; }),
      broken([](auto& d) { d["nodes"][2]["feature"] = "age"; }),
      broken([](auto& d) { d["history"].push_back(0.1); }),
      broken([](auto& d) { d["config"]["alpha"] = 0.2; }),
      broken([](auto& d) { d["normalization"].erase(0); }),
      broken([](auto& d) { d["normalization"][0]["min"] = 1e9; }),
      ordered_json::array(),
  };
  for (const auto& doc : bad) {
    CHECK_THROWS_AS(lnn::model_from_json(doc), lnn::SerializationError);
  }
  CHECK_THROWS_AS(lnn::deserialize("{not json"), lnn::SerializationError);
  CHECK_THROWS_AS(lnn::load_model("/nonexistent/model.json"), lnn::SerializationError);
}

TEST_CASE("DOT output for glucose-bmi") {
  const auto m = trained("glucose-bmi");
  const auto dot = lnn::export_dot(m);
  const auto g = oracle::DotChecker::check(dot);
  REQUIRE_MESSAGE(g.ok, g.error);
  CHECK(g.directed);
  REQUIRE(g.nodes.size() == 3);
  CHECK(g.edges.size() == 2);
  CHECK(g.node_attrs.at(g.nodes[0]).at("label") == "∧");
  const auto nodes = lnn::explain(m);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    CHECK(g.edges[i].attrs.at("label") == lnn::fixed(nodes[0].weights[i], 2));
  }
  CHECK(g.node_attrs.at(g.nodes[1]).at("label") == "G\\n" + lnn::fixed(nodes[1].raw_threshold, 2));
  CHECK(g.node_attrs.at(g.nodes[2]).at("label") == "B\\n" + lnn::fixed(nodes[2].raw_threshold, 2));
}

TEST_CASE("DOT output for multi-pathway") {
  const auto g = oracle::DotChecker::check(lnn::export_dot(trained("multi-pathway")));
  REQUIRE_MESSAGE(g.ok, g.error);
  const auto label = [&](const std::string& n) { return g.node_attrs.at(n).at("label"); };
  CHECK(label(g.nodes[0]) == "∨");
  std::vector<std::string> root_children;
  for (const auto& e : g.edges) {
    if (e.from == g.nodes[0]) root_children.push_back(e.to);
  }
  REQUIRE(root_children.size() == 2);
  std::vector<std::size_t> fan;
  for (const auto& c : root_children) {
    CHECK(label(c) == "∧");
    std::size_t leaves = 0;
    for (const auto& e : g.edges) leaves += e.from == c;
    fan.push_back(leaves);
  }
  CHECK(fan == std::vector<std::size_t>{2, 6});
  CHECK(g.nodes.size() == 11);
  CHECK(g.edges.size() == 10);
}

TEST_CASE("DOT topology depends only on the rule") {
  for (const auto& name : lnn::builtin_names()) {
    const auto a = oracle::DotChecker::check(lnn::export_dot(trained(name.c_str(), 0, 1)));
    const auto b = oracle::DotChecker::check(lnn::export_dot(trained(name.c_str(), 20, 2)));
    REQUIRE(a.ok);
    REQUIRE(b.ok);
    CHECK(a.nodes == b.nodes);
    CHECK(a.edges.size() == b.edges.size());
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
      CHECK(a.edges[i].from == b.edges[i].from);
      CHECK(a.edges[i].to == b.edges[i].to);
    }
  }
}

TEST_CASE("negation nodes draw as a plain edge") {
  auto m = trained("glucose-bmi", 0);
  m.expression = lnn::make_not(lnn::make_predicate(0, 0.5));
  m.rule = "!preg";
  const auto g = oracle::DotChecker::check(lnn::export_dot(m));
  REQUIRE(g.ok);
  CHECK(g.node_attrs.at(g.nodes[0]).at("label") == "¬");
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0].attrs.empty());
}

TEST_CASE("the DOT checker rejects malformed input") {
  CHECK(!oracle::DotChecker::check("digraph { a -> }").ok);
  CHECK(!oracle::DotChecker::check("digraph { a [label=\"x] }").ok);
  CHECK(!oracle::DotChecker::check("graph { a -> b }").ok);
  CHECK(!oracle::DotChecker::check("digraph { a }  extra").ok);
  CHECK(oracle::DotChecker::check("/* c */ digraph g { a -> b -> c [w=1];\n# x\n}").ok);
}

TEST_CASE("fixed-point formatting never shows negative zero") {
  CHECK(lnn::fixed(-0.0, 2) == "0.00");
  CHECK(lnn::fixed(-0.001, 2) == "0.00");
  CHECK(lnn::fixed(1.005, 1) == "1.0");
  CHECK(lnn::fixed(-1.25, 1) == "-1.2");
}

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

#include "lnn/constraints.hpp"
#include "lnn/error.hpp"
#include "lnn/rules.hpp"
#include "lnn/training.hpp"
#include "oracles.hpp"

using lnn::RuleKind;
using lnn::RuleSpec;

namespace {

Eigen::Index idx(const char* name) { return *lnn::feature_by_name(name); }

RuleSpec leaves(RuleKind kind, std::initializer_list<const char*> names) {
  std::vector<RuleSpec> kids;
  for (const char* n : names) kids.push_back(lnn::rule_feature(idx(n)));
  return kind == RuleKind::kAnd ? lnn::rule_and(std::move(kids)) : lnn::rule_or(std::move(kids));
}

// Leaf counts of each disjunct (a bare conjunction counts as one).
std::vector<std::size_t> disjunct_shape(const RuleSpec& r) {
  if (r.kind != RuleKind::kOr) return {lnn::leaf_count(r)};
  std::vector<std::size_t> out;
  for (const auto& c : r.children) out.push_back(lnn::leaf_count(c));
  return out;
}

}  // namespace

TEST_CASE("parser examples") {
  CHECK(lnn::parse_rule("gluc & bmi") == leaves(RuleKind::kAnd, {"gluc", "bmi"}));
  CHECK(lnn::parse_rule("(dpf & age) | (gluc & insulin & bmi & skin & bp & preg)") ==
        lnn::rule_or({leaves(RuleKind::kAnd, {"dpf", "age"}),
                      leaves(RuleKind::kAnd, {"gluc", "insulin", "bmi", "skin", "bp", "preg"})}));
  CHECK(lnn::parse_rule("!(gluc)") == lnn::rule_not(lnn::rule_feature(idx("gluc"))));
}

TEST_CASE("precedence is not, then and, then or") {
  const auto r = lnn::parse_rule("!gluc & bmi | age");
  REQUIRE(r.kind == RuleKind::kOr);
  REQUIRE(r.children[0].kind == RuleKind::kAnd);
  CHECK(r.children[0].children[0].kind == RuleKind::kNot);
  CHECK(r.children[1] == lnn::rule_feature(idx("age")));
}

TEST_CASE("unparenthesized chains flatten, parentheses group") {
  CHECK(lnn::parse_rule("gluc & bmi & age").children.size() == 3);
  const auto nested = lnn::parse_rule("(gluc & bmi) & age");
  REQUIRE(nested.children.size() == 2);
  CHECK(nested.children[0].kind == RuleKind::kAnd);
}

TEST_CASE("whitespace and case do not matter") {
  CHECK(lnn::parse_rule("  GLUC\n&\tBmI ") == lnn::parse_rule("gluc & bmi"));
}

TEST_CASE("parse errors carry a position") {
  auto position = [](const char* text) {
    try {
      lnn::parse_rule(text);
    } catch (const lnn::ParseError& e) {
      return std::make_pair(e.line(), e.column());
    }
    return std::make_pair(std::size_t(0), std::size_t(0));
  };
  CHECK(position("gluc & sugar") == std::make_pair(std::size_t(1), std::size_t(8)));
  CHECK(position("gluc &\n  $") == std::make_pair(std::size_t(2), std::size_t(3)));
  CHECK(position("(gluc & bmi") == std::make_pair(std::size_t(1), std::size_t(12)));
  CHECK(position("gluc bmi") == std::make_pair(std::size_t(1), std::size_t(6)));
  CHECK(position("") == std::make_pair(std::size_t(1), std::size_t(1)));
  CHECK(position("gluc &") == std::make_pair(std::size_t(1), std::size_t(7)));
  try {
    lnn::parse_rule("gluc & sugar");
  } catch (const lnn::ParseError& e) {
    CHECK(std::string(e.what()).find("insulin") != std::string::npos);
  }
}

TEST_CASE("printing then parsing is the identity on generated rules") {
  oracle::RuleGenerator gen(2024);
  for (int i = 0; i < 500; ++i) {
    const auto s = gen.rule();
    const auto parsed = lnn::parse_rule(s.text);
    CHECK_MESSAGE(parsed == s.tree, s.text);
    const auto printed = lnn::to_string(parsed);
    CHECK_MESSAGE(lnn::parse_rule(printed) == parsed, printed);
    CHECK(lnn::to_string(lnn::parse_rule(printed)) == printed);
  }
}

TEST_CASE("built-in models have the published shapes") {
  CHECK(disjunct_shape(lnn::builtin_model("glucose-bmi")) == std::vector<std::size_t>{2});
  CHECK(disjunct_shape(lnn::builtin_model("family-insulin")) == std::vector<std::size_t>{3});
  CHECK(disjunct_shape(lnn::builtin_model("balanced")) == std::vector<std::size_t>{2, 3, 3});
  CHECK(disjunct_shape(lnn::builtin_model("multi-pathway")) == std::vector<std::size_t>{2, 6});
  CHECK(disjunct_shape(lnn::builtin_model("comprehensive")) == std::vector<std::size_t>{4, 2});

  CHECK(lnn::builtin_model("glucose-bmi") == leaves(RuleKind::kAnd, {"gluc", "bmi"}));
  CHECK(lnn::builtin_model("balanced") ==
        lnn::rule_or({leaves(RuleKind::kAnd, {"dpf", "age"}),
                      leaves(RuleKind::kAnd, {"preg", "gluc", "bp"}),
                      leaves(RuleKind::kAnd, {"skin", "insulin", "bmi"})}));
  CHECK(lnn::builtin_model("comprehensive") ==
        lnn::rule_or({leaves(RuleKind::kAnd, {"gluc", "insulin", "bmi", "preg"}),
                      leaves(RuleKind::kAnd, {"dpf", "insulin"})}));
  CHECK(lnn::builtin_names().size() == 5);
}

TEST_CASE("unknown built-in names list the valid ones") {
  try {
    lnn::builtin_model("nope");
    FAIL("expected an error");
  } catch (const lnn::ConfigError& e) {
    for (const auto& n : lnn::builtin_names()) {
      CHECK(std::string(e.what()).find(n) != std::string::npos);
    }
  }
}

TEST_CASE("neutral initialization") {
  const auto e = lnn::bind_params(lnn::builtin_model("glucose-bmi"),
                                  lnn::InitStrategy::neutral(), lnn::CrispnessConfig(0.9));
  CHECK(e.predicate(1).theta == 0.5);
  CHECK(e.predicate(2).theta == 0.5);
  CHECK(lnn::is_feasible(e.gate(0), lnn::CrispnessConfig(0.9)));
}

TEST_CASE("randomized initialization is seeded and in range") {
  const auto spec = lnn::builtin_model("multi-pathway");
  const lnn::CrispnessConfig cfg(0.9);
  const auto a = lnn::bind_params(spec, lnn::InitStrategy::randomized(7), cfg);
  const auto b = lnn::bind_params(spec, lnn::InitStrategy::randomized(7), cfg);
  const auto c = lnn::bind_params(spec, lnn::InitStrategy::randomized(8), cfg);
  CHECK(a.params() == b.params());
  CHECK(a.params() != c.params());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a.node(i).kind == lnn::NodeKind::kPredicate) {
      CHECK(a.predicate(i).theta >= 0.2);
      CHECK(a.predicate(i).theta < 0.8);
    }
  }
  // beta sits at the top of its feasible interval
  const auto g = a.gate(0);
  CHECK(g.beta == lnn::feasible_beta(g.weights, cfg).upper);
}

TEST_CASE("every initialization is feasible") {
  oracle::RuleGenerator gen(99);
  for (double alpha : {0.8, 0.9, 0.95, 1.0}) {
    const lnn::CrispnessConfig cfg(alpha);
    for (int i = 0; i < 200; ++i) {
      const auto spec = gen.rule().tree;
      for (const auto& init : {lnn::InitStrategy::neutral(),
                               lnn::InitStrategy::randomized(std::uint64_t(i))}) {
        try {
          const auto e = lnn::bind_params(spec, init, cfg);
          CHECK(lnn::check_expression(e, cfg).empty());
          CHECK(lnn::rule_of(e) == spec);
        } catch (const lnn::ConfigError&) {
          // arity beyond what alpha supports
        }
      }
    }
  }
}

TEST_CASE("binding rejects arities the level cannot support") {
  CHECK_THROWS_AS(lnn::bind_params(lnn::builtin_model("multi-pathway"),
                                   lnn::InitStrategy::neutral(), lnn::CrispnessConfig(0.7)),
                  lnn::ConfigError);
  CHECK_NOTHROW(lnn::bind_params(lnn::builtin_model("glucose-bmi"),
                                 lnn::InitStrategy::neutral(), lnn::CrispnessConfig(0.7)));
}

TEST_CASE("init strategy text") {
  CHECK(lnn::InitStrategy::parse("neutral", 1) == lnn::InitStrategy::neutral());
  CHECK(lnn::InitStrategy::parse("randomized", 5) == lnn::InitStrategy::randomized(5));
  CHECK(lnn::InitStrategy::parse("randomized:9", 5) == lnn::InitStrategy::randomized(9));
  CHECK(lnn::InitStrategy::randomized(9).to_string() == "randomized:9");
  CHECK_THROWS_AS(lnn::InitStrategy::parse("randomized:x", 5), lnn::ConfigError);
  CHECK_THROWS_AS(lnn::InitStrategy::parse("zeros", 5), lnn::ConfigError);
}

TEST_CASE("generator parameters") {
  const lnn::CrispnessConfig cfg(0.9);
  const auto e = lnn::bind_generator(lnn::builtin_model("balanced"), cfg, 0.3);
  CHECK(lnn::check_expression(e, cfg).empty());
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    if (e.node(i).kind == lnn::NodeKind::kPredicate) CHECK(e.predicate(i).theta == 0.3);
  }
}

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

// Rule language:
//
//   rule    := or ;
//   or      := and ("|" and)* ;
//   and     := unary ("&" unary)* ;
//   unary   := "!" unary | "(" or ")" | feature ;
//   feature := "preg" | "gluc" | "bp" | "skin" | "insulin" | "bmi" | "dpf"
//            | "age" ;
//
// Whitespace is insignificant and feature names are case-insensitive. Every
// feature mention is a learned-threshold predicate. An unparenthesized chain
// of one operator becomes a single n-ary node; parentheses always group.

#ifndef LNN_RULES_HPP
#define LNN_RULES_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lnn/expression.hpp"

namespace lnn {

enum class RuleKind { kFeature, kAnd, kOr, kNot };

/// Rule syntax tree with unbound parameters.
struct RuleSpec {
  RuleKind kind = RuleKind::kFeature;
  Eigen::Index feature = -1;
  std::vector<RuleSpec> children;

  friend bool operator==(const RuleSpec& a, const RuleSpec& b);
};

RuleSpec rule_feature(Eigen::Index feature);
RuleSpec rule_and(std::vector<RuleSpec> children);
RuleSpec rule_or(std::vector<RuleSpec> children);
RuleSpec rule_not(RuleSpec child);

/// Throws ParseError with a 1-based line and column.
RuleSpec parse_rule(std::string_view text);

/// Canonical text; parse_rule(to_string(r)) == r.
std::string to_string(const RuleSpec& rule);

std::size_t leaf_count(const RuleSpec& rule);

/// Names accepted by builtin_model, in a fixed order.
const std::vector<std::string>& builtin_names();

/// One of the five diabetes rule models. Throws ConfigError listing the
/// valid names otherwise.
RuleSpec builtin_model(std::string_view name);

/// Rule text of a built-in model.
std::string builtin_text(std::string_view name);

class InitStrategy {
 public:
  enum class Kind { kNeutral, kRandomized };

  /// theta = 0.5, w = 1, beta = 1, then projected.
  static InitStrategy neutral() { return InitStrategy(Kind::kNeutral, 0); }
  /// theta ~ U(0.2, 0.8), w ~ U(0.5, 1.5); weights are repaired, then beta
  /// takes the upper end of its feasible interval.
  static InitStrategy randomized(std::uint64_t seed) {
    return InitStrategy(Kind::kRandomized, seed);
  }
  /// "neutral", "randomized" (uses `default_seed`) or "randomized:<seed>".
  static InitStrategy parse(std::string_view text, std::uint64_t default_seed);

  Kind kind() const noexcept { return kind_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::string to_string() const;

  friend bool operator==(const InitStrategy&, const InitStrategy&) = default;

 private:
  InitStrategy(Kind kind, std::uint64_t seed) : kind_(kind), seed_(seed) {}

  Kind kind_;
  std::uint64_t seed_;
};

/// Builds an Expression for `rule` with initial parameters. Every gate is
/// feasible under `cfg`; throws ConfigError if alpha admits no conjunction
/// of some gate's arity.
Expression bind_params(const RuleSpec& rule, const InitStrategy& init,
                       const CrispnessConfig& cfg, double slope = 10.0);

/// Reference parameters for generating synthetic labels: every theta equals
/// `theta`, every gate has the smallest feasible weights and beta at the
/// top of its interval.
Expression bind_generator(const RuleSpec& rule, const CrispnessConfig& cfg,
                          double theta = 0.3, double slope = 10.0);

/// Structure of a bound expression, read back as a rule.
RuleSpec rule_of(const Expression& expr);

}  // namespace lnn

#endif  // LNN_RULES_HPP

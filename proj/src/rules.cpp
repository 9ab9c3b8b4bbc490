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

#include "lnn/rules.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "lnn/constraints.hpp"
#include "lnn/error.hpp"
#include "lnn/random.hpp"

namespace lnn {

bool operator==(const RuleSpec& a, const RuleSpec& b) {
  return a.kind == b.kind && a.feature == b.feature && a.children == b.children;
}

RuleSpec rule_feature(Eigen::Index feature) {
  if (feature < 0 || feature >= kFeatureCount) {
    throw StructuralError("feature index " + std::to_string(feature) +
                          " is outside the schema");
  }
  return {RuleKind::kFeature, feature, {}};
}

RuleSpec rule_and(std::vector<RuleSpec> children) {
  if (children.size() < 2) throw StructuralError("and needs 2+ operands");
  return {RuleKind::kAnd, -1, std::move(children)};
}

RuleSpec rule_or(std::vector<RuleSpec> children) {
  if (children.size() < 2) throw StructuralError("or needs 2+ operands");
  return {RuleKind::kOr, -1, std::move(children)};
}

RuleSpec rule_not(RuleSpec child) {
  return {RuleKind::kNot, -1, {std::move(child)}};
}

namespace {

enum class Token { kFeature, kAnd, kOr, kNot, kOpen, kClose, kEnd };

struct Lexeme {
  Token token;
  std::string_view text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Lexeme next() {
    skip_space();
    const std::size_t line = line_;
    const std::size_t column = column_;
    if (pos_ == text_.size()) return {Token::kEnd, {}, line, column};

    const char c = text_[pos_];
    auto single = [&](Token t) {
      advance();
      return Lexeme{t, text_.substr(pos_ - 1, 1), line, column};
    };
    switch (c) {
      case '&':
        return single(Token::kAnd);
      case '|':
        return single(Token::kOr);
      case '!':
        return single(Token::kNot);
      case '(':
        return single(Token::kOpen);
      case ')':
        return single(Token::kClose);
      default:
        break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        advance();
      }
      return {Token::kFeature, text_.substr(start, pos_ - start), line, column};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line,
                     column);
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      advance();
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { look_ = lexer_.next(); }

  RuleSpec parse() {
    RuleSpec rule = parse_or();
    if (look_.token != Token::kEnd) fail("unexpected '" + std::string(look_.text) + "'");
    return rule;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, look_.line, look_.column);
  }

  void consume() { look_ = lexer_.next(); }

  RuleSpec parse_or() {
    std::vector<RuleSpec> operands{parse_and()};
    while (look_.token == Token::kOr) {
      consume();
      operands.push_back(parse_and());
    }
    if (operands.size() == 1) return std::move(operands.front());
    return {RuleKind::kOr, -1, std::move(operands)};
  }

  RuleSpec parse_and() {
    std::vector<RuleSpec> operands{parse_unary()};
    while (look_.token == Token::kAnd) {
      consume();
      operands.push_back(parse_unary());
    }
    if (operands.size() == 1) return std::move(operands.front());
    return {RuleKind::kAnd, -1, std::move(operands)};
  }

  RuleSpec parse_unary() {
    switch (look_.token) {
      case Token::kNot:
        consume();
        return rule_not(parse_unary());
      case Token::kOpen: {
        consume();
        RuleSpec inner = parse_or();
        if (look_.token != Token::kClose) fail("expected ')'");
        consume();
        return inner;
      }
      case Token::kFeature: {
        const auto index = feature_by_name(look_.text);
        if (!index) {
          std::string known;
          for (const auto& f : kFeatures) {
            known += (known.empty() ? "" : ", ") + std::string(f.dsl_name);
          }
          fail("unknown feature '" + std::string(look_.text) +
               "' (expected one of " + known + ")");
        }
        consume();
        return {RuleKind::kFeature, *index, {}};
      }
      case Token::kEnd:
        fail("unexpected end of rule");
      default:
        fail("unexpected '" + std::string(look_.text) + "'");
    }
  }

  Lexer lexer_;
  Lexeme look_;
};

void print(const RuleSpec& rule, std::string& out) {
  auto operand = [&out](const RuleSpec& child) {
    const bool group = child.kind == RuleKind::kAnd || child.kind == RuleKind::kOr;
    if (group) out += '(';
    print(child, out);
    if (group) out += ')';
  };
  switch (rule.kind) {
    case RuleKind::kFeature:
      out += feature_info(rule.feature).dsl_name;
      break;
    case RuleKind::kNot:
      out += '!';
      operand(rule.children.front());
      break;
    case RuleKind::kAnd:
    case RuleKind::kOr: {
      const char* sep = rule.kind == RuleKind::kAnd ? " & " : " | ";
      for (std::size_t i = 0; i < rule.children.size(); ++i) {
        if (i) out += sep;
        operand(rule.children[i]);
      }
      break;
    }
  }
}

struct Builtin {
  std::string_view name;
  std::string_view text;
};

constexpr std::array<Builtin, 5> kBuiltins{{
    {"glucose-bmi", "gluc & bmi"},
    {"family-insulin", "dpf & insulin & age"},
    {"balanced", "(dpf & age) | (preg & gluc & bp) | (skin & insulin & bmi)"},
    {"multi-pathway", "(dpf & age) | (gluc & insulin & bmi & skin & bp & preg)"},
    {"comprehensive", "(gluc & insulin & bmi & preg) | (dpf & insulin)"},
}};

const Builtin& find_builtin(std::string_view name) {
  for (const auto& b : kBuiltins) {
    if (b.name == name) return b;
  }
  std::string known;
  for (const auto& b : kBuiltins) {
    known += (known.empty() ? "" : ", ") + std::string(b.name);
  }
  throw ConfigError("unknown rule model '" + std::string(name) +
                    "'; built-in models are: " + known);
}

struct Binder {
  const InitStrategy& init;
  const CrispnessConfig& cfg;
  double slope;
  Rng rng;

  Expression bind(const RuleSpec& rule) {
    switch (rule.kind) {
      case RuleKind::kFeature: {
        const double theta = init.kind() == InitStrategy::Kind::kNeutral
                                 ? 0.5
                                 : rng.uniform(0.2, 0.8);
        return make_predicate(rule.feature, theta, slope);
      }
      case RuleKind::kNot:
        return make_not(bind(rule.children.front()));
      case RuleKind::kAnd:
      case RuleKind::kOr: {
        const auto arity = Eigen::Index(rule.children.size());
        AndParams gate{1.0, Eigen::VectorXd::Ones(arity)};
        if (init.kind() == InitStrategy::Kind::kRandomized) {
          for (Eigen::Index i = 0; i < arity; ++i) gate.weights[i] = rng.uniform(0.5, 1.5);
        }
        gate = project_params(gate, cfg);
        if (init.kind() == InitStrategy::Kind::kRandomized) {
          gate.beta = feasible_beta(gate.weights, cfg).upper;
        }
        std::vector<Expression> children;
        children.reserve(rule.children.size());
        for (const auto& c : rule.children) children.push_back(bind(c));
        return rule.kind == RuleKind::kAnd ? make_and(children, gate)
                                           : make_or(children, gate);
      }
    }
    throw StructuralError("unknown rule node");
  }
};

RuleSpec rule_at(const Expression& expr, Eigen::Index i) {
  const Node& node = expr.node(i);
  switch (node.kind) {
    case NodeKind::kPredicate:
      return rule_feature(node.feature);
    case NodeKind::kNot:
      return rule_not(rule_at(expr, node.children.front()));
    case NodeKind::kAnd:
    case NodeKind::kOr: {
      std::vector<RuleSpec> children;
      for (Eigen::Index c : node.children) children.push_back(rule_at(expr, c));
      return node.kind == NodeKind::kAnd ? rule_and(std::move(children))
                                         : rule_or(std::move(children));
    }
  }
  throw StructuralError("unknown node kind");
}

void check_arity(const RuleSpec& rule, const CrispnessConfig& cfg) {
  if (rule.kind == RuleKind::kAnd || rule.kind == RuleKind::kOr) {
    const auto arity = Eigen::Index(rule.children.size());
    if (!cfg.admits_arity(arity)) {
      throw ConfigError("alpha " + std::to_string(cfg.alpha()) +
                        " admits no crisp gate with " + std::to_string(arity) +
                        " inputs; this rule needs alpha > " +
                        std::to_string(arity) + "/" + std::to_string(arity + 1));
    }
  }
  for (const auto& c : rule.children) check_arity(c, cfg);
}

}  // namespace

RuleSpec parse_rule(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const RuleSpec& rule) {
  std::string out;
  print(rule, out);
  return out;
}

std::size_t leaf_count(const RuleSpec& rule) {
  if (rule.kind == RuleKind::kFeature) return 1;
  std::size_t n = 0;
  for (const auto& c : rule.children) n += leaf_count(c);
  return n;
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& b : kBuiltins) out.emplace_back(b.name);
    return out;
  }();
  return names;
}

RuleSpec builtin_model(std::string_view name) {
  return parse_rule(find_builtin(name).text);
}

std::string builtin_text(std::string_view name) {
  return std::string(find_builtin(name).text);
}

InitStrategy InitStrategy::parse(std::string_view text,
                                 std::uint64_t default_seed) {
  if (text == "neutral") return neutral();
  if (text == "randomized") return randomized(default_seed);
  constexpr std::string_view prefix = "randomized:";
  if (text.substr(0, prefix.size()) == prefix) {
    const auto digits = text.substr(prefix.size());
    std::uint64_t seed = 0;
    const auto [end, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), seed);
    if (ec == std::errc() && end == digits.data() + digits.size() &&
        !digits.empty()) {
      return randomized(seed);
    }
  }
  throw ConfigError("unknown init strategy '" + std::string(text) +
                    "' (use neutral, randomized or randomized:<seed>)");
}

std::string InitStrategy::to_string() const {
  if (kind_ == Kind::kNeutral) return "neutral";
  return "randomized:" + std::to_string(seed_);
}

Expression bind_params(const RuleSpec& rule, const InitStrategy& init,
                       const CrispnessConfig& cfg, double slope) {
  if (!(slope > 0.0)) throw ConfigError("slope must be positive");
  check_arity(rule, cfg);
  Binder binder{init, cfg, slope, Rng(init.seed())};
  return binder.bind(rule);
}

Expression bind_generator(const RuleSpec& rule, const CrispnessConfig& cfg,
                          double theta, double slope) {
  Expression expr = bind_params(rule, InitStrategy::neutral(), cfg, slope);
  for (Eigen::Index i = 0; i < expr.size(); ++i) {
    const Node& node = expr.node(i);
    if (node.kind == NodeKind::kPredicate) {
      expr.set_theta(i, theta);
    } else if (node.kind != NodeKind::kNot) {
      const auto arity = Eigen::Index(node.children.size());
      AndParams gate = project_params({0.0, Eigen::VectorXd::Zero(arity)}, cfg);
      gate.beta = feasible_beta(gate.weights, cfg).upper;
      expr.set_gate(i, gate);
    }
  }
  return expr;
}

RuleSpec rule_of(const Expression& expr) { return rule_at(expr, 0); }

}  // namespace lnn

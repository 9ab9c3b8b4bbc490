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

#include "lnn/expression.hpp"

#include <algorithm>

#include "lnn/error.hpp"

namespace lnn {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kPredicate:
      return "predicate";
    case NodeKind::kAnd:
      return "and";
    case NodeKind::kOr:
      return "or";
    case NodeKind::kNot:
      return "not";
  }
  return "?";
}

Eigen::Index Node::param_count() const noexcept {
  switch (kind) {
    case NodeKind::kPredicate:
      return 1;
    case NodeKind::kAnd:
    case NodeKind::kOr:
      return 1 + Eigen::Index(children.size());
    case NodeKind::kNot:
      return 0;
  }
  return 0;
}

Expression::Expression(std::vector<Node> nodes, Eigen::VectorXd params)
    : nodes_(std::move(nodes)), params_(std::move(params)) {
  if (nodes_.empty()) throw StructuralError("expression has no nodes");
  const auto n = Eigen::Index(nodes_.size());
  parent_.assign(nodes_.size(), -1);

  Eigen::Index expected_offset = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Node& node = nodes_[std::size_t(i)];
    const auto where = "node " + std::to_string(i) + ": ";
    switch (node.kind) {
      case NodeKind::kPredicate:
        if (!node.children.empty()) {
          throw StructuralError(where + "predicate with children");
        }
        if (node.feature < 0 || node.feature >= kFeatureCount) {
          throw StructuralError(where + "feature index " +
                                std::to_string(node.feature) +
                                " is outside the schema");
        }
        if (!(node.slope > 0.0)) {
          throw StructuralError(where + "slope must be positive");
        }
        break;
      case NodeKind::kAnd:
      case NodeKind::kOr:
        if (node.children.size() < 2) {
          throw StructuralError(where + std::string(to_string(node.kind)) +
                                " needs at least 2 children");
        }
        break;
      case NodeKind::kNot:
        if (node.children.size() != 1) {
          throw StructuralError(where + "not needs exactly 1 child");
        }
        break;
    }
    for (Eigen::Index c : node.children) {
      if (c <= i || c >= n) {
        throw StructuralError(where + "child index " + std::to_string(c) +
                              " breaks pre-order");
      }
      if (parent_[std::size_t(c)] != -1) {
        throw StructuralError(where + "node " + std::to_string(c) +
                              " has two parents");
      }
      parent_[std::size_t(c)] = i;
    }
    if (node.offset != expected_offset) {
      throw StructuralError(where + "parameter offset " +
                            std::to_string(node.offset) + ", expected " +
                            std::to_string(expected_offset));
    }
    expected_offset += node.param_count();
  }
  for (Eigen::Index i = 1; i < n; ++i) {
    if (parent_[std::size_t(i)] == -1) {
      throw StructuralError("node " + std::to_string(i) + " is unreachable");
    }
  }
  if (params_.size() != expected_offset) {
    throw StructuralError("expression needs " +
                          std::to_string(expected_offset) +
                          " parameters, got " + std::to_string(params_.size()));
  }
}

void Expression::set_params(const Eigen::VectorXd& params) {
  if (params.size() != params_.size()) {
    throw StructuralError("parameter vector has size " +
                          std::to_string(params.size()) + ", expected " +
                          std::to_string(params_.size()));
  }
  params_ = params;
}

PredicateParams Expression::predicate(Eigen::Index i) const {
  const Node& n = node(i);
  if (n.kind != NodeKind::kPredicate) {
    throw StructuralError("node " + std::to_string(i) + " is not a predicate");
  }
  return {params_[n.offset], n.slope};
}

void Expression::set_theta(Eigen::Index i, double theta) {
  const Node& n = node(i);
  if (n.kind != NodeKind::kPredicate) {
    throw StructuralError("node " + std::to_string(i) + " is not a predicate");
  }
  params_[n.offset] = theta;
}

AndParams Expression::gate(Eigen::Index i) const {
  const Node& n = node(i);
  if (n.kind != NodeKind::kAnd && n.kind != NodeKind::kOr) {
    throw StructuralError("node " + std::to_string(i) + " has no gate");
  }
  const auto arity = Eigen::Index(n.children.size());
  return {params_[n.offset], params_.segment(n.offset + 1, arity)};
}

void Expression::set_gate(Eigen::Index i, const AndParams& params) {
  const Node& n = node(i);
  if (n.kind != NodeKind::kAnd && n.kind != NodeKind::kOr) {
    throw StructuralError("node " + std::to_string(i) + " has no gate");
  }
  const auto arity = Eigen::Index(n.children.size());
  if (params.arity() != arity) {
    throw StructuralError("gate of node " + std::to_string(i) + " needs " +
                          std::to_string(arity) + " weights");
  }
  params_[n.offset] = params.beta;
  params_.segment(n.offset + 1, arity) = params.weights;
}

std::string Expression::path(Eigen::Index i) const {
  if (i < 0 || i >= size()) throw StructuralError("no such node");
  std::vector<Eigen::Index> steps;
  for (Eigen::Index at = i; parent_[std::size_t(at)] != -1;) {
    const Eigen::Index up = parent_[std::size_t(at)];
    const auto& siblings = nodes_[std::size_t(up)].children;
    steps.push_back(
        Eigen::Index(std::find(siblings.begin(), siblings.end(), at) -
                     siblings.begin()));
    at = up;
  }
  std::string out = "root";
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    out += "/" + std::to_string(*it);
  }
  return out;
}

std::vector<std::string> Expression::parameter_names() const {
  std::vector<std::string> names;
  names.reserve(std::size_t(param_count()));
  for (Eigen::Index i = 0; i < size(); ++i) {
    const Node& n = nodes_[std::size_t(i)];
    const std::string p = path(i);
    switch (n.kind) {
      case NodeKind::kPredicate:
        names.push_back(p + ":theta");
        break;
      case NodeKind::kAnd:
      case NodeKind::kOr:
        names.push_back(p + ":beta");
        for (std::size_t c = 0; c < n.children.size(); ++c) {
          names.push_back(p + ":w[" + std::to_string(c) + "]");
        }
        break;
      case NodeKind::kNot:
        break;
    }
  }
  return names;
}

Eigen::Index Expression::max_arity() const noexcept {
  Eigen::Index arity = 0;
  for (const Node& n : nodes_) {
    if (n.kind == NodeKind::kAnd || n.kind == NodeKind::kOr) {
      arity = std::max(arity, Eigen::Index(n.children.size()));
    }
  }
  return arity;
}

namespace {

// Splices `children` beneath a new root, shifting their node indices and
// parameter offsets.
Expression compose(Node root, Eigen::VectorXd root_params,
                   const std::vector<Expression>& children) {
  std::vector<Node> nodes{std::move(root)};
  Eigen::Index total = root_params.size();
  for (const auto& child : children) total += child.param_count();
  Eigen::VectorXd params(total);
  params.head(root_params.size()) = root_params;

  Eigen::Index param_at = root_params.size();
  for (const auto& child : children) {
    const auto node_shift = Eigen::Index(nodes.size());
    nodes.front().children.push_back(node_shift);
    for (Node n : child.nodes()) {
      for (auto& c : n.children) c += node_shift;
      n.offset += param_at;
      nodes.push_back(std::move(n));
    }
    params.segment(param_at, child.param_count()) = child.params();
    param_at += child.param_count();
  }
  return Expression(std::move(nodes), std::move(params));
}

Expression make_gate(NodeKind kind, const std::vector<Expression>& children,
                     const AndParams& params) {
  if (params.arity() != Eigen::Index(children.size())) {
    throw StructuralError("gate has " + std::to_string(children.size()) +
                          " children but " + std::to_string(params.arity()) +
                          " weights");
  }
  Node root;
  root.kind = kind;
  Eigen::VectorXd own(1 + params.arity());
  own << params.beta, params.weights;
  return compose(std::move(root), std::move(own), children);
}

}  // namespace

Expression make_predicate(Eigen::Index feature, double theta, double slope) {
  Node leaf;
  leaf.kind = NodeKind::kPredicate;
  leaf.feature = feature;
  leaf.slope = slope;
  return Expression({leaf}, Eigen::VectorXd::Constant(1, theta));
}

Expression make_and(const std::vector<Expression>& children,
                    const AndParams& params) {
  return make_gate(NodeKind::kAnd, children, params);
}

Expression make_or(const std::vector<Expression>& children,
                   const AndParams& params) {
  return make_gate(NodeKind::kOr, children, params);
}

Expression make_not(const Expression& child) {
  Node root;
  root.kind = NodeKind::kNot;
  return compose(std::move(root), Eigen::VectorXd(0), {child});
}

void forward(const Expression& expr,
             const Eigen::Ref<const Eigen::RowVectorXd>& features,
             ForwardTrace& trace) {
  if (features.size() != kFeatureCount) {
    throw StructuralError("expected " + std::to_string(kFeatureCount) +
                          " features, got " + std::to_string(features.size()));
  }
  const Eigen::Index n = expr.size();
  trace.values.setZero(n);
  trace.activations.setZero(n);
  const auto& params = expr.params();

  Eigen::VectorXd inputs;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    const Node& node = expr.node(i);
    switch (node.kind) {
      case NodeKind::kPredicate:
        trace.values[i] = eval_tl(features[node.feature],
                                  PredicateParams{params[node.offset], node.slope});
        break;
      case NodeKind::kNot:
        trace.values[i] = 1.0 - trace.values[node.children.front()];
        break;
      case NodeKind::kAnd:
      case NodeKind::kOr: {
        const auto arity = Eigen::Index(node.children.size());
        inputs.resize(arity);
        for (Eigen::Index c = 0; c < arity; ++c) {
          inputs[c] = trace.values[node.children[std::size_t(c)]];
        }
        const AndParams gate{params[node.offset],
                             params.segment(node.offset + 1, arity)};
        if (node.kind == NodeKind::kAnd) {
          trace.activations[i] = and_activation(inputs, gate);
          trace.values[i] = eval_and(inputs, gate);
        } else {
          const Eigen::VectorXd negated = (1.0 - inputs.array()).matrix();
          trace.activations[i] = and_activation(negated, gate);
          trace.values[i] = eval_or(inputs, gate);
        }
        break;
      }
    }
  }
}

TruthValue eval_expression(const Expression& expr,
                           const Eigen::Ref<const Eigen::RowVectorXd>& features) {
  ForwardTrace trace;
  forward(expr, features, trace);
  return TruthValue(trace.values[0]);
}

Eigen::VectorXd eval_rows(const Expression& expr,
                          const FeatureMatrix& features) {
  Eigen::VectorXd out(features.rows());
  ForwardTrace trace;
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    forward(expr, features.row(r), trace);
    out[r] = trace.values[0];
  }
  return out;
}

}  // namespace lnn

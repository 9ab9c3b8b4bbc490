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

// Expression trees with learnable parameters.
//
// An Expression is a pre-order array of nodes (node 0 is the root, every
// child index is greater than its parent's) plus one flat parameter vector.
// Each node owns a contiguous slice of that vector:
//
//   predicate   [theta]
//   and / or    [beta, w_0, ..., w_{n-1}]
//   not         (nothing)
//
// Gradients share the same layout, so an optimizer step is a single vector
// update and projection works slice by slice.

#ifndef LNN_EXPRESSION_HPP
#define LNN_EXPRESSION_HPP

#include <Eigen/Core>

#include <string>
#include <vector>

#include "lnn/schema.hpp"
#include "lnn/truth.hpp"

namespace lnn {

enum class NodeKind { kPredicate, kAnd, kOr, kNot };

std::string_view to_string(NodeKind kind);

struct Node {
  NodeKind kind = NodeKind::kPredicate;
  Eigen::Index feature = -1;  ///< predicates only
  double slope = 10.0;        ///< predicates only; not learned
  std::vector<Eigen::Index> children;
  Eigen::Index offset = 0;  ///< first parameter of this node

  Eigen::Index param_count() const noexcept;
};

class Expression {
 public:
  /// Validates the tree shape, feature indices and the parameter layout.
  Expression(std::vector<Node> nodes, Eigen::VectorXd params);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& node(Eigen::Index i) const { return nodes_.at(std::size_t(i)); }
  Eigen::Index size() const noexcept { return Eigen::Index(nodes_.size()); }

  const Eigen::VectorXd& params() const noexcept { return params_; }
  /// Replaces every parameter; the size must match.
  void set_params(const Eigen::VectorXd& params);
  Eigen::Index param_count() const noexcept { return params_.size(); }

  PredicateParams predicate(Eigen::Index i) const;
  void set_theta(Eigen::Index i, double theta);

  /// Parameters of an And node, or of the dual conjunction of an Or node.
  AndParams gate(Eigen::Index i) const;
  void set_gate(Eigen::Index i, const AndParams& params);

  /// "root", "root/1", "root/1/0", ...
  std::string path(Eigen::Index i) const;
  /// One name per parameter, in layout order: "root:beta", "root:w[0]",
  /// "root/0:theta", ...
  std::vector<std::string> parameter_names() const;

  /// Largest And/Or arity (0 if there are none).
  Eigen::Index max_arity() const noexcept;

 private:
  std::vector<Node> nodes_;
  std::vector<Eigen::Index> parent_;
  Eigen::VectorXd params_;
};

Expression make_predicate(Eigen::Index feature, double theta,
                          double slope = 10.0);
Expression make_and(const std::vector<Expression>& children,
                    const AndParams& params);
Expression make_or(const std::vector<Expression>& children,
                   const AndParams& params);
Expression make_not(const Expression& child);

/// Per-node forward values. `activations` holds the pre-clamp value of each
/// And node and of the dual conjunction of each Or node (0 elsewhere).
struct ForwardTrace {
  Eigen::VectorXd values;
  Eigen::VectorXd activations;
};

/// Forward pass over every node for one patient. Shared by evaluation and
/// the gradient tape so both see bit-identical values.
void forward(const Expression& expr,
             const Eigen::Ref<const Eigen::RowVectorXd>& features,
             ForwardTrace& trace);

/// Truth value of the root for one patient; read as the predicted
/// probability of the positive class.
TruthValue eval_expression(const Expression& expr,
                           const Eigen::Ref<const Eigen::RowVectorXd>& features);

/// Root truth value for every row.
Eigen::VectorXd eval_rows(const Expression& expr, const FeatureMatrix& features);

}  // namespace lnn

#endif  // LNN_EXPRESSION_HPP

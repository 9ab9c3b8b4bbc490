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

#ifndef LNN_GRADIENT_HPP
#define LNN_GRADIENT_HPP

#include <string>
#include <utility>
#include <vector>

#include "lnn/expression.hpp"

namespace lnn {

inline constexpr double kLogEpsilon = 1e-12;

/// -[y log max(p, eps) + (1 - y) log max(1 - p, eps)]
double bce_term(int label, double probability);

/// d bce_term / dp. Each log branch contributes 0 once its argument is at or
/// below eps (the floor is flat there).
double bce_term_derivative(int label, double probability);

/// Per-call scratch for one reverse sweep. Never shared between threads.
struct GradientTape {
  ForwardTrace trace;
  Eigen::VectorXd adjoints;  ///< d loss / d node value
  Eigen::VectorXd gradient;  ///< d loss / d parameter, Expression layout
};

struct ForwardBackward {
  double probability = 0.0;
  double loss = 0.0;
  Eigen::VectorXd gradient;  ///< same layout as Expression::params()
};

/// Root value, BCE loss and the exact gradient of the loss with respect to
/// every theta, beta and weight. Clamp kinks take the zero subgradient.
ForwardBackward forward_backward(
    const Expression& expr,
    const Eigen::Ref<const Eigen::RowVectorXd>& features, int label);

/// Same, reusing `tape` for scratch storage; the gradient is left in
/// tape.gradient. Returns {probability, loss}.
std::pair<double, double> forward_backward(
    const Expression& expr,
    const Eigen::Ref<const Eigen::RowVectorXd>& features, int label,
    GradientTape& tape);

struct BatchGradient {
  double loss = 0.0;         ///< mean BCE over the batch
  Eigen::VectorXd gradient;  ///< mean gradient
};

/// Mean loss and gradient over every row; rows are reduced in order.
BatchGradient batch_gradient(const Expression& expr,
                             const FeatureMatrix& features,
                             const Eigen::VectorXi& labels);

/// Central differences (L(p + h e_k) - L(p - h e_k)) / 2h for every
/// parameter, each from two fresh forward evaluations.
Eigen::VectorXd finite_difference_grad(
    const Expression& expr,
    const Eigen::Ref<const Eigen::RowVectorXd>& features, int label, double h);

/// Pairs each entry of a layout-ordered vector with its parameter name.
std::vector<std::pair<std::string, double>> by_parameter(
    const Expression& expr, const Eigen::VectorXd& values);

}  // namespace lnn

#endif  // LNN_GRADIENT_HPP

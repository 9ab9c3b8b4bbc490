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

#include "lnn/gradient.hpp"

#include <cmath>

#include "lnn/error.hpp"

namespace lnn {

namespace {

void check_label(int label) {
  if (label != 0 && label != 1) {
    throw StructuralError("label must be 0 or 1, got " + std::to_string(label));
  }
}

}  // namespace

double bce_term(int label, double probability) {
  check_label(label);
  return label == 1 ? -std::log(std::max(probability, kLogEpsilon))
                    : -std::log(std::max(1.0 - probability, kLogEpsilon));
}

double bce_term_derivative(int label, double probability) {
  check_label(label);
  if (label == 1) return probability > kLogEpsilon ? -1.0 / probability : 0.0;
  const double q = 1.0 - probability;
  return q > kLogEpsilon ? 1.0 / q : 0.0;
}

std::pair<double, double> forward_backward(
    const Expression& expr,
    const Eigen::Ref<const Eigen::RowVectorXd>& features, int label,
    GradientTape& tape) {
  forward(expr, features, tape.trace);
  const auto& values = tape.trace.values;
  const auto& activations = tape.trace.activations;
  const auto& params = expr.params();

  const double p = values[0];
  const double loss = bce_term(label, p);

  const Eigen::Index n = expr.size();
  tape.adjoints.setZero(n);
  tape.gradient.setZero(expr.param_count());
  tape.adjoints[0] = bce_term_derivative(label, p);

  // Parents precede children, so one forward sweep over the node array
  // visits every node after all of its consumers.
  for (Eigen::Index i = 0; i < n; ++i) {
    const Node& node = expr.node(i);
    const double upstream = tape.adjoints[i];
    switch (node.kind) {
      case NodeKind::kPredicate: {
        // v = f * s, s = sigmoid(k (f - theta));  dv/dtheta = -f k s (1 - s)
        const double f = features[node.feature];
        const double s =
            logistic(node.slope * (f - params[node.offset]));
        tape.gradient[node.offset] += upstream * (-f * node.slope * s * (1.0 - s));
        break;
      }
      case NodeKind::kNot:
        tape.adjoints[node.children.front()] -= upstream;
        break;
      case NodeKind::kAnd: {
        // v = clamp(beta - sum w_i (1 - x_i))
        const double dz = upstream * clamp_unit_slope(activations[i]);
        tape.gradient[node.offset] += dz;
        for (std::size_t c = 0; c < node.children.size(); ++c) {
          const Eigen::Index child = node.children[c];
          const Eigen::Index w = node.offset + 1 + Eigen::Index(c);
          tape.gradient[w] += -dz * (1.0 - values[child]);
          tape.adjoints[child] += dz * params[w];
        }
        break;
      }
      case NodeKind::kOr: {
        // v = 1 - clamp(beta - sum w_i (1 - y_i)),  y_i = 1 - x_i
        const double dz = -upstream * clamp_unit_slope(activations[i]);
        tape.gradient[node.offset] += dz;
        for (std::size_t c = 0; c < node.children.size(); ++c) {
          const Eigen::Index child = node.children[c];
          const Eigen::Index w = node.offset + 1 + Eigen::Index(c);
          const double y = 1.0 - values[child];
          tape.gradient[w] += -dz * (1.0 - y);
          tape.adjoints[child] -= dz * params[w];
        }
        break;
      }
    }
  }
  return {p, loss};
}

ForwardBackward forward_backward(
    const Expression& expr,
    const Eigen::Ref<const Eigen::RowVectorXd>& features, int label) {
  GradientTape tape;
  const auto [p, loss] = forward_backward(expr, features, label, tape);
  return {p, loss, std::move(tape.gradient)};
}

BatchGradient batch_gradient(const Expression& expr,
                             const FeatureMatrix& features,
                             const Eigen::VectorXi& labels) {
  if (features.rows() != labels.size()) {
    throw StructuralError("feature rows and labels differ in length");
  }
  if (features.rows() == 0) throw StructuralError("empty batch");
  BatchGradient out;
  out.gradient.setZero(expr.param_count());
  GradientTape tape;
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    const auto [p, loss] = forward_backward(expr, features.row(r), labels[r], tape);
    out.loss += loss;
    out.gradient += tape.gradient;
  }
  const double scale = 1.0 / double(features.rows());
  out.loss *= scale;
  out.gradient *= scale;
  return out;
}

Eigen::VectorXd finite_difference_grad(
    const Expression& expr,
    const Eigen::Ref<const Eigen::RowVectorXd>& features, int label,
    double h) {
  if (!(h > 0.0)) throw StructuralError("finite-difference step must be > 0");
  Expression probe = expr;
  const Eigen::VectorXd base = expr.params();
  Eigen::VectorXd grad(base.size());
  for (Eigen::Index k = 0; k < base.size(); ++k) {
    Eigen::VectorXd shifted = base;
    shifted[k] = base[k] + h;
    probe.set_params(shifted);
    const double up = bce_term(label, eval_expression(probe, features).value());
    shifted[k] = base[k] - h;
    probe.set_params(shifted);
    const double down =
        bce_term(label, eval_expression(probe, features).value());
    grad[k] = (up - down) / (2.0 * h);
  }
  return grad;
}

std::vector<std::pair<std::string, double>> by_parameter(
    const Expression& expr, const Eigen::VectorXd& values) {
  if (values.size() != expr.param_count()) {
    throw StructuralError("vector does not match the parameter layout");
  }
  const auto names = expr.parameter_names();
  std::vector<std::pair<std::string, double>> out;
  out.reserve(names.size());
  for (std::size_t k = 0; k < names.size(); ++k) {
    out.emplace_back(names[k], values[Eigen::Index(k)]);
  }
  return out;
}

}  // namespace lnn

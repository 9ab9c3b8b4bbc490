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

// Truth values and the forward semantics of the weighted logical operators.
//
// The kernels are free functions templated on the scalar type and accept any
// Eigen vector expression for their inputs, so callers can pass columns,
// rows, segments or `1 - x` style expressions without materializing them.

#ifndef LNN_TRUTH_HPP
#define LNN_TRUTH_HPP

#include <Eigen/Core>

#include <cmath>
#include <string>

#include "lnn/error.hpp"

namespace lnn {

/// Fuzzy truth in [0, 1]. Construction rejects anything outside that range,
/// including NaN.
template <typename Scalar>
class BasicTruthValue {
 public:
  constexpr BasicTruthValue() = default;

  explicit BasicTruthValue(Scalar value) : value_(value) {
    if (!(value >= Scalar(0) && value <= Scalar(1))) {
      throw StructuralError("truth value " + std::to_string(double(value)) +
                            " is outside [0, 1]");
    }
  }

  constexpr Scalar value() const noexcept { return value_; }
  constexpr explicit operator Scalar() const noexcept { return value_; }

  friend constexpr bool operator==(BasicTruthValue, BasicTruthValue) = default;

 private:
  Scalar value_{0};
};

using TruthValue = BasicTruthValue<double>;

/// Crispness level alpha in [1/2, 1].
class CrispnessConfig {
 public:
  explicit CrispnessConfig(double alpha = 0.9) : alpha_(alpha) {
    if (!(alpha >= 0.5 && alpha <= 1.0)) {
      throw ConfigError("alpha " + std::to_string(alpha) +
                        " is outside [0.5, 1]");
    }
  }

  double alpha() const noexcept { return alpha_; }

  /// The crispness region of an n-ary conjunction is non-empty iff
  /// alpha > n / (n + 1); a unary one is always feasible.
  bool admits_arity(Eigen::Index arity) const noexcept {
    if (arity == 1) return true;
    return alpha_ * double(arity + 1) > double(arity);
  }

  /// Largest arity with a non-empty crispness region (alpha = 1 admits all).
  Eigen::Index max_arity() const noexcept;

 private:
  double alpha_;
};

inline Eigen::Index CrispnessConfig::max_arity() const noexcept {
  if (alpha_ >= 1.0) return Eigen::NumTraits<Eigen::Index>::highest();
  Eigen::Index n = 1;
  while (admits_arity(n + 1)) ++n;
  return n;
}

/// Bias and per-input weights of a weighted conjunction. An Or node stores
/// the parameters of its dual conjunction.
template <typename Scalar>
struct BasicAndParams {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Scalar beta{1};
  Vector weights;

  Eigen::Index arity() const noexcept { return weights.size(); }
};

using AndParams = BasicAndParams<double>;

/// Threshold and sigmoid steepness of a transition-logic predicate.
template <typename Scalar>
struct BasicPredicateParams {
  Scalar theta{0.5};
  Scalar slope{10};
};

using PredicateParams = BasicPredicateParams<double>;

template <typename Scalar>
constexpr Scalar clamp_unit(Scalar z) noexcept {
  return z < Scalar(0) ? Scalar(0) : (z > Scalar(1) ? Scalar(1) : z);
}

/// Subgradient of clamp_unit: 1 strictly inside (0, 1), 0 elsewhere
/// (including both kinks).
template <typename Scalar>
constexpr Scalar clamp_unit_slope(Scalar z) noexcept {
  return (z > Scalar(0) && z < Scalar(1)) ? Scalar(1) : Scalar(0);
}

template <typename Scalar>
Scalar logistic(Scalar z) noexcept {
  using std::exp;
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-z));
  const Scalar e = exp(z);
  return e / (Scalar(1) + e);
}

template <typename Scalar>
BasicTruthValue<Scalar> product_tnorm(BasicTruthValue<Scalar> x,
                                      BasicTruthValue<Scalar> y) {
  return BasicTruthValue<Scalar>(x.value() * y.value());
}

template <typename Scalar>
BasicTruthValue<Scalar> eval_not(BasicTruthValue<Scalar> x) {
  return BasicTruthValue<Scalar>(Scalar(1) - x.value());
}

/// Pre-clamp activation beta - sum_i w_i (1 - x_i) of a weighted conjunction.
template <typename Derived>
typename Derived::Scalar and_activation(
    const Eigen::MatrixBase<Derived>& inputs,
    const BasicAndParams<typename Derived::Scalar>& params) {
  using Scalar = typename Derived::Scalar;
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(Derived)
  if (inputs.size() == 0) throw StructuralError("conjunction has no inputs");
  if (inputs.size() != params.weights.size()) {
    throw StructuralError("conjunction has " + std::to_string(inputs.size()) +
                          " inputs but " +
                          std::to_string(params.weights.size()) + " weights");
  }
  Scalar penalty(0);
  for (Eigen::Index i = 0; i < inputs.size(); ++i) {
    penalty += params.weights[i] * (Scalar(1) - inputs[i]);
  }
  return params.beta - penalty;
}

/// Weighted conjunction: clamp_[0,1](beta - sum_i w_i (1 - x_i)).
template <typename Derived>
typename Derived::Scalar eval_and(
    const Eigen::MatrixBase<Derived>& inputs,
    const BasicAndParams<typename Derived::Scalar>& params) {
  return clamp_unit(and_activation(inputs, params));
}

/// Weighted disjunction, defined only through De Morgan:
/// 1 - eval_and(1 - x, params).
template <typename Derived>
typename Derived::Scalar eval_or(
    const Eigen::MatrixBase<Derived>& inputs,
    const BasicAndParams<typename Derived::Scalar>& params) {
  using Scalar = typename Derived::Scalar;
  const auto negated = (Scalar(1) - inputs.array()).matrix();
  return Scalar(1) - eval_and(negated, params);
}

/// Transition-logic predicate f * sigmoid(slope * (f - theta)); a smooth
/// stand-in for the test f > theta.
template <typename Scalar>
Scalar eval_tl(Scalar feature, const BasicPredicateParams<Scalar>& params) {
  return feature * logistic(params.slope * (feature - params.theta));
}

}  // namespace lnn

#endif  // LNN_TRUTH_HPP

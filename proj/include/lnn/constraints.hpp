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

#ifndef LNN_CONSTRAINTS_HPP
#define LNN_CONSTRAINTS_HPP

#include <string>
#include <vector>

#include "lnn/truth.hpp"

namespace lnn {

inline constexpr double kFeasibilityTolerance = 1e-9;

// Crispness region of an n-ary conjunction at level alpha:
//   beta - (1 - alpha) * sum(w) >= alpha        (all inputs >= alpha)
//   beta - alpha * w_i          <= 1 - alpha    (input i <= 1 - alpha)
//   w_i                         >= 0

enum class ConstraintKind {
  kAllHigh,      ///< beta - (1-alpha) sum(w) >= alpha
  kOneLow,       ///< beta - alpha w_i <= 1 - alpha, for input `index`
  kNonNegative,  ///< w_i >= 0, for input `index`
};

struct Violation {
  ConstraintKind kind;
  Eigen::Index index = -1;  ///< weight index; -1 for kAllHigh
  double slack = 0.0;       ///< signed margin of the inequality; negative here

  std::string describe() const;
};

/// Every violated inequality (beyond kFeasibilityTolerance). Empty iff
/// `params` lies in the crispness region.
std::vector<Violation> check_constraints(const AndParams& params,
                                         const CrispnessConfig& cfg);

inline bool is_feasible(const AndParams& params, const CrispnessConfig& cfg) {
  return check_constraints(params, cfg).empty();
}

struct Interval {
  double lower;
  double upper;

  bool empty() const noexcept { return lower > upper; }
};

/// The beta values admitted by `weights` at level alpha:
/// [alpha + (1-alpha) sum(w), 1 - alpha + alpha min(w)].
Interval feasible_beta(const Eigen::VectorXd& weights,
                       const CrispnessConfig& cfg);

/// Maps `params` into the crispness region: negative weights go to zero,
/// weights below the smallest admissible floor are raised to it, then beta is
/// clamped into its feasible interval. Feasible input is returned unchanged
/// and the map is idempotent. Throws ConfigError when alpha admits no
/// conjunction of this arity.
AndParams project_params(const AndParams& params, const CrispnessConfig& cfg);

}  // namespace lnn

#endif  // LNN_CONSTRAINTS_HPP

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

#include "lnn/constraints.hpp"

#include <algorithm>
#include <sstream>

namespace lnn {

namespace {

// Repair is triggered only past this gap so that a repaired point (which sits
// on the boundary up to rounding) is a fixed point of the projection.
constexpr double kRepairTolerance = 1e-12;

// Width deficit of the beta interval: positive iff the interval is empty.
double interval_gap(const Eigen::VectorXd& w, double alpha) {
  return (1.0 - alpha) * w.sum() - alpha * w.minCoeff() - (1.0 - 2.0 * alpha);
}

// Smallest floor t >= min(w) such that raising every weight below t to t
// yields a non-empty beta interval. The gap is piecewise linear in t with
// slope (1-alpha) * #{w_i <= t} - alpha, strictly negative whenever alpha
// admits the arity, so the root is unique.
double weight_floor(const Eigen::VectorXd& w, double alpha) {
  std::vector<double> sorted(w.data(), w.data() + w.size());
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();

  double suffix = 0.0;
  for (double v : sorted) suffix += v;

  for (std::size_t k = 0; k < n; ++k) {
    suffix -= sorted[k];  // now sum of sorted[k+1..]
    const double count = double(k + 1);
    const double rate = alpha - (1.0 - alpha) * count;  // > 0
    const double t = ((1.0 - alpha) * suffix - (1.0 - 2.0 * alpha)) / rate;
    if (k + 1 == n || t <= sorted[k + 1]) return std::max(t, sorted[k]);
  }
  return sorted.back();
}

}  // namespace

std::string Violation::describe() const {
  std::ostringstream out;
  switch (kind) {
    case ConstraintKind::kAllHigh:
      out << "beta - (1-alpha)*sum(w) >= alpha";
      break;
    case ConstraintKind::kOneLow:
      out << "beta - alpha*w[" << index << "] <= 1-alpha";
      break;
    case ConstraintKind::kNonNegative:
      out << "w[" << index << "] >= 0";
      break;
  }
  out << " violated (slack " << slack << ")";
  return out.str();
}

std::vector<Violation> check_constraints(const AndParams& params,
                                         const CrispnessConfig& cfg) {
  const double alpha = cfg.alpha();
  const auto& w = params.weights;
  std::vector<Violation> violations;

  const double all_high = params.beta - (1.0 - alpha) * w.sum() - alpha;
  if (all_high < -kFeasibilityTolerance) {
    violations.push_back({ConstraintKind::kAllHigh, -1, all_high});
  }
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double one_low = (1.0 - alpha) - (params.beta - alpha * w[i]);
    if (one_low < -kFeasibilityTolerance) {
      violations.push_back({ConstraintKind::kOneLow, i, one_low});
    }
  }
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] < -kFeasibilityTolerance) {
      violations.push_back({ConstraintKind::kNonNegative, i, w[i]});
    }
  }
  return violations;
}

Interval feasible_beta(const Eigen::VectorXd& weights,
                       const CrispnessConfig& cfg) {
  const double alpha = cfg.alpha();
  return {alpha + (1.0 - alpha) * weights.sum(),
          1.0 - alpha + alpha * weights.minCoeff()};
}

AndParams project_params(const AndParams& params, const CrispnessConfig& cfg) {
  const Eigen::Index arity = params.arity();
  if (arity == 0) throw StructuralError("conjunction has no weights");
  if (!cfg.admits_arity(arity)) {
    throw ConfigError("alpha " + std::to_string(cfg.alpha()) +
                      " admits no crisp conjunction of arity " +
                      std::to_string(arity) + " (need alpha > " +
                      std::to_string(arity) + "/" + std::to_string(arity + 1) +
                      ")");
  }
  const double alpha = cfg.alpha();

  AndParams out;
  out.weights = params.weights.cwiseMax(0.0);
  if (interval_gap(out.weights, alpha) > kRepairTolerance) {
    const double floor = weight_floor(out.weights, alpha);
    out.weights = out.weights.cwiseMax(floor);
  }

  const Interval beta = feasible_beta(out.weights, cfg);
  out.beta = std::min(std::max(params.beta, beta.lower), beta.upper);
  return out;
}

}  // namespace lnn

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


#ifndef LNN_METRICS_HPP
#define LNN_METRICS_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace lnn {

struct Confusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const noexcept { return tp + fp + tn + fn; }

  friend bool operator==(const Confusion&, const Confusion&) = default;
};

/// Counts with the inclusive rule: predicted positive iff p >= threshold.
/// Throws StructuralError on a length mismatch or a non-binary label.
Confusion confusion(const Eigen::VectorXd& probs, const Eigen::VectorXi& labels,
                    double threshold);

/// Mann-Whitney AUC: the fraction of (positive, negative) pairs in which the
/// positive scores higher, ties counting one half. Computed from midranks in
/// O(n log n). Throws MetricError unless both classes are present.
double roc_auc(const Eigen::VectorXd& probs, const Eigen::VectorXi& labels);

struct RocPoint {
  double threshold;
  double fpr;
  double tpr;

  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

/// One point per distinct score (descending), preceded by (inf, 0, 0).
/// The last point is always (min score, 1, 1).
std::vector<RocPoint> roc_curve(const Eigen::VectorXd& probs,
                                const Eigen::VectorXi& labels);

/// Trapezoidal area under roc_curve.
double roc_auc_trapezoid(const Eigen::VectorXd& probs,
                         const Eigen::VectorXi& labels);

struct EvalReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.0;
  Confusion counts;
  std::vector<RocPoint> roc;
  /// Set when nothing was predicted positive; precision is then 0.
  bool precision_degenerate = false;
};

/// Full report at `threshold`. Recall is 0 when there are no positives.
/// Throws MetricError (from roc_auc) on single-class labels.
EvalReport evaluate(const Eigen::VectorXd& probs, const Eigen::VectorXi& labels,
                    double threshold);

}  // namespace lnn

#endif  // LNN_METRICS_HPP

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


#include "lnn/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "lnn/error.hpp"

namespace lnn {

namespace {

void check_inputs(const Eigen::VectorXd& probs, const Eigen::VectorXi& labels) {
  if (probs.size() != labels.size()) {
    throw StructuralError(std::to_string(probs.size()) + " scores but " +
                          std::to_string(labels.size()) + " labels");
  }
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw StructuralError("label " + std::to_string(labels[i]) +
                            " at index " + std::to_string(i) + " is not binary");
    }
  }
}

std::vector<Eigen::Index> descending_order(const Eigen::VectorXd& probs) {
  std::vector<Eigen::Index> order(std::size_t(probs.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return probs[a] > probs[b];
  });
  return order;
}

}  // namespace

Confusion confusion(const Eigen::VectorXd& probs, const Eigen::VectorXi& labels,
                    double threshold) {
  check_inputs(probs, labels);
  Confusion c;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const bool predicted = probs[i] >= threshold;
    if (labels[i] == 1) {
      (predicted ? c.tp : c.fn) += 1;
    } else {
      (predicted ? c.fp : c.tn) += 1;
    }
  }
  return c;
}

double roc_auc(const Eigen::VectorXd& probs, const Eigen::VectorXi& labels) {
  check_inputs(probs, labels);
  const std::int64_t n = probs.size();
  const std::int64_t pos = labels.sum();
  const std::int64_t neg = n - pos;
  if (pos == 0 || neg == 0) {
    throw MetricError("AUC is undefined: labels contain only " +
                      std::string(pos == 0 ? "negatives" : "positives"));
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return probs[a] < probs[b]; });

  // Twice the midrank is an integer (first + last of the tie block, 1-based),
  // so the statistic is exact in 64-bit arithmetic.
  std::int64_t doubled_rank_sum = 0;
  for (std::int64_t lo = 0; lo < n;) {
    std::int64_t hi = lo;
    while (hi + 1 < n && probs[order[std::size_t(hi + 1)]] == probs[order[std::size_t(lo)]]) ++hi;
    std::int64_t block_pos = 0;
    for (std::int64_t k = lo; k <= hi; ++k) block_pos += labels[order[std::size_t(k)]];
    doubled_rank_sum += block_pos * ((lo + 1) + (hi + 1));
    lo = hi + 1;
  }
  // 2U = 2R - P(P+1); AUC = U / (P N).
  const std::int64_t doubled_u = doubled_rank_sum - pos * (pos + 1);
  return double(doubled_u) / (2.0 * double(pos) * double(neg));
}

std::vector<RocPoint> roc_curve(const Eigen::VectorXd& probs,
                                const Eigen::VectorXi& labels) {
  check_inputs(probs, labels);
  const std::int64_t pos = labels.sum();
  const std::int64_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) {
    throw MetricError("ROC curve is undefined for single-class labels");
  }
  const auto order = descending_order(probs);
  std::vector<RocPoint> out{{std::numeric_limits<double>::infinity(), 0.0, 0.0}};
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double score = probs[order[k]];
    while (k < order.size() && probs[order[k]] == score) {
      (labels[order[k]] == 1 ? tp : fp) += 1;
      ++k;
    }
    out.push_back({score, double(fp) / double(neg), double(tp) / double(pos)});
  }
  return out;
}

double roc_auc_trapezoid(const Eigen::VectorXd& probs,
                         const Eigen::VectorXi& labels) {
  const auto roc = roc_curve(probs, labels);
  double area = 0.0;
  for (std::size_t k = 1; k < roc.size(); ++k) {
    area += (roc[k].fpr - roc[k - 1].fpr) * (roc[k].tpr + roc[k - 1].tpr) / 2.0;
  }
  return area;
}

EvalReport evaluate(const Eigen::VectorXd& probs, const Eigen::VectorXi& labels,
                    double threshold) {
  if (probs.size() == 0) throw MetricError("cannot evaluate an empty test set");
  EvalReport r;
  r.counts = confusion(probs, labels, threshold);
  r.auc = roc_auc(probs, labels);
  r.roc = roc_curve(probs, labels);

  const auto& c = r.counts;
  r.accuracy = double(c.tp + c.tn) / double(c.total());
  r.precision_degenerate = c.tp + c.fp == 0;
  r.precision = r.precision_degenerate ? 0.0 : double(c.tp) / double(c.tp + c.fp);
  r.recall = c.tp + c.fn == 0 ? 0.0 : double(c.tp) / double(c.tp + c.fn);
  const double pr = r.precision + r.recall;
  r.f1 = pr > 0.0 ? 2.0 * r.precision * r.recall / pr : 0.0;
  return r;
}

}  // namespace lnn

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


#include <doctest.h>

#include <random>

#include "lnn/error.hpp"
#include "lnn/metrics.hpp"
#include "oracles.hpp"

namespace {

Eigen::VectorXd scores(std::initializer_list<double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.begin(), Eigen::Index(v.size()));
}

Eigen::VectorXi labels(std::initializer_list<int> v) {
  return Eigen::Map<const Eigen::VectorXi>(v.begin(), Eigen::Index(v.size()));
}

struct Case {
  Eigen::VectorXd s;
  Eigen::VectorXi y;
};

Case random_case(std::mt19937_64& rng, int n, bool ties) {
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> level(0, 3);
  Case c{Eigen::VectorXd(n), Eigen::VectorXi(n)};
  for (int i = 0; i < n; ++i) {
    c.s[i] = ties ? level(rng) / 3.0 : u(rng);
    c.y[i] = u(rng) < 0.4 ? 1 : 0;
  }
  c.y[0] = 1;
  c.y[1] = 0;
  return c;
}

std::vector<double> as_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }
std::vector<int> as_vec(const Eigen::VectorXi& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

TEST_CASE("confusion examples") {
  const auto a = lnn::confusion(scores({1, 0}), labels({1, 0}), 0.5);
  CHECK(a == lnn::Confusion{1, 0, 1, 0});
  const auto b = lnn::confusion(scores({1, 1}), labels({0, 0}), 0.5);
  CHECK(b.fp == 2);
  CHECK(lnn::confusion(scores({0.5}), labels({1}), 0.5).tp == 1);
  CHECK_THROWS_AS(lnn::confusion(scores({1}), labels({1, 0}), 0.5), lnn::StructuralError);
  CHECK_THROWS_AS(lnn::confusion(scores({1}), labels({2}), 0.5), lnn::StructuralError);
}

TEST_CASE("confusion matches an independent recount") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 50; ++t) {
    const auto c = random_case(rng, 50, t % 2 == 0);
    const double threshold = t % 2 ? 0.5 : 1.0 / 3.0;
    const auto got = lnn::confusion(c.s, c.y, threshold);
    const auto ref = oracle::recount(as_vec(c.s), as_vec(c.y), threshold);
    CHECK(got.tp == ref.tp);
    CHECK(got.fp == ref.fp);
    CHECK(got.tn == ref.tn);
    CHECK(got.fn == ref.fn);
    CHECK(got.total() == 50);
  }
}

TEST_CASE("AUC examples") {
  CHECK(lnn::roc_auc(scores({0.9, 0.8, 0.1, 0.2}), labels({1, 1, 0, 0})) == 1.0);
  CHECK(lnn::roc_auc(scores({0.4, 0.4, 0.4, 0.4}), labels({1, 0, 1, 0})) == 0.5);
  CHECK(lnn::roc_auc(scores({0.1, 0.9}), labels({1, 0})) == 0.0);
  CHECK_THROWS_AS(lnn::roc_auc(scores({0.1, 0.9}), labels({1, 1})), lnn::MetricError);
  CHECK_THROWS_AS(lnn::roc_auc(scores({0.1, 0.9}), labels({0, 0})), lnn::MetricError);
}

TEST_CASE("rank AUC equals pair counting and the trapezoidal ROC area") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + int(rng() % 49);
    const auto c = random_case(rng, n, t % 3 == 0);
    const double rank = lnn::roc_auc(c.s, c.y);
    CHECK(rank == oracle::pair_count_auc(as_vec(c.s), as_vec(c.y)));
    CHECK(rank == doctest::Approx(lnn::roc_auc_trapezoid(c.s, c.y)).epsilon(1e-12));
  }
}

TEST_CASE("AUC is invariant under strictly monotone transforms") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 50; ++t) {
    const auto c = random_case(rng, 40, t % 2 == 0);
    const Eigen::VectorXd squashed = (3.0 * c.s.array()).exp() / 7.0;
    CHECK(lnn::roc_auc(c.s, c.y) == lnn::roc_auc(squashed, c.y));
  }
}

TEST_CASE("ROC curve shape") {
  const auto roc = lnn::roc_curve(scores({0.9, 0.5, 0.5, 0.1}), labels({1, 0, 1, 0}));
  REQUIRE(roc.size() == 4);
  CHECK(roc.front().tpr == 0.0);
  CHECK(roc[1] == lnn::RocPoint{0.9, 0.0, 0.5});
  CHECK(roc[2] == lnn::RocPoint{0.5, 0.5, 1.0});
  CHECK(roc.back() == lnn::RocPoint{0.1, 1.0, 1.0});
}

TEST_CASE("evaluation report") {
  const auto perfect = lnn::evaluate(scores({1, 0, 1, 0}), labels({1, 0, 1, 0}), 0.5);
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);
  CHECK(perfect.auc == 1.0);
  CHECK(!perfect.precision_degenerate);

  const auto zero = lnn::evaluate(scores({0, 0, 0}), labels({1, 0, 1}), 0.5);
  CHECK(zero.recall == 0.0);
  CHECK(zero.precision == 0.0);
  CHECK(zero.precision_degenerate);
  CHECK(zero.f1 == 0.0);
  CHECK(zero.auc == 0.5);

  std::mt19937_64 rng(15);
  for (int t = 0; t < 50; ++t) {
    const auto c = random_case(rng, 30, false);
    const auto r = lnn::evaluate(c.s, c.y, 0.5);
    CHECK(r.counts.total() == 30);
    CHECK(r.accuracy == double(r.counts.tp + r.counts.tn) / 30.0);
    if (r.precision + r.recall > 0) {
      CHECK(r.f1 == doctest::Approx(2 * r.precision * r.recall / (r.precision + r.recall)));
    }
    for (double m : {r.accuracy, r.precision, r.recall, r.f1, r.auc}) {
      CHECK(m >= 0.0);
      CHECK(m <= 1.0);
    }
  }
  CHECK_THROWS_AS(lnn::evaluate(Eigen::VectorXd(0), Eigen::VectorXi(0), 0.5), lnn::MetricError);
}

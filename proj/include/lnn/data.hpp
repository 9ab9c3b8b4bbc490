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

#ifndef LNN_DATA_HPP
#define LNN_DATA_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lnn/expression.hpp"
#include "lnn/schema.hpp"

namespace lnn {

/// One patient in raw units, features in schema order.
struct RawRecord {
  std::array<double, kFeatureCount> features{};
  int outcome = 0;

  double operator[](Feature f) const { return features[std::size_t(f)]; }

  friend bool operator==(const RawRecord&, const RawRecord&) = default;
};

/// Reads a Pima-format CSV. The header must name the nine expected columns
/// in any order and case. Throws IngestError naming the row and column of
/// the first bad cell. Values above 1.5x the canonical maxima are accepted
/// with a warning appended to `warnings` (when given).
std::vector<RawRecord> load_csv(const std::filesystem::path& path,
                                std::vector<std::string>* warnings = nullptr);

/// Writes records with the canonical header; doubles round-trip exactly.
void write_csv(const std::filesystem::path& path,
               const std::vector<RawRecord>& records);

struct Split {
  std::vector<RawRecord> train;
  std::vector<RawRecord> test;
};

/// Seeded uniform shuffle, then the first round(n * test_fraction) records
/// (at least 1, at most n - 1) become the test partition. Not stratified.
Split split(const std::vector<RawRecord>& records, double test_fraction,
            std::uint64_t seed);

/// Zeros in glucose, blood pressure, skin thickness, insulin and BMI are
/// physiologically impossible; these are the columns median imputation
/// touches.
inline constexpr std::array<Feature, 5> kZeroMeansMissing{
    Feature::kGlucose, Feature::kBloodPressure, Feature::kSkinThickness,
    Feature::kInsulin, Feature::kBmi};

/// Min-max statistics fitted on a training partition.
struct NormalizationStats {
  std::array<double, kFeatureCount> min{};
  std::array<double, kFeatureCount> max{};
  /// Training medians of the non-zero values of kZeroMeansMissing columns,
  /// present only when imputation is enabled.
  std::optional<std::array<double, kFeatureCount>> impute_medians;

  /// (x - min) / (max - min) clipped to [0, 1]; 0 for a constant feature.
  double scale(Eigen::Index feature, double raw) const;
  /// min + v (max - min).
  double unscale(Eigen::Index feature, double normalized) const;
  /// Imputes (if enabled) and scales a whole record.
  FeatureRow apply(const RawRecord& record) const;

  friend bool operator==(const NormalizationStats&,
                         const NormalizationStats&) = default;
};

enum class Provenance { kTrain, kTest, kSynthetic };

std::string_view to_string(Provenance p);

struct Dataset {
  FeatureMatrix features;  ///< every entry in [0, 1]
  Eigen::VectorXi labels;
  Provenance provenance = Provenance::kTrain;
  NormalizationStats stats;

  Eigen::Index size() const noexcept { return features.rows(); }
  Eigen::Index positives() const { return labels.sum(); }
};

struct NormalizedSplit {
  Dataset train;
  Dataset other;
  NormalizationStats stats;
  std::vector<std::string> warnings;
};

/// Scales records with fixed statistics.
Dataset apply_stats(const std::vector<RawRecord>& records,
                    const NormalizationStats& stats, Provenance provenance);

/// Fits statistics on `train` only and applies them to both partitions.
NormalizedSplit normalize(const std::vector<RawRecord>& train,
                          const std::vector<RawRecord>& other,
                          bool impute_median = false);

/// Dataset with features ~ U[0,1]^8 and label 1 iff the rule's output
/// exceeds 0.5, each label then flipped with probability `noise`.
Dataset synthesize(Eigen::Index n, std::uint64_t seed, const Expression& rule,
                   double noise);

/// Inverse of a dataset's scaling (exact for in-range values).
std::vector<RawRecord> to_records(const Dataset& data);

}  // namespace lnn

#endif  // LNN_DATA_HPP

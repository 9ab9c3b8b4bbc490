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

#ifndef LNN_SCHEMA_HPP
#define LNN_SCHEMA_HPP

#include <Eigen/Core>

#include <array>
#include <optional>
#include <string_view>

namespace lnn {

/// The eight Pima features, in CSV column order.
enum class Feature : int {
  kPregnancies = 0,
  kGlucose,
  kBloodPressure,
  kSkinThickness,
  kInsulin,
  kBmi,
  kPedigree,
  kAge,
};

inline constexpr Eigen::Index kFeatureCount = 8;

/// Row-major so that a patient is a contiguous row.
using FeatureMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, kFeatureCount, Eigen::RowMajor>;
using FeatureRow = Eigen::Matrix<double, 1, kFeatureCount>;

struct FeatureInfo {
  std::string_view dsl_name;    ///< name in the rule language
  std::string_view csv_column;  ///< CSV header
  char letter;                  ///< diagram code
  std::string_view description;
  double reference_max;         ///< largest value in the canonical file
};

inline constexpr std::array<FeatureInfo, kFeatureCount> kFeatures{{
    {"preg", "Pregnancies", 'P', "pregnancies", 17.0},
    {"gluc", "Glucose", 'G', "glucose", 199.0},
    {"bp", "BloodPressure", 'T', "blood pressure", 122.0},
    {"skin", "SkinThickness", 'S', "skin thickness", 99.0},
    {"insulin", "Insulin", 'I', "insulin", 846.0},
    {"bmi", "BMI", 'B', "BMI", 67.1},
    {"dpf", "DiabetesPedigreeFunction", 'D', "DPF", 2.42},
    {"age", "Age", 'A', "age", 81.0},
}};

inline constexpr std::string_view kOutcomeColumn = "Outcome";

inline const FeatureInfo& feature_info(Eigen::Index index) {
  return kFeatures.at(std::size_t(index));
}

/// Case-insensitive lookup of a rule-language feature name.
inline std::optional<Eigen::Index> feature_by_name(std::string_view name) {
  for (std::size_t i = 0; i < kFeatures.size(); ++i) {
    const auto ref = kFeatures[i].dsl_name;
    if (ref.size() != name.size()) continue;
    bool same = true;
    for (std::size_t c = 0; c < ref.size() && same; ++c) {
      char ch = name[c];
      if (ch >= 'A' && ch <= 'Z') ch = char(ch - 'A' + 'a');
      same = ch == ref[c];
    }
    if (same) return Eigen::Index(i);
  }
  return std::nullopt;
}

}  // namespace lnn

#endif  // LNN_SCHEMA_HPP

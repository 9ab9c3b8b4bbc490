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

#include "lnn/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "lnn/error.hpp"
#include "lnn/random.hpp"

namespace lnn {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::optional<double> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string shortest(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

std::vector<RawRecord> load_csv(const std::filesystem::path& path,
                                std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path.string());

  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++line_no;
    have_header = !trim(line).empty();
  }
  if (!have_header) throw IngestError(path.string() + ": empty file, no header row");

  // column position -> feature index, or kFeatureCount for the outcome
  const auto header = split_fields(line);
  std::array<int, kFeatureCount + 1> position;
  position.fill(-1);
  for (std::size_t col = 0; col < header.size(); ++col) {
    int slot = -1;
    for (std::size_t f = 0; f < kFeatures.size(); ++f) {
      if (iequals(header[col], kFeatures[f].csv_column)) slot = int(f);
    }
    if (iequals(header[col], kOutcomeColumn)) slot = int(kFeatureCount);
    if (slot < 0) {
      throw IngestError(path.string() + ": unexpected column '" +
                        std::string(header[col]) + "' in header");
    }
    if (position[std::size_t(slot)] != -1) {
      throw IngestError(path.string() + ": duplicate column '" +
                        std::string(header[col]) + "'");
    }
    position[std::size_t(slot)] = int(col);
  }
  for (std::size_t slot = 0; slot < position.size(); ++slot) {
    if (position[slot] == -1) {
      const std::string name = slot < kFeatures.size()
                                   ? std::string(kFeatures[slot].csv_column)
                                   : std::string(kOutcomeColumn);
      throw IngestError(path.string() + ": missing column '" + name + "'");
    }
  }

  std::vector<RawRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    const auto where = path.string() + ": line " + std::to_string(line_no) +
                       " (record " + std::to_string(records.size() + 1) + ")";
    if (fields.size() != header.size()) {
      throw IngestError(where + ": expected " + std::to_string(header.size()) +
                        " fields, found " + std::to_string(fields.size()));
    }
    RawRecord record;
    for (std::size_t slot = 0; slot < position.size(); ++slot) {
      const auto cell = fields[std::size_t(position[slot])];
      const std::string column = slot < kFeatures.size()
                                     ? std::string(kFeatures[slot].csv_column)
                                     : std::string(kOutcomeColumn);
      const auto value = parse_number(cell);
      if (!value) {
        throw IngestError(where + ", column " + column +
                          ": non-numeric value '" + std::string(cell) + "'");
      }
      if (slot == kFeatures.size()) {
        if (*value != 0.0 && *value != 1.0) {
          throw IngestError(where + ", column " + column +
                            ": outcome must be 0 or 1");
        }
        record.outcome = int(*value);
      } else {
        if (*value < 0.0) {
          throw IngestError(where + ", column " + column +
                            ": negative value " + std::string(cell));
        }
        if (warnings && *value > 1.5 * kFeatures[slot].reference_max) {
          warnings->push_back(where + ", column " + column + ": value " +
                              std::string(cell) +
                              " is far above the usual range");
        }
        record.features[slot] = *value;
      }
    }
    records.push_back(record);
  }
  return records;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<RawRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write " + path.string());
  for (std::size_t f = 0; f < kFeatures.size(); ++f) {
    out << kFeatures[f].csv_column << ',';
  }
  out << kOutcomeColumn << '\n';
  for (const auto& r : records) {
    for (double v : r.features) out << shortest(v) << ',';
    out << r.outcome << '\n';
  }
  if (!out) throw IngestError("failed writing " + path.string());
}

Split split(const std::vector<RawRecord>& records, double test_fraction,
            std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test fraction must lie strictly between 0 and 1");
  }
  const std::size_t n = records.size();
  if (n < 2) {
    throw StructuralError("cannot split " + std::to_string(n) +
                          " records into train and test partitions");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order.begin(), order.end());

  auto n_test = std::size_t(std::llround(double(n) * test_fraction));
  n_test = std::clamp<std::size_t>(n_test, 1, n - 1);

  Split out;
  out.test.reserve(n_test);
  out.train.reserve(n - n_test);
  for (std::size_t i = 0; i < n; ++i) {
    (i < n_test ? out.test : out.train).push_back(records[order[i]]);
  }
  return out;
}

double NormalizationStats::scale(Eigen::Index feature, double raw) const {
  const auto f = std::size_t(feature);
  const double range = max[f] - min[f];
  if (!(range > 0.0)) return 0.0;
  return std::clamp((raw - min[f]) / range, 0.0, 1.0);
}

double NormalizationStats::unscale(Eigen::Index feature,
                                   double normalized) const {
  const auto f = std::size_t(feature);
  return min[f] + normalized * (max[f] - min[f]);
}

FeatureRow NormalizationStats::apply(const RawRecord& record) const {
  FeatureRow row;
  for (Eigen::Index f = 0; f < kFeatureCount; ++f) {
    double raw = record.features[std::size_t(f)];
    if (impute_medians && raw == 0.0) raw = (*impute_medians)[std::size_t(f)];
    row[f] = scale(f, raw);
  }
  return row;
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kTrain:
      return "train";
    case Provenance::kTest:
      return "test";
    case Provenance::kSynthetic:
      return "synthetic";
  }
  return "?";
}

Dataset apply_stats(const std::vector<RawRecord>& records,
                    const NormalizationStats& stats, Provenance provenance) {
  Dataset out;
  out.features.resize(Eigen::Index(records.size()), kFeatureCount);
  out.labels.resize(Eigen::Index(records.size()));
  for (std::size_t r = 0; r < records.size(); ++r) {
    out.features.row(Eigen::Index(r)) = stats.apply(records[r]);
    out.labels[Eigen::Index(r)] = records[r].outcome;
  }
  out.provenance = provenance;
  out.stats = stats;
  return out;
}

NormalizedSplit normalize(const std::vector<RawRecord>& train,
                          const std::vector<RawRecord>& other,
                          bool impute_median) {
  if (train.empty()) throw StructuralError("cannot normalize an empty training set");

  NormalizedSplit out;
  NormalizationStats& stats = out.stats;

  if (impute_median) {
    std::array<double, kFeatureCount> medians{};
    // Columns outside kZeroMeansMissing keep 0 as a real value; a median of
    // 0 there makes the substitution a no-op.
    for (Feature f : kZeroMeansMissing) {
      std::vector<double> present;
      for (const auto& r : train) {
        if (r[f] != 0.0) present.push_back(r[f]);
      }
      medians[std::size_t(f)] = median(std::move(present));
    }
    stats.impute_medians = medians;
  }

  for (std::size_t f = 0; f < kFeatures.size(); ++f) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& r : train) {
      double v = r.features[f];
      if (stats.impute_medians && v == 0.0) v = (*stats.impute_medians)[f];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    stats.min[f] = lo;
    stats.max[f] = hi;
    if (hi == lo) {
      out.warnings.push_back("feature " + std::string(kFeatures[f].dsl_name) +
                             " is constant in the training set; it normalizes to 0");
    }
  }

  out.train = apply_stats(train, stats, Provenance::kTrain);
  out.other = apply_stats(other, stats, Provenance::kTest);
  return out;
}

Dataset synthesize(Eigen::Index n, std::uint64_t seed, const Expression& rule,
                   double noise) {
  if (n < 1) throw ConfigError("synthetic dataset needs at least one record");
  if (!(noise >= 0.0 && noise < 0.5)) {
    throw ConfigError("label noise must lie in [0, 0.5)");
  }
  Rng rng(seed);
  Dataset out;
  out.provenance = Provenance::kSynthetic;
  out.stats.min.fill(0.0);
  out.stats.max.fill(1.0);
  out.features.resize(n, kFeatureCount);
  out.labels.resize(n);
  ForwardTrace trace;
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index f = 0; f < kFeatureCount; ++f) out.features(r, f) = rng.uniform();
    forward(rule, out.features.row(r), trace);
    int label = trace.values[0] > 0.5 ? 1 : 0;
    if (rng.bernoulli(noise)) label = 1 - label;
    out.labels[r] = label;
  }
  return out;
}

std::vector<RawRecord> to_records(const Dataset& data) {
  std::vector<RawRecord> out(std::size_t(data.size()));
  for (Eigen::Index r = 0; r < data.size(); ++r) {
    auto& rec = out[std::size_t(r)];
    for (Eigen::Index f = 0; f < kFeatureCount; ++f) {
      rec.features[std::size_t(f)] = data.stats.unscale(f, data.features(r, f));
    }
    rec.outcome = data.labels[r];
  }
  return out;
}

}  // namespace lnn

#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "firewatch/sample.hpp"
#include "firewatch/wire.hpp"

namespace firewatch {

inline constexpr std::array<const char*, 3> kFeatureNames = {"Temp", "Smoke", "Flame"};
inline constexpr const char* kLabelColumn = "Label";

/// Labeled samples in the Temp,Smoke,Flame,Label schema.
struct Dataset {
  std::vector<LabeledSample> rows;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  std::vector<ClassLabel> labels() const;
  /// Column `feature` (0 = Temp, 1 = Smoke, 2 = Flame) as a series.
  std::vector<double> column(std::size_t feature) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

FeatureVector to_features(const SensorReading& r);

// CSV with header `Temp,Smoke,Flame,Label`, LF line endings, '.' decimals.
// A header-only file is an empty dataset. Schema violations throw
// SchemaError naming the line and column.
Dataset read_dataset(std::istream& in);
void write_dataset(const Dataset& d, std::ostream& out);
Dataset load_dataset(const std::string& path);
void save_dataset(const Dataset& d, const std::string& path);

/// Readings from either a labeled dataset (labels ignored) or a
/// three-column Temp,Smoke,Flame log.
std::vector<SensorReading> load_readings(const std::string& path);

std::string csv_row(const LabeledSample& s);
std::string csv_row(const SensorReading& r);  ///< unlabeled, three columns

/// Appends rows to a CSV file, writing the header if the file is new or
/// empty and verifying it otherwise. `labeled = false` uses the three-column
/// `Temp,Smoke,Flame` reading log.
class CsvAppender {
 public:
  CsvAppender(const std::string& path, bool labeled);

  void append(const SensorReading& r, ClassLabel label);
  void append(const SensorReading& r);

 private:
  void write_line(const std::string& line);

  std::string path_;
  bool labeled_;
  std::ofstream out_;
};

struct SplitSpec {
  double train_fraction = 0.6;
  double test_fraction = 0.2;
  double validation_fraction = 0.2;
  std::uint64_t rng_seed = 0;
  bool stratified = false;

  void validate() const;
};

struct SplitResult {
  Dataset train;
  Dataset test;
  Dataset validation;
};

/// Shuffled partition. Test and validation get floor(fraction * n) rows and
/// train gets the rest; each part keeps the input's relative row order.
SplitResult split(const Dataset& d, const SplitSpec& spec);

struct FeatureRange {
  double min;
  double max;
};

/// Fires (label 1) iff sum_i weights[i] * x[i] >= threshold.
struct LabelRule {
  std::array<double, 3> weights{};
  double threshold = 0.0;

  /// Each feature normalised to [0, 1] over its range; fires when the
  /// normalised sum reaches `normalized_threshold`.
  static LabelRule normalized_sum(const std::array<FeatureRange, 3>& ranges,
                                  double normalized_threshold);

  ClassLabel apply(const SensorReading& r) const;
};

/// Observed envelope of the Table 1 sample.
inline constexpr std::array<FeatureRange, 3> kDefaultRanges = {
    FeatureRange{15.0, 50.0}, FeatureRange{27.0, 95.0}, FeatureRange{208.0, 921.0}};
inline constexpr double kDefaultNormalizedThreshold = 2.1;

struct GeneratorParams {
  std::size_t n = 700;
  std::array<FeatureRange, 3> ranges = kDefaultRanges;
  LabelRule rule = LabelRule::normalized_sum(kDefaultRanges, kDefaultNormalizedThreshold);
  std::uint64_t rng_seed = 0;

  /// min <= max per feature (a collapsed range pins the feature), n >= 1.
  void validate() const;
};

/// Infinite deterministic stream of uniform readings.
class SyntheticSource {
 public:
  explicit SyntheticSource(const GeneratorParams& params);

  SensorReading next_reading();
  LabeledSample next_sample();

 private:
  double uniform(const FeatureRange& r);

  GeneratorParams params_;
  std::mt19937_64 rng_;
};

Dataset generate_synthetic(const GeneratorParams& params);

}  // namespace firewatch

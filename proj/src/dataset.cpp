#include "firewatch/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <istream>
#include <numeric>
#include <ostream>
#include <string_view>

#include "firewatch/error.hpp"
#include "firewatch/numeric.hpp"

namespace firewatch {

namespace {

constexpr std::string_view kLabeledHeader = "Temp,Smoke,Flame,Label";
constexpr std::string_view kReadingHeader = "Temp,Smoke,Flame";

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    cells.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

std::uint64_t next_index(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

// Fisher-Yates with an explicit index draw so the permutation does not depend
// on the standard library's shuffle algorithm.
void shuffle(std::vector<std::size_t>& idx, std::mt19937_64& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    std::swap(idx[i - 1], idx[next_index(rng, i)]);
  }
}

std::size_t part_size(double fraction, std::size_t n) {
  // The small nudge keeps e.g. 0.29 * 100 = 28.999999999999996 at 29.
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

Dataset gather(const Dataset& d, std::vector<std::size_t> idx) {
  std::sort(idx.begin(), idx.end());
  Dataset out;
  out.rows.reserve(idx.size());
  for (auto i : idx) out.rows.push_back(d.rows[i]);
  return out;
}

}  // namespace

std::vector<ClassLabel> Dataset::labels() const {
  std::vector<ClassLabel> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.label);
  return out;
}

std::vector<double> Dataset::column(std::size_t feature) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.features[feature]);
  return out;
}

FeatureVector to_features(const SensorReading& r) {
  return FeatureVector{r.temperature, r.smoke, r.flame};
}

Dataset read_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("line 1: missing header, expected " + std::string(kLabeledHeader));
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kLabeledHeader) {
    throw SchemaError("line 1: header is '" + line + "', expected '" + std::string(kLabeledHeader) + "'");
  }

  Dataset d;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto where = "line " + std::to_string(line_no);
    const auto cells = split_csv(line);
    if (cells.size() != 4) {
      throw SchemaError(where + ": expected 4 columns, found " + std::to_string(cells.size()));
    }
    std::vector<double> x(3);
    for (std::size_t c = 0; c < 3; ++c) {
      const auto v = parse_real(trim(cells[c]));
      if (!v) {
        throw SchemaError(where + ", column " + kFeatureNames[c] + ": '" + std::string(cells[c]) +
                          "' is not a finite number");
      }
      x[c] = *v;
    }
    const auto label = trim(cells[3]);
    if (label != "0" && label != "1") {
      throw SchemaError(where + ", column Label: '" + std::string(cells[3]) + "' is not 0 or 1");
    }
    d.rows.push_back({FeatureVector(std::move(x)), label == "1" ? ClassLabel::fire : ClassLabel::no_fire});
  }
  return d;
}

std::vector<SensorReading> load_readings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::string header;
  std::getline(in, header);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  std::vector<SensorReading> out;
  if (header == kLabeledHeader) {
    for (const auto& row : load_dataset(path).rows) {
      out.push_back({row.features[0], row.features[1], row.features[2]});
    }
    return out;
  }
  if (header != kReadingHeader) {
    throw SchemaError(path + ": line 1: header is '" + header + "', expected '" +
                      std::string(kReadingHeader) + "' or '" + std::string(kLabeledHeader) + "'");
  }
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto where = path + ": line " + std::to_string(line_no);
    const auto cells = split_csv(line);
    if (cells.size() != 3) {
      throw SchemaError(where + ": expected 3 columns, found " + std::to_string(cells.size()));
    }
    std::array<double, 3> x{};
    for (std::size_t c = 0; c < 3; ++c) {
      const auto v = parse_real(trim(cells[c]));
      if (!v) {
        throw SchemaError(where + ", column " + kFeatureNames[c] + ": '" + std::string(cells[c]) +
                          "' is not a finite number");
      }
      x[c] = *v;
    }
    out.push_back({x[0], x[1], x[2]});
  }
  return out;
}

std::string csv_row(const LabeledSample& s) {
  std::string out;
  for (std::size_t c = 0; c < s.features.size(); ++c) {
    out += format_real(s.features[c]);
    out += ',';
  }
  out += s.label == ClassLabel::fire ? '1' : '0';
  return out;
}

std::string csv_row(const SensorReading& r) {
  return format_real(r.temperature) + ',' + format_real(r.smoke) + ',' + format_real(r.flame);
}

void write_dataset(const Dataset& d, std::ostream& out) {
  out << kLabeledHeader << '\n';
  for (const auto& row : d.rows) {
    if (row.features.size() != 3) throw InvalidInput("dataset rows must have exactly 3 features");
    out << csv_row(row) << '\n';
  }
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open dataset '" + path + "'");
  try {
    return read_dataset(in);
  } catch (const SchemaError& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void save_dataset(const Dataset& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  write_dataset(d, out);
  if (!out.flush()) throw ConfigError("failed writing '" + path + "'");
}

CsvAppender::CsvAppender(const std::string& path, bool labeled) : path_(path), labeled_(labeled) {
  const std::string_view header = labeled ? kLabeledHeader : kReadingHeader;
  std::error_code ec;
  const bool has_content = std::filesystem::exists(path, ec) && std::filesystem::file_size(path, ec) > 0;
  if (has_content) {
    std::ifstream in(path, std::ios::binary);
    std::string first;
    std::getline(in, first);
    if (!first.empty() && first.back() == '\r') first.pop_back();
    if (first != header) {
      throw ConfigError("'" + path + "' has header '" + first + "', expected '" + std::string(header) + "'");
    }
  }
  out_.open(path, std::ios::binary | std::ios::app);
  if (!out_) throw ConfigError("cannot open '" + path + "' for appending");
  if (!has_content) write_line(std::string(header));
}

void CsvAppender::write_line(const std::string& line) {
  out_ << line << '\n';
  if (!out_.flush()) throw ConfigError("failed writing '" + path_ + "'");
}

void CsvAppender::append(const SensorReading& r, ClassLabel label) {
  if (!labeled_) throw InvalidInput("reading log does not take labels");
  write_line(csv_row(r) + ',' + (label == ClassLabel::fire ? '1' : '0'));
}

void CsvAppender::append(const SensorReading& r) {
  if (labeled_) throw InvalidInput("labeled dataset requires a label");
  write_line(csv_row(r));
}

void SplitSpec::validate() const {
  for (double f : {train_fraction, test_fraction, validation_fraction}) {
    if (!(f > 0.0 && f < 1.0)) throw ConfigError("split fractions must lie strictly between 0 and 1");
  }
  if (std::abs(train_fraction + test_fraction + validation_fraction - 1.0) > 1e-9) {
    throw ConfigError("split fractions must sum to 1");
  }
}

SplitResult split(const Dataset& d, const SplitSpec& spec) {
  spec.validate();
  if (d.empty()) throw InvalidInput("cannot split an empty dataset");
  const std::size_t n = d.size();
  const std::size_t n_test = part_size(spec.test_fraction, n);
  const std::size_t n_val = part_size(spec.validation_fraction, n);
  std::mt19937_64 rng(spec.rng_seed);

  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;
  std::vector<std::size_t> val_idx;

  if (!spec.stratified) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    shuffle(idx, rng);
    test_idx.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
    val_idx.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_test),
                   idx.begin() + static_cast<std::ptrdiff_t>(n_test + n_val));
    train_idx.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_test + n_val), idx.end());
  } else {
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < n; ++i) (d.rows[i].label == ClassLabel::fire ? pos : neg).push_back(i);
    shuffle(pos, rng);
    shuffle(neg, rng);
    const double p = static_cast<double>(pos.size()) / static_cast<double>(n);
    std::size_t pos_used = 0;
    std::size_t neg_used = 0;
    auto take = [&](std::size_t size, std::vector<std::size_t>& part) {
      std::size_t want_pos = static_cast<std::size_t>(std::llround(p * static_cast<double>(size)));
      want_pos = std::min(want_pos, pos.size() - pos_used);
      std::size_t want_neg = std::min(size - want_pos, neg.size() - neg_used);
      // Top up from positives if negatives ran short.
      want_pos = std::min(size - want_neg, pos.size() - pos_used);
      for (std::size_t k = 0; k < want_pos; ++k) part.push_back(pos[pos_used++]);
      for (std::size_t k = 0; k < want_neg; ++k) part.push_back(neg[neg_used++]);
    };
    take(n_test, test_idx);
    take(n_val, val_idx);
    while (pos_used < pos.size()) train_idx.push_back(pos[pos_used++]);
    while (neg_used < neg.size()) train_idx.push_back(neg[neg_used++]);
  }

  return SplitResult{gather(d, std::move(train_idx)), gather(d, std::move(test_idx)),
                     gather(d, std::move(val_idx))};
}

LabelRule LabelRule::normalized_sum(const std::array<FeatureRange, 3>& ranges,
                                    double normalized_threshold) {
  LabelRule rule;
  rule.threshold = normalized_threshold;
  for (std::size_t i = 0; i < 3; ++i) {
    const double width = ranges[i].max - ranges[i].min;
    rule.weights[i] = width > 0.0 ? 1.0 / width : 0.0;
    rule.threshold += ranges[i].min * rule.weights[i];
  }
  return rule;
}

ClassLabel LabelRule::apply(const SensorReading& r) const {
  const double score = weights[0] * r.temperature + weights[1] * r.smoke + weights[2] * r.flame;
  return score >= threshold ? ClassLabel::fire : ClassLabel::no_fire;
}

void GeneratorParams::validate() const {
  if (n < 1) throw ConfigError("generator needs n >= 1");
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const auto& r = ranges[i];
    if (!std::isfinite(r.min) || !std::isfinite(r.max) || r.min > r.max) {
      throw ConfigError(std::string("generator range for ") + kFeatureNames[i] + " is degenerate");
    }
  }
  for (double w : rule.weights) {
    if (!std::isfinite(w)) throw ConfigError("label rule weights must be finite");
  }
  if (std::isnan(rule.threshold)) throw ConfigError("label rule threshold is NaN");
}

SyntheticSource::SyntheticSource(const GeneratorParams& params) : params_(params), rng_(params.rng_seed) {
  params_.validate();
}

double SyntheticSource::uniform(const FeatureRange& r) {
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;  // [0, 1)
  return r.min + (r.max - r.min) * u;
}

SensorReading SyntheticSource::next_reading() {
  SensorReading r;
  r.temperature = uniform(params_.ranges[0]);
  r.smoke = uniform(params_.ranges[1]);
  r.flame = uniform(params_.ranges[2]);
  return r;
}

LabeledSample SyntheticSource::next_sample() {
  const SensorReading r = next_reading();
  return {to_features(r), params_.rule.apply(r)};
}

Dataset generate_synthetic(const GeneratorParams& params) {
  SyntheticSource source(params);
  Dataset d;
  d.rows.reserve(params.n);
  for (std::size_t i = 0; i < params.n; ++i) d.rows.push_back(source.next_sample());
  return d;
}

}  // namespace firewatch

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>

#include "firewatch/error.hpp"
#include "firewatch/numeric.hpp"
#include "firewatch/svm.hpp"

namespace firewatch {

namespace {

constexpr std::string_view kMagic = "firewatch-svm";
constexpr std::string_view kVersion = "v1";

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double real_or_throw(std::string_view text, const std::string& where) {
  const auto v = parse_real(text);
  if (!v) throw SchemaError("model file: " + where + ": '" + std::string(text) + "' is not a finite real");
  return *v;
}

std::string_view field(std::string_view token, std::string_view key) {
  if (token.size() <= key.size() || token.substr(0, key.size()) != key ||
      token[key.size()] != '=') {
    throw SchemaError("model file: header: expected '" + std::string(key) + "=...', got '" +
                      std::string(token) + "'");
  }
  return token.substr(key.size() + 1);
}

std::size_t count_or_throw(std::string_view text, const std::string& where) {
  const double v = real_or_throw(text, where);
  if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
    throw SchemaError("model file: " + where + " must be a nonnegative integer");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

void save_model(const SvmModel& model, std::ostream& out) {
  const auto& s = model.scaling();
  out << kMagic << ' ' << kVersion << " d=" << model.dim()
      << " gamma=" << format_real(model.kernel().gamma) << " C=" << format_real(model.c())
      << " b=" << format_real(model.bias()) << " n_sv=" << model.support_vectors().size()
      << " scale=";
  for (std::size_t f = 0; f < s.dim(); ++f) {
    if (f > 0) out << ';';
    out << format_real(s.mean[f]) << ',' << format_real(s.scale[f]);
  }
  out << '\n';
  for (std::size_t i = 0; i < model.support_vectors().size(); ++i) {
    out << format_real(model.alphas()[i]) << ' ' << format_real(model.signed_labels()[i]);
    for (double v : model.support_vectors()[i].values()) out << ' ' << format_real(v);
    out << '\n';
  }
}

std::string save_model(const SvmModel& model) {
  std::ostringstream out;
  save_model(model, out);
  return out.str();
}

SvmModel load_model(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw SchemaError("model file: empty");
  if (!header.empty() && header.back() == '\r') header.pop_back();

  const auto tokens = split(header, ' ');
  if (tokens.size() != 8 || tokens[0] != kMagic || tokens[1] != kVersion) {
    throw SchemaError("model file: header must start with 'firewatch-svm v1' and carry 6 fields");
  }
  const std::size_t dim = count_or_throw(field(tokens[2], "d"), "header d");
  const double gamma = real_or_throw(field(tokens[3], "gamma"), "header gamma");
  const double c = real_or_throw(field(tokens[4], "C"), "header C");
  const double bias = real_or_throw(field(tokens[5], "b"), "header b");
  const std::size_t n_sv = count_or_throw(field(tokens[6], "n_sv"), "header n_sv");
  if (dim == 0) throw SchemaError("model file: header d must be at least 1");

  FeatureScaling scaling;
  const auto pairs = split(field(tokens[7], "scale"), ';');
  if (pairs.size() != dim) {
    throw SchemaError("model file: header scale has " + std::to_string(pairs.size()) +
                      " entries, expected " + std::to_string(dim));
  }
  for (std::size_t f = 0; f < dim; ++f) {
    const auto ms = split(pairs[f], ',');
    if (ms.size() != 2) throw SchemaError("model file: header scale entry " + std::to_string(f) + " is not m,s");
    scaling.mean.push_back(real_or_throw(ms[0], "scale mean " + std::to_string(f)));
    scaling.scale.push_back(real_or_throw(ms[1], "scale std " + std::to_string(f)));
  }

  std::vector<FeatureVector> svs;
  std::vector<double> alphas;
  std::vector<double> labels;
  std::string line;
  for (std::size_t i = 0; i < n_sv; ++i) {
    const std::string where = "support vector line " + std::to_string(i + 2);
    if (!std::getline(in, line)) throw SchemaError("model file: " + where + " is missing");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto cols = split(line, ' ');
    if (cols.size() != dim + 2) {
      throw SchemaError("model file: " + where + " has " + std::to_string(cols.size()) +
                        " fields, expected " + std::to_string(dim + 2));
    }
    alphas.push_back(real_or_throw(cols[0], where + " alpha"));
    labels.push_back(real_or_throw(cols[1], where + " label"));
    std::vector<double> x;
    for (std::size_t f = 0; f < dim; ++f) {
      x.push_back(real_or_throw(cols[f + 2], where + " feature " + std::to_string(f)));
    }
    svs.emplace_back(std::move(x));
  }
  while (std::getline(in, line)) {
    if (!trim(line).empty()) throw SchemaError("model file: unexpected content after support vectors");
  }

  try {
    return SvmModel(std::move(svs), std::move(alphas), std::move(labels), bias,
                    KernelConfig{gamma}, c, std::move(scaling));
  } catch (const InvalidInput& e) {
    throw SchemaError(std::string("model file: ") + e.what());
  }
}

void save_model_file(const SvmModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  save_model(model, out);
  if (!out.flush()) throw ConfigError("failed writing '" + path + "'");
}

SvmModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open model file '" + path + "'");
  return load_model(in);
}

}  // namespace firewatch

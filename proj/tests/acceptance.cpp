// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "firewatch/cli.hpp"
#include "firewatch/dataset.hpp"
#include "firewatch/error.hpp"
#include "firewatch/ingest.hpp"
#include "firewatch/metrics.hpp"
#include "firewatch/svm.hpp"
#include "firewatch/viz.hpp"
#include "firewatch/wire.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace fw = firewatch;
using fw::testing::TempDir;

namespace {

/// Collects failed checks for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool passed() const { return failed_ == 0; }
  std::string summary() const {
    if (passed()) return std::to_string(checks_) + " checks";
    std::string s = std::to_string(failed_) + "/" + std::to_string(checks_) + " checks failed";
    for (const auto& f : failures_) s += "; " + f;
    return s;
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using Files = std::map<std::string, std::string>;

int run_cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o;
  std::ostringstream e;
  const int code = fw::cli::run(args, o, e);
  if (out) *out = o.str();
  return code;
}

// 1. Metric formulas on the published test counts.
void metric_reproduction(Check& c) {
  const fw::MetricsReport r = fw::metrics(fw::ConfusionMatrix{1, 111, 0, 28});
  c.expect(r.tpr && std::abs(*r.tpr - 1.0 / 29.0) <= 1e-9, "tpr != 1/29");
  c.expect(r.fpr && *r.fpr == 0.0, "fpr != 0");
  c.expect(r.precision && *r.precision == 1.0, "precision != 1");
  c.expect(r.accuracy == 0.8, "accuracy != 0.8 exactly (" + num(r.accuracy) + ")");
  c.expect(r.error_rate == 0.2, "error_rate != 0.2 exactly (" + num(r.error_rate) + ")");
}

// 2. Symmetric two-point instance with a closed-form optimum.
void analytic_dual(Check& c) {
  const std::vector<fw::LabeledSample> data{{fw::FeatureVector{0, 0, 0}, fw::ClassLabel::fire},
                                            {fw::FeatureVector{2, 0, 0}, fw::ClassLabel::no_fire}};
  fw::TrainConfig cfg;
  cfg.c = 10.0;
  cfg.standardize = false;
  const fw::TrainResult r = fw::train(data, fw::KernelConfig{0.25}, cfg);
  const double alpha = 1.0 / (1.0 - std::exp(-1.0));
  c.expect(r.model.alphas().size() == 2, "expected 2 support vectors");
  for (double a : r.model.alphas()) c.expect(std::abs(a - alpha) <= 1e-4, "alpha " + num(a));
  c.expect(std::abs(r.model.bias()) <= 1e-6, "bias " + num(r.model.bias()));
}

// 3. Mutual bracketing against an exhaustive grid over the feasible set.
void grid_dual(Check& c) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> coord(0.0, 2.0);
  const double gammas[] = {0.25, 0.5, 1.0, 2.0};
  const double cs[] = {0.5, 1.0, 2.0, 5.0, 10.0};
  for (int inst = 0; inst < 20; ++inst) {
    std::vector<fw::LabeledSample> data;
    std::vector<fw::oracle::Point> xs;
    std::vector<double> ys;
    for (int i = 0; i < 4; ++i) {
      const fw::oracle::Point p{coord(rng), coord(rng), coord(rng)};
      const bool fire = i == 0 ? true : i == 1 ? false : (rng() & 1) != 0;
      data.push_back({fw::FeatureVector{p[0], p[1], p[2]}, fire ? fw::ClassLabel::fire : fw::ClassLabel::no_fire});
      xs.push_back(p);
      ys.push_back(fire ? 1.0 : -1.0);
    }
    const fw::KernelConfig kernel{gammas[inst % 4]};
    fw::TrainConfig cfg;
    cfg.c = cs[inst % 5];
    cfg.standardize = false;
    cfg.rng_seed = static_cast<std::uint64_t>(inst);
    const fw::TrainResult r = fw::train(data, kernel, cfg);

    // Standardization is off, so support vectors are the raw points.
    std::vector<double> alphas(4, 0.0);
    for (std::size_t s = 0; s < r.model.alphas().size(); ++s) {
      for (std::size_t i = 0; i < 4; ++i) {
        if (data[i].features == r.model.support_vectors()[s]) alphas[i] = r.model.alphas()[s];
      }
    }
    const double trained = fw::dual_objective(alphas, data, kernel);
    const double grid = fw::oracle::grid_dual_optimum(xs, ys, kernel.gamma, cfg.c, 60, 8);
    const std::string tag = "instance " + std::to_string(inst) + ": trained " + num(trained) + ", grid " + num(grid);
    c.expect(trained >= grid - 1e-4, tag);
    c.expect(grid >= trained - 1e-3, tag);
  }
}

// 4. Feasibility, margin KKT and accuracy on the Table 1 sample.
void kkt_suite(Check& c, const TempDir& dir, Files& files) {
  const fw::Dataset d = fw::load_dataset(fw::testing::table1_path());
  const fw::TrainConfig cfg;
  const fw::TrainResult r = fw::train(d.rows, fw::KernelConfig{1.0 / 3.0}, cfg);
  const fw::SvmModel& m = r.model;
  c.expect(r.status == fw::TrainStatus::converged, "status " + fw::to_string(r.status));

  double balance = 0.0;
  for (std::size_t i = 0; i < m.alphas().size(); ++i) {
    c.expect(m.alphas()[i] >= 0.0 && m.alphas()[i] <= cfg.c, "alpha outside box");
    balance += m.alphas()[i] * m.signed_labels()[i];
  }
  c.expect(std::abs(balance) <= 1e-3, "sum alpha*y = " + num(balance));

  for (std::size_t i = 0; i < m.alphas().size(); ++i) {
    if (!(m.alphas()[i] > 0.0 && m.alphas()[i] < cfg.c)) continue;
    std::vector<double> raw(3);
    for (std::size_t f = 0; f < 3; ++f) raw[f] = m.support_vectors()[i][f] * m.scaling().scale[f] + m.scaling().mean[f];
    const double margin = m.signed_labels()[i] * fw::decision_value(m, fw::FeatureVector(raw));
    c.expect(std::abs(margin - 1.0) <= 1e-3, "margin residual " + num(margin - 1.0));
  }

  std::size_t correct = 0;
  for (const auto& row : d.rows) correct += fw::predict(m, row.features) == row.label ? 1 : 0;
  const double acc = static_cast<double>(correct) / static_cast<double>(d.size());
  c.expect(acc > 47.0 / 58.0, "training accuracy " + num(acc));

  fw::save_model_file(m, dir.file("table1_model.txt"));
  files["table1_model.txt"] = fw::testing::read_file(dir.file("table1_model.txt"));
}

// 5. ROC area against pair counting, plus the degenerate cases.
void roc_oracle(Check& c) {
  std::mt19937_64 rng(5150);
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t n = 2 + rng() % 11;
    const int levels = 1 + static_cast<int>(rng() % 8);
    std::vector<double> scores;
    std::vector<int> ints;
    std::vector<fw::ClassLabel> labels;
    for (std::size_t i = 0; i < n; ++i) {
      scores.push_back(static_cast<double>(rng() % levels) / levels);
      ints.push_back(i == 0 ? 1 : i == 1 ? 0 : static_cast<int>(rng() & 1));
      labels.push_back(fw::label_from_int(ints.back()));
    }
    const double auc = fw::roc(scores, labels).auc;
    const double ref = fw::oracle::pair_counting_auc(scores, ints);
    c.expect(std::abs(auc - ref) <= 1e-9, "instance " + std::to_string(inst) + ": " + num(auc) + " vs " + num(ref));
  }
  const std::vector<fw::ClassLabel> y{fw::ClassLabel::fire, fw::ClassLabel::no_fire, fw::ClassLabel::fire,
                                      fw::ClassLabel::no_fire};
  c.expect(fw::roc(std::vector<double>{0.9, 0.4, 0.6, 0.1}, y).auc == 1.0, "separated scores");
  c.expect(fw::roc(std::vector<double>{0.3, 0.3, 0.3, 0.3}, y).auc == 0.5, "constant scores");
}

// 6. Wire parser round trip, delimiter rules and noise robustness.
void parser_conformance(Check& c) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::uniform_int_distribution<int> e(-30, 30);
  for (int i = 0; i < 1000; ++i) {
    const fw::SensorReading r{u(rng), std::ldexp(u(rng), e(rng)), std::round(u(rng) * 1000) / 1000};
    bool ok = false;
    try {
      ok = fw::parse_reading(fw::format_reading(r)) == r;
    } catch (const fw::Error&) {
    }
    c.expect(ok, "round trip of " + fw::format_reading(r));
  }

  auto kind = [](std::string_view msg) -> std::optional<fw::ParseErrorKind> {
    try {
      fw::parse_reading(msg);
    } catch (const fw::ParseError& err) {
      return err.kind();
    }
    return std::nullopt;
  };
  c.expect(fw::parse_reading("HTTP/1.1 OK *23.5,48.2,410.0# trailing") == fw::SensorReading{23.5, 48.2, 410.0},
           "trace: surrounding text");
  c.expect(fw::parse_reading("*0,0,0#") == fw::SensorReading{0, 0, 0}, "trace: zero payload");
  c.expect(fw::parse_reading("*1,2,3#*4,5,6#") == fw::SensorReading{1, 2, 3}, "trace: first frame wins");
  c.expect(kind("*9*1,2,3#") == fw::ParseErrorKind::numeric, "trace: first '*' starts the payload");
  c.expect(kind("no delimiters here") == fw::ParseErrorKind::frame, "trace: no delimiters");
  c.expect(kind("*1,2,3") == fw::ParseErrorKind::frame, "trace: missing '#'");
  c.expect(kind("1,2,3#") == fw::ParseErrorKind::frame, "trace: missing '*'");
  c.expect(kind("#1,2,3*") == fw::ParseErrorKind::frame, "trace: '#' before '*'");

  std::size_t untyped = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string s(rng() % 64, '\0');
    for (char& ch : s) ch = static_cast<char>(rng() % 256);
    if (i % 3 == 0 && !s.empty()) s[rng() % s.size()] = '*';
    if (i % 3 == 0 && !s.empty()) s[rng() % s.size()] = '#';
    try {
      fw::parse_reading(s);
    } catch (const fw::ParseError&) {
    } catch (...) {
      ++untyped;
    }
  }
  c.expect(untyped == 0, std::to_string(untyped) + " untyped failures on random bytes");
}

std::string strip_label(const std::string& line) { return line.substr(0, line.rfind(',')); }

// 7. Simulator -> receptor -> generate -> split -> train -> evaluate.
void pipeline(Check& c, const TempDir& dir, Files& files) {
  fw::SimulatorScenario s;
  s.mode = fw::SimulatorMode::replay;
  s.replay_path = fw::testing::table1_path();
  s.wrap = false;
  fw::Simulator sim(s);

  fw::ReceptorConfig cfg;
  cfg.endpoint_url = sim.url();
  cfg.poll_interval = std::chrono::milliseconds(10);
  cfg.max_samples = 58;
  cfg.label_mode = fw::LabelMode::unlabeled;
  cfg.output_path = dir.file("ingested.csv");
  const fw::IngestSummary summary = fw::run_receptor(cfg);
  sim.stop();
  c.expect(summary.appended == 58 && summary.failed == 0 && summary.transport_errors == 0,
           "ingest summary appended=" + std::to_string(summary.appended));

  std::istringstream source(fw::testing::read_file(fw::testing::table1_path()));
  std::string expected;
  std::string line;
  while (std::getline(source, line)) expected += strip_label(line) + "\n";
  const std::string ingested = fw::testing::read_file(dir.file("ingested.csv"));
  c.expect(ingested == expected, "ingested rows differ from the source bytes");
  files["ingested.csv"] = ingested;

  std::string out;
  c.expect(run_cli({"generate", "--n", "700", "--seed", "7", "--out", dir.file("synthetic.csv")}) == 0, "generate");
  c.expect(run_cli({"split", "--in", dir.file("synthetic.csv"), "--out-dir", dir.str(), "--seed", "7"}, &out) == 0,
           "split");
  c.expect(out == "train=420\ntest=140\nvalidation=140\n", "split sizes: " + out);
  const auto rows = [&](const char* f) { return fw::load_dataset(dir.file(f)).size(); };
  c.expect(rows("train.csv") == 420 && rows("test.csv") == 140 && rows("validation.csv") == 140,
           "split file sizes");

  c.expect(run_cli({"train", "--in", dir.file("train.csv"), "--model", dir.file("model.txt"), "--seed", "7"}, &out) == 0,
           "train");
  c.expect(out.find("status=converged") != std::string::npos, "train status: " + out);
  c.expect(run_cli({"evaluate", "--model", dir.file("model.txt"), "--in", dir.file("test.csv")}, &out) == 0,
           "evaluate");
  files["report.txt"] = out;

  // Well-formed: every key once, in order, with a count, real or "undefined".
  std::istringstream report(out);
  const char* keys[] = {"tp", "tn", "fp", "fn", "n", "tpr", "fpr", "precision", "accuracy", "error_rate", "auc"};
  std::size_t k = 0;
  while (std::getline(report, line) && k < std::size(keys)) {
    const auto eq = line.find('=');
    const std::string key = line.substr(0, eq);
    const std::string value = eq == std::string::npos ? "" : line.substr(eq + 1);
    c.expect(key == keys[k], "report key " + key);
    const bool real = !value.empty() && std::isfinite(std::strtod(value.c_str(), nullptr));
    c.expect(real || value == "undefined", "report value " + line);
    ++k;
  }
  c.expect(k == std::size(keys), "report has " + std::to_string(k) + " lines");

  for (const char* f : {"synthetic.csv", "train.csv", "test.csv", "validation.csv", "model.txt"}) {
    files[f] = fw::testing::read_file(dir.file(f));
  }
}

// 8. Plot data against hand and oracle values.
void visualization(Check& c) {
  const fw::Dataset d = fw::load_dataset(fw::testing::table1_path());
  const auto curves = fw::andrews_curves(d, 101);
  c.expect(curves[0].t[50] == 0.0, "t grid misses 0");
  c.expect(std::abs(curves[0].value[50] - 482.738) <= 1e-3, "Andrews f(0) = " + num(curves[0].value[50]));
  c.expect(fw::lag_plot_data(d.column(0), 1).size() == d.size() - 1, "lag-1 pair count");

  const fw::CorrelationMatrix m = fw::correlation_matrix(d);
  std::vector<double> label;
  for (const auto& r : d.rows) label.push_back(fw::to_int(r.label));
  const std::vector<double> cols[] = {d.column(0), d.column(1), d.column(2), label};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double ref = fw::oracle::pearson(cols[a], cols[b]);
      c.expect(m[a][b] && std::abs(*m[a][b] - ref) <= 1e-9, "corr[" + std::to_string(a) + "][" + std::to_string(b) + "]");
    }
  }
}

// 9. Criteria 4 and 7 twice with identical seeds give identical bytes.
void determinism(Check& c) {
  Files runs[2];
  for (auto& files : runs) {
    TempDir dir;
    Check scratch;
    kkt_suite(scratch, dir, files);
    pipeline(scratch, dir, files);
  }
  c.expect(runs[0].size() == runs[1].size() && !runs[0].empty(), "artifact sets differ");
  for (const auto& [name, bytes] : runs[0]) {
    c.expect(runs[1].count(name) && runs[1].at(name) == bytes, name + " differs between runs");
  }
}

}  // namespace

int main() {
  TempDir kkt_dir;
  TempDir pipeline_dir;
  Files scratch;
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"metric reproduction", metric_reproduction},
      {"analytic dual oracle", analytic_dual},
      {"brute-force dual oracle", grid_dual},
      {"KKT suite", [&](Check& c) { kkt_suite(c, kkt_dir, scratch); }},
      {"ROC/AUC oracle", roc_oracle},
      {"parser conformance", parser_conformance},
      {"end-to-end pipeline", [&](Check& c) { pipeline(c, pipeline_dir, scratch); }},
      {"visualization data", visualization},
      {"determinism", determinism},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    std::cout << (check.passed() ? "PASS" : "FAIL") << "  criterion " << i + 1 << " " << criteria[i].first << " ("
              << check.summary() << ", " << ms << " ms)" << std::endl;
    failed += check.passed() ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}

#include "firewatch/cli.hpp"

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "firewatch/dataset.hpp"
#include "firewatch/error.hpp"
#include "firewatch/ingest.hpp"
#include "firewatch/metrics.hpp"
#include "firewatch/numeric.hpp"
#include "firewatch/svm.hpp"
#include "firewatch/viz.hpp"
#include "firewatch/wire.hpp"

namespace firewatch::cli {

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_interrupt(int) { g_interrupted.store(true); }

void install_interrupt_handler() {
  g_interrupted.store(false);
  std::signal(SIGINT, on_interrupt);
  std::signal(SIGTERM, on_interrupt);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << text;
  if (!out.flush()) throw ConfigError("failed writing '" + path + "'");
}

std::string join(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

void require_dir(const std::string& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("output directory '" + dir + "' does not exist");
}

std::array<double, 3> parse_triple(const std::string& text, const char* what, bool allow_scalar) {
  std::array<double, 3> v{};
  std::size_t count = 0;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto piece = trim(std::string_view(text).substr(start, comma == std::string::npos ? comma : comma - start));
    const auto x = parse_real(piece);
    if (!x || count >= 3) throw ConfigError(std::string(what) + " must be three comma-separated reals");
    v[count++] = *x;
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (count == 1 && allow_scalar) return {v[0], v[0], v[0]};
  if (count != 3) throw ConfigError(std::string(what) + " must be three comma-separated reals");
  return v;
}

struct SimulateArgs {
  std::string listen = "127.0.0.1:8080";
  std::string replay;
  std::string noise = "0";
  std::uint64_t seed = 0;
  bool no_wrap = false;
  std::size_t max_requests = 0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  SimulatorScenario s;
  s.listen = ListenAddress::parse(a.listen);
  if (!a.replay.empty()) {
    s.mode = SimulatorMode::replay;
    s.replay_path = a.replay;
  }
  s.noise_std = parse_triple(a.noise, "--noise", true);
  s.rng_seed = a.seed;
  s.wrap = !a.no_wrap;

  install_interrupt_handler();
  Simulator sim(s);
  out << "serving " << sim.url() << std::endl;
  while (!g_interrupted.load() && (a.max_requests == 0 || sim.requests_served() < a.max_requests)) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  sim.stop();
  out << "served=" << sim.requests_served() << std::endl;
  return kExitOk;
}

struct IngestArgs {
  std::string endpoint;
  int interval_ms = 1000;
  std::optional<std::size_t> count;
  std::string label = "none";
  std::string out;
};

int cmd_ingest(const IngestArgs& a, std::ostream& out) {
  ReceptorConfig cfg;
  cfg.endpoint_url = a.endpoint;
  cfg.poll_interval = std::chrono::milliseconds(a.interval_ms);
  cfg.max_samples = a.count;
  cfg.output_path = a.out;
  if (a.label == "0") {
    cfg.label_mode = LabelMode::fixed_no_fire;
  } else if (a.label == "1") {
    cfg.label_mode = LabelMode::fixed_fire;
  } else if (a.label == "rule") {
    cfg.label_mode = LabelMode::rule;
  } else {
    cfg.label_mode = LabelMode::unlabeled;
  }

  install_interrupt_handler();
  std::stop_source stop;
  std::jthread watcher([&stop](std::stop_token own) {
    while (!own.stop_requested()) {
      if (g_interrupted.load()) {
        stop.request_stop();
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
  });
  const IngestSummary s = run_receptor(cfg, stop.get_token());
  out << "appended=" << s.appended << "\nfailed=" << s.failed
      << "\ntransport_errors=" << s.transport_errors << "\npolls=" << s.polls << '\n';
  return kExitOk;
}

struct GenerateArgs {
  std::size_t n = 700;
  std::uint64_t seed = 0;
  double threshold = kDefaultNormalizedThreshold;
  std::string out;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  GeneratorParams g;
  g.n = a.n;
  g.rng_seed = a.seed;
  g.rule = LabelRule::normalized_sum(g.ranges, a.threshold);
  const Dataset d = generate_synthetic(g);
  save_dataset(d, a.out);
  std::size_t positives = 0;
  for (const auto& r : d.rows) positives += r.label == ClassLabel::fire ? 1 : 0;
  out << "rows=" << d.size() << "\npositives=" << positives << '\n';
  return kExitOk;
}

struct SplitArgs {
  std::string in;
  std::string out_dir;
  SplitSpec spec;
};

int cmd_split(const SplitArgs& a, std::ostream& out) {
  require_dir(a.out_dir);
  const SplitResult parts = split(load_dataset(a.in), a.spec);
  save_dataset(parts.train, join(a.out_dir, "train.csv"));
  save_dataset(parts.test, join(a.out_dir, "test.csv"));
  save_dataset(parts.validation, join(a.out_dir, "validation.csv"));
  out << "train=" << parts.train.size() << "\ntest=" << parts.test.size()
      << "\nvalidation=" << parts.validation.size() << '\n';
  return kExitOk;
}

struct TrainArgs {
  std::string in;
  std::string model;
  double gamma = 1.0 / 3.0;
  TrainConfig cfg;
  bool no_standardize = false;
};

int cmd_train(TrainArgs a, std::ostream& out, std::ostream& err) {
  // Load, separate features from labels, map through the RBF kernel and
  // solve for the support vectors.
  const Dataset d = load_dataset(a.in);
  a.cfg.standardize = !a.no_standardize;
  const TrainResult r = train(d.rows, KernelConfig{a.gamma}, a.cfg);
  save_model_file(r.model, a.model);

  std::size_t correct = 0;
  for (const auto& row : d.rows) correct += predict(r.model, row.features) == row.label ? 1 : 0;
  out << "support_vectors=" << r.model.support_vectors().size() << "\nstatus=" << to_string(r.status)
      << "\npasses=" << r.passes << "\nmax_kkt_violation=" << format_real(r.max_kkt_violation)
      << "\ntraining_accuracy=" << format_real(static_cast<double>(correct) / static_cast<double>(d.size()))
      << '\n';
  if (r.status == TrainStatus::not_converged) {
    err << "warning: training stopped after " << r.passes << " passes without meeting the KKT tolerance\n";
  } else if (r.status == TrainStatus::degenerate) {
    err << "warning: no free support vector; bias taken from the bound points\n";
  }
  return kExitOk;
}

struct PredictArgs {
  std::string model;
  std::string in;
  std::string point;
};

int cmd_predict(const PredictArgs& a, std::ostream& out) {
  const SvmModel model = load_model_file(a.model);
  if (!a.point.empty()) {
    const auto v = parse_triple(a.point, "--point", false);
    out << to_int(predict(model, FeatureVector{v[0], v[1], v[2]})) << '\n';
    return kExitOk;
  }
  for (const auto& r : load_readings(a.in)) out << to_int(predict(model, to_features(r))) << '\n';
  return kExitOk;
}

struct EvaluateArgs {
  std::string model;
  std::string in;
  std::string roc_out;
  bool json = false;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const SvmModel model = load_model_file(a.model);
  const Dataset d = load_dataset(a.in);
  if (d.empty()) throw InvalidInput("evaluation set '" + a.in + "' is empty");

  std::vector<ClassLabel> predicted;
  std::vector<double> scores;
  for (const auto& row : d.rows) {
    const double s = decision_value(model, row.features);
    scores.push_back(s);
    predicted.push_back(s >= 0.0 ? ClassLabel::fire : ClassLabel::no_fire);
  }
  const auto actual = d.labels();
  const ConfusionMatrix cm = confusion(predicted, actual);
  const MetricsReport report = metrics(cm);

  std::optional<RocCurve> curve;
  try {
    curve = roc(scores, actual);
  } catch (const InvalidInput& e) {
    err << "note: ROC skipped: " << e.what() << '\n';
  }
  if (!a.roc_out.empty() && curve) write_text(a.roc_out, roc_json(*curve) + "\n");

  if (a.json) {
    auto j = nlohmann::json::parse(report_json(cm, report));
    j["auc"] = curve ? nlohmann::json(curve->auc) : nlohmann::json(nullptr);
    out << j.dump(2) << '\n';
  } else {
    out << format_report(cm, report) << "auc=" << (curve ? format_real(curve->auc) : "undefined") << '\n';
  }
  return kExitOk;
}

struct VisualizeArgs {
  std::string in;
  std::string out_dir;
  std::size_t lag = 1;
  std::string column = "Temp";
  std::size_t resolution = 100;
  bool json = false;
};

int cmd_visualize(const VisualizeArgs& a, std::ostream& out) {
  require_dir(a.out_dir);
  const Dataset d = load_dataset(a.in);
  std::size_t column = 0;
  while (column < kFeatureNames.size() && a.column != kFeatureNames[column]) ++column;
  if (column == kFeatureNames.size()) throw ConfigError("unknown column '" + a.column + "'");

  const auto series = d.column(column);
  const auto pairs = lag_plot_data(series, a.lag);
  const auto corr = correlation_matrix(d);
  const auto curves = andrews_curves(d, a.resolution);
  write_text(join(a.out_dir, "lag.csv"), lag_csv(pairs));
  write_text(join(a.out_dir, "corr.json"), correlation_json(corr) + "\n");
  write_text(join(a.out_dir, "andrews.csv"), andrews_csv(curves));

  if (a.json) {
    out << correlation_json(corr) << '\n';
  } else {
    out << "lag_pairs=" << pairs.size() << "\nandrews_curves=" << curves.size() << '\n';
    for (std::size_t i = 0; i < 3; ++i) {
      out << "corr_" << kFeatureNames[i] << "_Label="
          << (corr[i][3] ? format_real(*corr[i][3]) : "undefined") << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fire-outbreak telemetry pipeline: simulate, ingest, train and evaluate an RBF SVM", "firewatch"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Serve wire frames over HTTP like the capture device");
  simulate->add_option("--listen", sim.listen, "host:port to bind")->capture_default_str();
  simulate->add_option("--replay", sim.replay, "Dataset CSV to replay (default: synthetic readings)");
  simulate->add_option("--noise", sim.noise, "Gaussian noise std, one value or t,s,f")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  simulate->add_flag("--no-wrap", sim.no_wrap, "Stop serving data after the last replay row");
  simulate->add_option("--max-requests", sim.max_requests, "Exit after this many requests (0: run until interrupted)");

  IngestArgs ing;
  auto* ingest = app.add_subcommand("ingest", "Poll a device and append readings to a CSV");
  ingest->add_option("--endpoint", ing.endpoint, "Device URL, e.g. http://127.0.0.1:8080/data")->required();
  ingest->add_option("--interval-ms", ing.interval_ms, "Poll interval in milliseconds")
      ->capture_default_str()
      ->check(CLI::Range(10, 86400000));
  ingest->add_option("--count", ing.count, "Stop after this many readings are appended");
  ingest->add_option("--label", ing.label, "0, 1, rule or none")
      ->capture_default_str()
      ->check(CLI::IsMember({"0", "1", "rule", "none"}));
  ingest->add_option("--out", ing.out, "Output CSV (appended)")->required();

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic labeled dataset");
  generate->add_option("--n", gen.n, "Number of rows")->capture_default_str()->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  generate->add_option("--threshold", gen.threshold, "Label rule threshold on the range-normalised feature sum")
      ->capture_default_str();
  generate->add_option("--out", gen.out, "Output CSV")->required();

  SplitArgs spl;
  auto* split_cmd = app.add_subcommand("split", "Split a dataset into train/test/validation CSVs");
  split_cmd->add_option("--in", spl.in, "Input dataset CSV")->required();
  split_cmd->add_option("--out-dir", spl.out_dir, "Directory for train.csv, test.csv, validation.csv")->required();
  split_cmd->add_option("--seed", spl.spec.rng_seed, "RNG seed")->capture_default_str();
  split_cmd->add_flag("--stratified", spl.spec.stratified, "Preserve the class ratio in every part");
  split_cmd->add_option("--train-frac", spl.spec.train_fraction)->capture_default_str();
  split_cmd->add_option("--test-frac", spl.spec.test_fraction)->capture_default_str();
  split_cmd->add_option("--val-frac", spl.spec.validation_fraction)->capture_default_str();

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train the RBF SVM and write a model file");
  train_cmd->add_option("--in", tr.in, "Training dataset CSV")->required();
  train_cmd->add_option("--model", tr.model, "Output model file")->required();
  train_cmd->add_option("--gamma", tr.gamma, "RBF gamma")->capture_default_str();
  train_cmd->add_option("--c", tr.cfg.c, "Box constraint C")->capture_default_str();
  train_cmd->add_option("--tol", tr.cfg.kkt_tolerance, "KKT tolerance")->capture_default_str();
  train_cmd->add_option("--max-passes", tr.cfg.max_passes, "Maximum full sweeps")->capture_default_str();
  train_cmd->add_option("--seed", tr.cfg.rng_seed, "RNG seed")->capture_default_str();
  train_cmd->add_flag("--no-standardize", tr.no_standardize, "Train on raw feature units");

  PredictArgs pr;
  auto* predict_cmd = app.add_subcommand("predict", "Print one label per reading");
  predict_cmd->add_option("--model", pr.model, "Model file")->required();
  auto* pin = predict_cmd->add_option("--in", pr.in, "CSV of readings or a labeled dataset");
  auto* ppoint = predict_cmd->add_option("--point", pr.point, "Single reading t,s,f");
  pin->excludes(ppoint);

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Confusion matrix, metrics and ROC on a labeled CSV");
  evaluate->add_option("--model", ev.model, "Model file")->required();
  evaluate->add_option("--in", ev.in, "Labeled dataset CSV")->required();
  evaluate->add_option("--roc-out", ev.roc_out, "Write ROC points as JSON to this file");
  evaluate->add_flag("--json", ev.json, "Print the report as JSON");

  VisualizeArgs vz;
  auto* visualize = app.add_subcommand("visualize", "Write lag.csv, corr.json and andrews.csv");
  visualize->add_option("--in", vz.in, "Labeled dataset CSV")->required();
  visualize->add_option("--out-dir", vz.out_dir, "Output directory")->required();
  visualize->add_option("--lag", vz.lag, "Lag for the lag plot")->capture_default_str()->check(CLI::PositiveNumber);
  visualize->add_option("--column", vz.column, "Series for the lag plot")
      ->capture_default_str()
      ->check(CLI::IsMember({"Temp", "Smoke", "Flame"}));
  visualize->add_option("--resolution", vz.resolution, "Samples per Andrews curve")
      ->capture_default_str()
      ->check(CLI::Range(2, 100000));
  visualize->add_flag("--json", vz.json, "Print the correlation matrix as JSON");

  std::vector<const char*> argv{"firewatch"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const CLI::App* failed = &app;
    for (auto* sub : app.get_subcommands()) failed = sub;
    err << "error: " << e.what() << "\n\n" << failed->help();
    return kExitUsage;
  }

  if (*predict_cmd && pr.in.empty() == pr.point.empty()) {
    err << "error: predict needs exactly one of --in or --point\n\n" << predict_cmd->help();
    return kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim, out);
    if (*ingest) return cmd_ingest(ing, out);
    if (*generate) return cmd_generate(gen, out);
    if (*split_cmd) return cmd_split(spl, out);
    if (*train_cmd) return cmd_train(tr, out, err);
    if (*predict_cmd) return cmd_predict(pr, out);
    if (*evaluate) return cmd_evaluate(ev, out, err);
    if (*visualize) return cmd_visualize(vz, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace firewatch::cli

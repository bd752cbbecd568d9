#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <stop_token>
#include <string>
#include <thread>
#include <vector>

#include "firewatch/dataset.hpp"
#include "firewatch/wire.hpp"

namespace httplib {
class Server;
}

namespace firewatch {

/// http://host[:port][/path]. Port defaults to 80, path to "/".
struct Endpoint {
  std::string host;
  int port = 80;
  std::string path = "/";

  static Endpoint parse(const std::string& url);
};

/// host:port. Port 0 asks the OS for a free port.
struct ListenAddress {
  std::string host = "127.0.0.1";
  int port = 0;

  static ListenAddress parse(const std::string& text);
};

enum class LabelMode { fixed_no_fire, fixed_fire, rule, unlabeled };

struct ReceptorConfig {
  std::string endpoint_url;
  std::chrono::milliseconds poll_interval{1000};
  std::optional<std::size_t> max_samples;  ///< nullopt: poll until stopped
  LabelMode label_mode = LabelMode::unlabeled;
  LabelRule rule = LabelRule::normalized_sum(kDefaultRanges, kDefaultNormalizedThreshold);
  std::string output_path;
  std::chrono::milliseconds request_timeout{2000};
  /// Consecutive transport failures after which the receptor gives up.
  std::size_t max_transport_failures = 50;

  void validate() const;
};

/// One HTTP GET against the device; the whole body is handed to
/// parse_reading. Throws TransportError or ParseError (with raw() set).
SensorReading poll_once(const ReceptorConfig& cfg);

struct IngestSummary {
  std::size_t appended = 0;
  std::size_t failed = 0;            ///< frames that did not parse
  std::size_t transport_errors = 0;
  std::size_t polls = 0;

  friend bool operator==(const IngestSummary&, const IngestSummary&) = default;
};

/// Polls every poll_interval until max_samples readings are appended or
/// `stop` is requested. Each parsed reading becomes one row of
/// output_path (labeled CSV, or a Temp,Smoke,Flame log when unlabeled).
/// An unusable output path throws ConfigError before the first poll.
IngestSummary run_receptor(const ReceptorConfig& cfg, std::stop_token stop = {});

enum class SimulatorMode { replay, synthetic };

struct SimulatorScenario {
  SimulatorMode mode = SimulatorMode::synthetic;
  std::string replay_path;               ///< dataset CSV for replay mode
  GeneratorParams generator;             ///< synthetic mode; rng_seed below wins
  std::array<double, 3> noise_std{};     ///< Gaussian noise per feature
  std::uint64_t rng_seed = 0;
  ListenAddress listen;
  bool wrap = true;                      ///< replay restarts after the last row
  /// 1-based request numbers answered with a malformed frame. These do not
  /// advance the reading cursor.
  std::set<std::size_t> corrupt_requests;

  void validate() const;
};

/// Software stand-in for the capture device. Serves GET /data with one wire
/// frame per request from a single shared cursor. Stops on destruction.
class Simulator {
 public:
  explicit Simulator(SimulatorScenario scenario);
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  int port() const { return port_; }
  std::string url() const;
  std::size_t requests_served() const { return requests_.load(); }

  /// Body the next request would receive, advancing the cursor. Exposed so
  /// the served sequence can be checked without a socket; nullopt when a
  /// non-wrapping replay is exhausted.
  std::optional<std::string> next_body();

  void stop();

 private:
  std::optional<SensorReading> next_reading();

  SimulatorScenario scenario_;
  std::vector<SensorReading> replay_;
  std::optional<SyntheticSource> synthetic_;
  std::mt19937_64 noise_rng_;
  std::size_t cursor_ = 0;
  std::mutex mu_;
  std::atomic<std::size_t> requests_{0};
  std::size_t corrupt_served_ = 0;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

std::unique_ptr<Simulator> run_simulator(const SimulatorScenario& scenario);

}  // namespace firewatch

#include "firewatch/ingest.hpp"

#include <cmath>
#include <condition_variable>
#include <filesystem>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "firewatch/error.hpp"

namespace firewatch {

namespace {

int parse_port(const std::string& text, const std::string& context) {
  if (text.empty() || text.size() > 5 || text.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError(context + ": bad port '" + text + "'");
  }
  const int port = std::stoi(text);
  if (port > 65535) throw ConfigError(context + ": port out of range");
  return port;
}

class DeviceClient {
 public:
  explicit DeviceClient(const ReceptorConfig& cfg)
      : endpoint_(Endpoint::parse(cfg.endpoint_url)), client_(endpoint_.host, endpoint_.port) {
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(cfg.request_timeout);
    client_.set_connection_timeout(timeout);
    client_.set_read_timeout(timeout);
    client_.set_keep_alive(true);
  }

  SensorReading poll() {
    auto res = client_.Get(endpoint_.path);
    if (!res) {
      throw TransportError("GET " + endpoint_.path + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw TransportError("GET " + endpoint_.path + " returned HTTP " + std::to_string(res->status));
    }
    try {
      return parse_reading(res->body);
    } catch (const ParseError& e) {
      throw ParseError(e.kind(), e.what(), res->body);
    }
  }

 private:
  Endpoint endpoint_;
  httplib::Client client_;
};

// Stand-ins for a malformed device response, one per failure class.
constexpr std::array<const char*, 3> kCorruptBodies = {
    "*25.977,50.529#",          // arity
    "*25.977,smoke?,464.37#",   // numeric
    "ERR sensor bus timeout",   // frame
};

}  // namespace

Endpoint Endpoint::parse(const std::string& url) {
  constexpr std::string_view kScheme = "http://";
  std::string_view rest = url;
  if (rest.substr(0, kScheme.size()) == kScheme) {
    rest.remove_prefix(kScheme.size());
  } else if (rest.find("://") != std::string_view::npos) {
    throw ConfigError("endpoint '" + url + "': only http:// is supported");
  }
  Endpoint e;
  const auto slash = rest.find('/');
  std::string_view authority = rest.substr(0, slash);
  if (slash != std::string_view::npos) e.path = std::string(rest.substr(slash));
  const auto colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    e.port = parse_port(std::string(authority.substr(colon + 1)), "endpoint '" + url + "'");
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) throw ConfigError("endpoint '" + url + "' has no host");
  e.host = std::string(authority);
  return e;
}

ListenAddress ListenAddress::parse(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw ConfigError("listen address '" + text + "' must be host:port");
  }
  return ListenAddress{text.substr(0, colon), parse_port(text.substr(colon + 1), "listen address")};
}

void ReceptorConfig::validate() const {
  if (endpoint_url.empty()) throw ConfigError("receptor endpoint is empty");
  Endpoint::parse(endpoint_url);
  if (poll_interval < std::chrono::milliseconds(10)) throw ConfigError("poll interval must be at least 10 ms");
  if (output_path.empty()) throw ConfigError("receptor output path is empty");
}

SensorReading poll_once(const ReceptorConfig& cfg) {
  if (cfg.endpoint_url.empty()) throw ConfigError("receptor endpoint is empty");
  DeviceClient client(cfg);
  return client.poll();
}

IngestSummary run_receptor(const ReceptorConfig& cfg, std::stop_token stop) {
  cfg.validate();
  IngestSummary summary;
  if (cfg.max_samples && *cfg.max_samples == 0) return summary;

  const bool labeled = cfg.label_mode != LabelMode::unlabeled;
  CsvAppender out(cfg.output_path, labeled);
  DeviceClient client(cfg);

  std::mutex mu;
  std::condition_variable_any cv;
  auto next_poll = std::chrono::steady_clock::now();
  std::size_t consecutive_transport = 0;

  while (!stop.stop_requested() && (!cfg.max_samples || summary.appended < *cfg.max_samples)) {
    {
      std::unique_lock lock(mu);
      if (cv.wait_until(lock, stop, next_poll, [] { return false; })) break;
      if (stop.stop_requested()) break;
    }
    next_poll += cfg.poll_interval;
    ++summary.polls;
    try {
      const SensorReading r = client.poll();
      consecutive_transport = 0;
      switch (cfg.label_mode) {
        case LabelMode::fixed_no_fire: out.append(r, ClassLabel::no_fire); break;
        case LabelMode::fixed_fire: out.append(r, ClassLabel::fire); break;
        case LabelMode::rule: out.append(r, cfg.rule.apply(r)); break;
        case LabelMode::unlabeled: out.append(r); break;
      }
      ++summary.appended;
    } catch (const ParseError& e) {
      consecutive_transport = 0;
      ++summary.failed;
      spdlog::warn("poll {}: {} (body: '{}')", summary.polls, e.what(), e.raw());
    } catch (const TransportError& e) {
      ++summary.transport_errors;
      spdlog::warn("poll {}: {}", summary.polls, e.what());
      if (++consecutive_transport >= cfg.max_transport_failures) {
        throw TransportError("giving up after " + std::to_string(consecutive_transport) +
                             " consecutive transport failures: " + e.what());
      }
    }
    // Do not try to catch up after a slow poll.
    next_poll = std::max(next_poll, std::chrono::steady_clock::now());
  }
  return summary;
}

void SimulatorScenario::validate() const {
  for (double s : noise_std) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("noise std must be finite and nonnegative");
  }
  if (mode == SimulatorMode::replay && replay_path.empty()) throw ConfigError("replay mode needs a dataset path");
  if (mode == SimulatorMode::synthetic) generator.validate();
}

Simulator::Simulator(SimulatorScenario scenario)
    : scenario_(std::move(scenario)), noise_rng_(scenario_.rng_seed ^ 0x9e3779b97f4a7c15ULL) {
  scenario_.validate();
  if (scenario_.mode == SimulatorMode::replay) {
    const Dataset d = load_dataset(scenario_.replay_path);
    if (d.empty()) throw ConfigError("replay dataset '" + scenario_.replay_path + "' is empty");
    for (const auto& row : d.rows) replay_.push_back({row.features[0], row.features[1], row.features[2]});
  } else {
    GeneratorParams g = scenario_.generator;
    g.rng_seed = scenario_.rng_seed;
    synthetic_.emplace(g);
  }

  server_ = std::make_unique<httplib::Server>();
  // No SO_REUSEPORT, so binding an occupied port fails.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  server_->Get("/data", [this](const httplib::Request&, httplib::Response& res) {
    auto body = next_body();
    if (!body) {
      res.status = 204;
      return;
    }
    res.set_content(*body, "text/plain");
  });

  const auto& addr = scenario_.listen;
  if (addr.port == 0) {
    port_ = server_->bind_to_any_port(addr.host);
  } else {
    port_ = server_->bind_to_port(addr.host, addr.port) ? addr.port : -1;
  }
  if (port_ <= 0) {
    throw ConfigError("cannot listen on " + addr.host + ":" + std::to_string(addr.port) +
                      " (address in use or not bindable)");
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

Simulator::~Simulator() { stop(); }

std::string Simulator::url() const {
  return "http://" + scenario_.listen.host + ":" + std::to_string(port_) + "/data";
}

std::optional<SensorReading> Simulator::next_reading() {
  SensorReading r;
  if (synthetic_) {
    r = synthetic_->next_reading();
  } else {
    if (cursor_ >= replay_.size()) {
      if (!scenario_.wrap) return std::nullopt;
      cursor_ = 0;
    }
    r = replay_[cursor_++];
  }
  double* fields[] = {&r.temperature, &r.smoke, &r.flame};
  for (std::size_t i = 0; i < 3; ++i) {
    if (scenario_.noise_std[i] > 0.0) {
      std::normal_distribution<double> noise(0.0, scenario_.noise_std[i]);
      *fields[i] += noise(noise_rng_);
    }
  }
  return r;
}

std::optional<std::string> Simulator::next_body() {
  std::lock_guard lock(mu_);
  const std::size_t request = ++requests_;
  if (scenario_.corrupt_requests.contains(request)) {
    return std::string(kCorruptBodies[corrupt_served_++ % kCorruptBodies.size()]);
  }
  const auto r = next_reading();
  if (!r) return std::nullopt;
  return format_reading(*r);
}

void Simulator::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::unique_ptr<Simulator> run_simulator(const SimulatorScenario& scenario) {
  return std::make_unique<Simulator>(scenario);
}

}  // namespace firewatch

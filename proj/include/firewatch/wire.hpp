#pragma once

#include <string>
#include <string_view>

#include "firewatch/error.hpp"

namespace firewatch {

/// One raw telemetry triple from the capture device, in device units.
struct SensorReading {
  double temperature = 0.0;  ///< degrees C
  double smoke = 0.0;        ///< MQ-2 analog level
  double flame = 0.0;        ///< LM393 analog intensity

  friend bool operator==(const SensorReading&, const SensorReading&) = default;
};

enum class ParseErrorKind { frame, arity, numeric };

/// Why a device response could not be turned into a reading. `raw()` holds
/// the offending response body when the error came from a poll.
class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, const std::string& what, std::string raw = {})
      : Error(what), kind_(kind), raw_(std::move(raw)) {}

  ParseErrorKind kind() const { return kind_; }
  const std::string& raw() const { return raw_; }

 private:
  ParseErrorKind kind_;
  std::string raw_;
};

// Wire frame: '*' <temperature> ',' <smoke> ',' <flame> '#'. Bytes outside
// the first '*' and first '#' are ignored.

/// Extracts the reading between the first '*' and the first '#'. Fields are
/// whitespace-trimmed and must be plain or scientific decimals.
SensorReading parse_reading(std::string_view msg);

/// Inverse of parse_reading, using shortest round-trip decimals.
/// Throws InvalidInput on non-finite fields.
std::string format_reading(const SensorReading& r);

}  // namespace firewatch

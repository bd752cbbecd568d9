#include "firewatch/wire.hpp"

#include <array>
#include <cmath>

#include "firewatch/numeric.hpp"

namespace firewatch {

namespace {

constexpr char kStart = '*';
constexpr char kEnd = '#';
constexpr char kSep = ',';
constexpr std::array<const char*, 3> kFieldNames = {"temperature", "smoke", "flame"};

}  // namespace

SensorReading parse_reading(std::string_view msg) {
  const auto start = msg.find(kStart);
  const auto end = msg.find(kEnd);
  if (start == std::string_view::npos) throw ParseError(ParseErrorKind::frame, "frame error: no '*' delimiter");
  if (end == std::string_view::npos) throw ParseError(ParseErrorKind::frame, "frame error: no '#' delimiter");
  if (end < start) throw ParseError(ParseErrorKind::frame, "frame error: '#' precedes '*'");

  const std::string_view payload = msg.substr(start + 1, end - start - 1);
  std::array<std::string_view, 3> fields;
  std::size_t count = 0;
  std::size_t pos = 0;
  while (true) {
    const auto comma = payload.find(kSep, pos);
    const auto piece = payload.substr(pos, comma == std::string_view::npos ? comma : comma - pos);
    if (count < fields.size()) fields[count] = piece;
    ++count;
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (count != fields.size()) {
    throw ParseError(ParseErrorKind::arity,
                     "arity error: expected 3 fields, got " + std::to_string(count));
  }

  std::array<double, 3> values{};
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto v = parse_real(trim(fields[i]));
    if (!v) {
      throw ParseError(ParseErrorKind::numeric, std::string("numeric error: ") + kFieldNames[i] +
                                                    " field '" + std::string(fields[i]) +
                                                    "' is not a finite real");
    }
    values[i] = *v;
  }
  return SensorReading{values[0], values[1], values[2]};
}

std::string format_reading(const SensorReading& r) {
  if (!std::isfinite(r.temperature) || !std::isfinite(r.smoke) || !std::isfinite(r.flame)) {
    throw InvalidInput("cannot frame a reading with non-finite fields");
  }
  std::string out;
  out += kStart;
  out += format_real(r.temperature);
  out += kSep;
  out += format_real(r.smoke);
  out += kSep;
  out += format_real(r.flame);
  out += kEnd;
  return out;
}

}  // namespace firewatch

#pragma once

// Deterministic CSV field formatting. Doubles are printed with the shortest
// round-trippable representation so identical runs produce identical bytes.

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <system_error>

namespace gossip::csv {

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

/// Undefined values are written as "inf" (they behave as a vacuous bound).
inline std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("inf");
}

inline std::string format_int(std::int64_t v) { return std::to_string(v); }

}  // namespace gossip::csv

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace hboot {

// Fixed-point formatting with half-away-from-zero rounding, locale
// independent. All report numbers go through here so outputs are
// byte-stable.
[[nodiscard]] inline std::string format_fixed(double value, int decimals) {
  if (!std::isfinite(value)) throw std::invalid_argument("format_fixed: non-finite value");
  double scale = 1.0;
  for (int i = 0; i < decimals; ++i) scale *= 10.0;
  const long long scaled = std::llround(value * scale);  // llround = half away from zero
  const bool negative = scaled < 0;
  unsigned long long magnitude =
      negative ? -static_cast<unsigned long long>(scaled) : static_cast<unsigned long long>(scaled);
  std::string digits = std::to_string(magnitude);
  std::string out;
  if (negative) out.push_back('-');
  if (decimals == 0) {
    out += digits;
    return out;
  }
  if (digits.size() <= static_cast<std::size_t>(decimals)) {
    digits.insert(0, static_cast<std::size_t>(decimals) + 1 - digits.size(), '0');
  }
  out.append(digits, 0, digits.size() - static_cast<std::size_t>(decimals));
  out.push_back('.');
  out.append(digits, digits.size() - static_cast<std::size_t>(decimals), std::string::npos);
  return out;
}

// Shortest representation that round-trips the exact double; used for
// dataset files, which must not lose precision.
[[nodiscard]] inline std::string format_shortest(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

// "0.9" -> "90%", "0.975" -> "97.5%".
[[nodiscard]] inline std::string format_level_percent(double level) {
  const double pct = level * 100.0;
  const double rounded = std::round(pct);
  if (std::fabs(pct - rounded) < 1e-9) {
    return std::to_string(static_cast<long long>(rounded)) + "%";
  }
  return format_fixed(pct, 1) + "%";
}

}  // namespace hboot

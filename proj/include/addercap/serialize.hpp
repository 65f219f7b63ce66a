#pragma once

// Deterministic text rendering of numbers and PMFs. Two policies:
// format_shortest emits the shortest string that round-trips the double;
// format_digits17 pins the output to 17 significant digits.

#include <array>
#include <charconv>
#include <cstdio>
#include <string>

#include "addercap/poisson_binomial.hpp"

namespace addercap {

inline std::string format_shortest(double v) {
  std::array<char, 32> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

inline std::string format_digits17(double v) {
  std::array<char, 40> buf;
  const int len = std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return std::string(buf.data(), static_cast<std::size_t>(len));
}

/// One "k,mass" line per support point.
inline std::string pmf_to_csv(const Pmf& f) {
  std::string out;
  for (std::size_t k = 0; k <= f.support_size(); ++k) {
    out += std::to_string(k);
    out += ',';
    out += format_shortest(f[k]);
    out += '\n';
  }
  return out;
}

/// JSON array of the masses in support order.
inline std::string pmf_to_json(const Pmf& f) {
  std::string out = "[";
  for (std::size_t k = 0; k <= f.support_size(); ++k) {
    if (k > 0) out += ", ";
    out += format_shortest(f[k]);
  }
  out += "]";
  return out;
}

}  // namespace addercap

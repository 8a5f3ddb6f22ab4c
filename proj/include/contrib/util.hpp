#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace contrib {

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kBisectTol = 1e-10;  // effort units, two orders below kDefaultTol
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Raised when an operation is asked to run on a game outside its function class.
struct UnsupportedClassError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised on budget violations and similar precondition failures.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an algorithm's own progress guarantee is violated.
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised on malformed input files; carries a location string.
struct ParseError : std::runtime_error {
  std::string where;
  ParseError(const std::string& msg, std::string loc)
      : std::runtime_error(loc.empty() ? msg : msg + " (at " + loc + ")"), where(std::move(loc)) {}
};

// FNV-1a, used for game/profile/trajectory fingerprints.
struct Fnv64 {
  uint64_t h = 1469598103934665603ull;
  void add_byte(uint8_t b) {
    h ^= b;
    h *= 1099511628211ull;
  }
  void add_u64(uint64_t v) {
    for (int i = 0; i < 8; ++i) add_byte(static_cast<uint8_t>(v >> (8 * i)));
  }
  void add_i64(int64_t v) { add_u64(static_cast<uint64_t>(v)); }
  void add_double(double d) {
    uint64_t bits;
    static_assert(sizeof(bits) == sizeof(d));
    std::memcpy(&bits, &d, sizeof(bits));
    add_u64(bits);
  }
  void add_string(const std::string& s) {
    for (char c : s) add_byte(static_cast<uint8_t>(c));
    add_byte(0xff);
  }
};

// Effort quantized to multiples of q; q = 1e-9 gives comparable dynamics fingerprints.
inline int64_t quantize(double x, double q = 1e-9) { return std::llround(x / q); }

inline std::string format_sig(double x, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return buf;
}

// Round a double to `digits` significant decimal digits (used for CLI payloads).
inline double round_sig(double x, int digits = 12) {
  if (!std::isfinite(x) || x == 0.0) return x;
  return std::strtod(format_sig(x, digits).c_str(), nullptr);
}

inline bool approx_eq(double a, double b, double tol = kDefaultTol) { return std::fabs(a - b) <= tol; }

}  // namespace contrib

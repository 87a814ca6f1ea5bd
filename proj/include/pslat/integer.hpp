#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "pslat/errors.hpp"

namespace pslat {

/// Arbitrary-precision signed integer. All lattice arithmetic uses this type;
/// fixed-width integers appear only as indices and sizes.
using Int = boost::multiprecision::cpp_int;

/// Arbitrary-precision rational, always stored in lowest terms.
using Rat = boost::multiprecision::cpp_rational;

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

inline int sign_of(const Int& a) { return a < 0 ? -1 : (a > 0 ? 1 : 0); }

inline Int gcd_int(const Int& a, const Int& b) {
  return boost::multiprecision::gcd(a, b);
}

/// Extended gcd: g = gcd(a, b) >= 0 with g = a*x + b*y.
struct ExtGcd {
  Int g, x, y;
};

inline ExtGcd ext_gcd(Int a, Int b) {
  Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    Int q = a / b;
    Int r = a - q * b;
    a = b;
    b = r;
    Int x2 = x0 - q * x1;
    Int y2 = y0 - q * y1;
    x0 = x1;
    y0 = y1;
    x1 = x2;
    y1 = y2;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  return {a, x0, y0};
}

/// gcd of all entries (0 for the zero vector).
inline Int content(const IntVec& v) {
  Int g = 0;
  for (const Int& a : v) g = gcd_int(g, a);
  return g;
}

inline bool is_zero_vec(const IntVec& v) {
  for (const Int& a : v)
    if (a != 0) return false;
  return true;
}

/// A vector is primitive when its entries have gcd exactly 1.
inline bool is_primitive(const IntVec& v) { return content(v) == 1; }

inline Rat num_den(const Int& n, const Int& d) { return Rat(n, d); }

inline Int numerator(const Rat& q) { return Int(boost::multiprecision::numerator(q)); }
inline Int denominator(const Rat& q) { return Int(boost::multiprecision::denominator(q)); }

inline bool is_integer(const Rat& q) { return denominator(q) == 1; }

inline std::string to_string(const Int& a) { return a.str(); }

inline std::string to_string(const Rat& q) {
  if (is_integer(q)) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

/// Parse a decimal integer with optional sign. Errors carry the given kind.
inline Int parse_int(const std::string& text, const std::string& error_kind = "DimensionMismatch") {
  require(!text.empty(), error_kind, "empty integer literal");
  std::size_t i = (text[0] == '+' || text[0] == '-') ? 1 : 0;
  require(i < text.size(), error_kind, "sign without digits: " + text);
  for (std::size_t j = i; j < text.size(); ++j)
    require(text[j] >= '0' && text[j] <= '9', error_kind, "bad digit in integer literal: " + text);
  return Int(text);
}

inline bool fits_int64(const Int& a) {
  static const Int lo = Int(std::numeric_limits<std::int64_t>::min());
  static const Int hi = Int(std::numeric_limits<std::int64_t>::max());
  return a >= lo && a <= hi;
}

}  // namespace pslat

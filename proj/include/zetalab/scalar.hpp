#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>

namespace zetalab {

namespace bmp = boost::multiprecision;

/// Configurable-precision binary float (MPFR).  Precision is process-wide.
using Real = bmp::number<bmp::mpfr_float_backend<0>, bmp::et_off>;
/// Exact rational (GMP), used by the oracle paths.
using Rational = bmp::number<bmp::gmp_rational, bmp::et_off>;
using BigInt = bmp::number<bmp::gmp_int, bmp::et_off>;

inline constexpr unsigned kDefaultPrecisionBits = 256;
inline constexpr const char* kPrecisionEnvVar = "ZETALAB_PRECISION";

/// Sets the working precision of every Real created afterwards.  Call before
/// starting worker threads.
void set_working_precision(unsigned bits);
unsigned working_precision();
/// Reads ZETALAB_PRECISION, falling back to `fallback` when unset or invalid.
unsigned precision_from_env(unsigned fallback = kDefaultPrecisionBits);

/// Decimal digits carried in reports: bits * log10(2) - 2.
int report_digits();

/// Formats with `digits` significant digits in scientific notation.
std::string format_decimal(const Real& x, int digits);
inline std::string format_decimal(const Real& x) { return format_decimal(x, report_digits()); }

/// Parses "0.8", "-3", "1e-6" or "3/2".
Rational parse_rational(std::string_view text);

Real to_real(const Rational& q);

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Real> {
  static constexpr bool exact = false;
  static Real parse(std::string_view text);
  static Real from_int(std::int64_t v) { return Real(v); }
  static Real from_rational(const Rational& q) { return to_real(q); }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational parse(std::string_view text) { return parse_rational(text); }
  static Rational from_int(std::int64_t v) { return Rational(v); }
  static Rational from_rational(const Rational& q) { return q; }
};

/// x^e for integer e >= 0 by binary exponentiation.
template <class T>
T ipow(T base, unsigned e) {
  T result(1);
  while (e) {
    if (e & 1u) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

/// Relative difference |a-b| / max(|a|, |b|, 1).
inline Real relative_difference(const Real& a, const Real& b) {
  Real scale = std::max(std::max(bmp::abs(a), bmp::abs(b)), Real(1));
  return bmp::abs(a - b) / scale;
}

}  // namespace zetalab

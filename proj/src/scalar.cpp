#include "zetalab/scalar.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <locale>
#include <sstream>

#include "zetalab/errors.hpp"

namespace zetalab {

namespace {
std::atomic<unsigned> g_precision_bits{0};

unsigned digits10_for_bits(unsigned bits) {
  // Boost sizes MPFR mantissas from decimal digits; pick the smallest count
  // whose binary width covers `bits`.
  unsigned d = static_cast<unsigned>(std::floor(bits * 0.30103));
  while (bmp::detail::digits10_2_2(d) < bits) ++d;
  while (d > 1 && bmp::detail::digits10_2_2(d - 1) >= bits) --d;
  return d;
}
}  // namespace

void set_working_precision(unsigned bits) {
  if (bits < 32) throw ArgumentError("working precision must be at least 32 bits");
  Real::default_precision(digits10_for_bits(bits));
  g_precision_bits = bits;
}

unsigned working_precision() {
  unsigned bits = g_precision_bits.load();
  if (bits == 0) {
    set_working_precision(kDefaultPrecisionBits);
    bits = kDefaultPrecisionBits;
  }
  return bits;
}

unsigned precision_from_env(unsigned fallback) {
  const char* raw = std::getenv(kPrecisionEnvVar);
  if (!raw || !*raw) return fallback;
  char* end = nullptr;
  unsigned long v = std::strtoul(raw, &end, 10);
  if (*end != '\0' || v < 32 || v > 100000) return fallback;
  return static_cast<unsigned>(v);
}

int report_digits() { return static_cast<int>(working_precision() * 0.30102999566398120) - 2; }

std::string format_decimal(const Real& x, int digits) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::scientific << std::setprecision(digits - 1) << x;
  return os.str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  if (s.empty()) throw ArgumentError("empty number");
  auto bad = [&] { return ArgumentError("malformed number: '" + s + "'"); };

  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw bad();
    return num / den;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  int frac_digits = 0;
  bool seen_point = false;
  for (; pos < s.size() && s[pos] != 'e' && s[pos] != 'E'; ++pos) {
    char ch = s[pos];
    if (ch == '.' && !seen_point) {
      seen_point = true;
    } else if (ch >= '0' && ch <= '9') {
      digits += ch;
      if (seen_point) ++frac_digits;
    } else {
      throw bad();
    }
  }
  if (digits.empty()) throw bad();
  // GMP reads a leading 0 as an octal prefix.
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  long exponent = 0;
  if (pos < s.size()) {
    std::string e = s.substr(pos + 1);
    char* end = nullptr;
    exponent = std::strtol(e.c_str(), &end, 10);
    if (e.empty() || *end != '\0') throw bad();
  }
  exponent -= frac_digits;
  BigInt mantissa(digits);
  BigInt scale = bmp::pow(BigInt(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  Rational out = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
  return negative ? Rational(-out) : out;
}

Real to_real(const Rational& q) {
  working_precision();
  return Real(BigInt(bmp::numerator(q))) / Real(BigInt(bmp::denominator(q)));
}

Real ScalarTraits<Real>::parse(std::string_view text) {
  working_precision();
  std::string s(text);
  if (s.find('/') != std::string::npos) return to_real(parse_rational(s));
  // Validate with the exact parser, then let MPFR round the decimal string once.
  parse_rational(s);
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return Real(s);
}

}  // namespace zetalab

#pragma once

#include <cstdint>
#include <vector>

#include "zetalab/errors.hpp"
#include "zetalab/scalar.hpp"

namespace zetalab {

/// prefix[m] = (alpha)_m / m!, suffix[m] = m! / (alpha)_m for 0 <= m <= M.
template <class T>
struct PochhammerTables {
  T alpha;
  std::vector<T> prefix;
  std::vector<T> suffix;
};

/// One step of the prefix recurrence: (alpha)_{m+1}/(m+1)! from (alpha)_m/m!.
template <class T>
T pochhammer_next(const T& prefix_m, const T& alpha, std::int64_t m) {
  T next = prefix_m * (T(m) + alpha);
  next /= T(m + 1);
  return next;
}

template <class T>
PochhammerTables<T> build_pochhammer(const T& alpha, std::int64_t M) {
  if (!(alpha > 0)) throw DomainError("Pochhammer tables need alpha > 0");
  if (M < 0) throw ArgumentError("Pochhammer table length must be non-negative");
  PochhammerTables<T> t{alpha, {}, {}};
  t.prefix.reserve(M + 1);
  t.suffix.reserve(M + 1);
  t.prefix.emplace_back(1);
  t.suffix.emplace_back(1);
  for (std::int64_t m = 0; m < M; ++m) {
    t.prefix.push_back(pochhammer_next(t.prefix.back(), alpha, m));
    t.suffix.push_back(T(1) / t.prefix.back());
  }
  return t;
}

}  // namespace zetalab

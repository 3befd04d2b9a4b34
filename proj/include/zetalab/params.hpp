#pragma once

#include <optional>

#include "zetalab/errors.hpp"
#include "zetalab/series_spec.hpp"

namespace zetalab {

/// Positive real parameters (alpha, beta) or (alpha, beta, gamma).
template <class T>
struct ParamPoint {
  T alpha;
  T beta;
  std::optional<T> gamma;

  /// alpha + beta - gamma; the Pochhammer offset of 3-parameter series.
  T shift3() const { return alpha + beta - gamma.value(); }
};

template <class T>
void validate_params(const ParamPoint<T>& p, int arity) {
  if (!(p.alpha > 0)) throw DomainError("alpha must be positive");
  if (!(p.beta > 0)) throw DomainError("beta must be positive");
  if (arity == 3) {
    if (!p.gamma) throw DomainError("3-parameter series need gamma");
    if (!(*p.gamma > 0)) throw DomainError("gamma must be positive");
    if (!(p.shift3() > 0)) throw DomainError("alpha + beta - gamma must be positive");
  }
}

template <class T>
void validate_params(const SeriesSpec& spec, const ParamPoint<T>& p) {
  validate_params(p, spec.arity);
}

}  // namespace zetalab

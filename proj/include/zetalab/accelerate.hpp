#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zetalab/scalar.hpp"

namespace zetalab {

/// Partial sum S_M of a series: the sum over all summation variables < m.
struct Checkpoint {
  std::int64_t m;
  Real partial;
};

/// Tail model S_inf - S_M ~ sum_f sum_{j<J} sum_{l<=L} c M^{-(theta_f + j)} log^l M.
/// Each family f contributes exponents theta_f, theta_f + 1, ...
struct TailModel {
  std::vector<Real> exponents;
  int terms_per_family = 4;
  int log_degree = 0;

  int unknowns() const {
    return 1 + static_cast<int>(exponents.size()) * terms_per_family * (log_degree + 1);
  }
};

struct FitResult {
  Real limit;
  /// Root-mean-square residual of the least-squares fit.
  Real residual;
};

struct AccelResult {
  Real limit;
  Real err;
  /// False when the fit residual exceeds the last tail increment; `limit`
  /// then still carries the best available estimate.
  bool ok = true;
};

/// Least-squares fit of the tail model; needs at least model.unknowns()
/// checkpoints with distinct m.
FitResult fit_tail(std::span<const Checkpoint> checkpoints, const TailModel& model);

/// Extrapolated limit with an error estimate from dropping the highest
/// correction term of every family.  terms_per_family is reduced as needed
/// to leave at least one residual degree of freedom.
AccelResult accelerate(std::span<const Checkpoint> checkpoints, const TailModel& model);

/// Single-family form: tail ~ M^{-theta} (c_0 + ... + c_d log^d M) plus
/// higher integer-step corrections, as many as the checkpoints allow.
AccelResult accelerate(std::span<const Checkpoint> checkpoints, const Real& theta, int log_degree);

}  // namespace zetalab

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "zetalab/accelerate.hpp"
#include "zetalab/errors.hpp"
#include "zetalab/kernels.hpp"
#include "zetalab/params.hpp"
#include "zetalab/scalar.hpp"
#include "zetalab/series_spec.hpp"

namespace zetalab {

/// Forward sweep over m = 0, 1, 2, ...  Each layer keeps the running sum of
/// its weighted inner values; a strict link hands the next layer the sum over
/// m' < m, a weak link the sum over m' <= m.  Advancing is incremental, so the
/// partial sums at increasing truncations cost one pass in total.
template <class T>
class Sweep {
 public:
  Sweep(const SeriesSpec& spec, const ParamPoint<T>& params, ExecPolicy policy = ExecPolicy::serial,
        std::int64_t chunk = 4096)
      : layers_(flatten(spec)), plan_(kernels::plan_weights(layers_)), params_(params), policy_(policy),
        chunk_(chunk) {
    validate(spec);
    validate_params(spec, params);
    prefix_ = spec.prefix;
    suffix_ = spec.suffix;
    // One layer with matching decorations: the factors cancel term by term.
    if (layers_.size() == 1 && prefix_ == suffix_) prefix_ = suffix_ = Decoration::none;
    cum_.assign(layers_.size(), T(0));
    vals_.assign(layers_.size(), T(0));
    poch_ = T(1);
    ratio_ = T(1);
    sum_ = T(0);
  }

  std::int64_t position() const { return m_; }
  const T& sum() const { return sum_; }

  /// Adds all terms with every variable < M and returns S_M.
  const T& advance_to(std::int64_t M) {
    while (m_ < M) {
      const std::int64_t count = std::min(chunk_, M - m_);
      kernels::fill_weights(policy_, plan_, params_, m_, count, tables_);
      for (std::int64_t i = 0; i < count; ++i) step(i);
    }
    return sum_;
  }

 private:
  T decoration_factor(Decoration d) const {
    switch (d) {
      case Decoration::none: return T(1);
      case Decoration::pochhammer: return poch_;
      case Decoration::pochhammer3: return poch_ * ratio_;
    }
    return T(1);
  }

  void step(std::int64_t i) {
    const std::size_t K = layers_.size();
    vals_[0] = tables_[plan_.layer_node[0]][i];
    if (prefix_ != Decoration::none) vals_[0] *= decoration_factor(prefix_);
    for (std::size_t k = 1; k < K; ++k) {
      if (layers_[k].link == Link::weak) {
        cum_[k - 1] += vals_[k - 1];
        vals_[k] = cum_[k - 1];
      } else {
        vals_[k] = cum_[k - 1];
        cum_[k - 1] += vals_[k - 1];
      }
      vals_[k] *= tables_[plan_.layer_node[k]][i];
    }
    if (suffix_ != Decoration::none) {
      vals_[K - 1] /= decoration_factor(suffix_);
    }
    sum_ += vals_[K - 1];
    advance_decorations();
    ++m_;
  }

  void advance_decorations() {
    if (prefix_ == Decoration::none && suffix_ == Decoration::none) return;
    const T m(m_);
    poch_ *= m + params_.alpha;
    poch_ /= m + 1;
    if (prefix_ == Decoration::pochhammer3 || suffix_ == Decoration::pochhammer3) {
      ratio_ *= m + params_.beta;
      ratio_ /= m + *params_.gamma;
    }
  }

  std::vector<Layer> layers_;
  kernels::WeightPlan plan_;
  ParamPoint<T> params_;
  ExecPolicy policy_;
  std::int64_t chunk_;
  Decoration prefix_ = Decoration::none;
  Decoration suffix_ = Decoration::none;
  std::vector<std::vector<T>> tables_;
  std::vector<T> cum_;
  std::vector<T> vals_;
  T poch_;   // (alpha)_m / m!
  T ratio_;  // (beta)_m / (gamma)_m
  T sum_;
  std::int64_t m_ = 0;
};

/// Truncated sums S_M for each M in `Ms` (any order).
template <class T>
std::vector<T> partial_sums(const SeriesSpec& spec, const ParamPoint<T>& params, const std::vector<std::int64_t>& Ms,
                            ExecPolicy policy = ExecPolicy::serial) {
  std::vector<std::size_t> order(Ms.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return Ms[x] < Ms[y]; });
  Sweep<T> sweep(spec, params, policy);
  std::vector<T> out(Ms.size());
  for (auto i : order) {
    if (Ms[i] < 0) throw ArgumentError("truncation must be non-negative");
    out[i] = sweep.advance_to(Ms[i]);
  }
  return out;
}

inline constexpr int kNaiveMaxLayers = 5;
inline constexpr std::int64_t kNaiveMaxM = 80;

namespace detail {

// (x)_m / m! as a direct product.
template <class T>
T rising_over_factorial(const T& x, std::int64_t m) {
  T num(1);
  T den(1);
  for (std::int64_t j = 0; j < m; ++j) {
    num *= x + T(j);
    den *= T(j + 1);
  }
  return num / den;
}

template <class T>
T rising_ratio(const T& x, const T& y, std::int64_t m) {
  T num(1);
  T den(1);
  for (std::int64_t j = 0; j < m; ++j) {
    num *= x + T(j);
    den *= y + T(j);
  }
  return num / den;
}

template <class T>
T direct_power(const T& base, int e) {
  T r(1);
  for (int i = 0; i < std::abs(e); ++i) r *= base;
  return e >= 0 ? T(T(1) / r) : r;
}

}  // namespace detail

/// Literal nested loops over every tuple of variables in [0, M), keeping those
/// that satisfy the links.  Independent of the sweep; exact for Rational.
template <class T>
T eval_naive(const SeriesSpec& spec, const ParamPoint<T>& params, std::int64_t M) {
  validate(spec);
  validate_params(spec, params);
  const auto layers = flatten(spec);
  const int K = static_cast<int>(layers.size());
  if (K > kNaiveMaxLayers || M > kNaiveMaxM) throw ArgumentError("naive evaluation size guard exceeded");
  if (M < 0) throw ArgumentError("truncation must be non-negative");
  if (M == 0) return T(0);

  auto weight = [&](const Node& node, std::int64_t m) {
    T w = detail::direct_power(T(m) + params.alpha, node.a) * detail::direct_power(T(m) + params.beta, node.b);
    if (node.c != 0) w *= detail::direct_power(T(m) + *params.gamma, node.c);
    return w;
  };
  auto decoration = [&](Decoration d, std::int64_t m) {
    if (d == Decoration::none) return T(1);
    T f = detail::rising_over_factorial(params.alpha, m);
    if (d == Decoration::pochhammer3) f *= detail::rising_ratio(params.beta, *params.gamma, m);
    return f;
  };

  T total(0);
  std::vector<std::int64_t> var(K, 0);
  for (;;) {
    bool ok = true;
    for (int k = 1; k < K && ok; ++k) {
      ok = layers[k].link == Link::weak ? var[k - 1] <= var[k] : var[k - 1] < var[k];
    }
    if (ok) {
      T term = decoration(spec.prefix, var[0]) / decoration(spec.suffix, var[K - 1]);
      for (int k = 0; k < K; ++k) term *= weight(layers[k].weight, var[k]);
      total += term;
    }
    int k = K - 1;
    while (k >= 0 && ++var[k] == M) var[k--] = 0;
    if (k < 0) break;
  }
  return total;
}

/// Tail model for the adaptive evaluator.  Two power families: the boundary
/// family from the last layer and decoration offset, and the bulk family
/// W - K (total exponent minus layer count); they merge when the offset is an
/// integer.  `extra_logs` widens the log degree (used for parameter
/// derivatives, which add log factors).
TailModel default_tail_model(const SeriesSpec& spec, const ParamPoint<Real>& params, int extra_logs = 0);

struct EvalOptions {
  std::int64_t m_min = std::int64_t{1} << 10;
  std::int64_t m_max = std::int64_t{1} << 20;
  double tol = 1e-12;
  ExecPolicy policy = ExecPolicy::serial;
};

struct EvalResult {
  Real value;
  Real err;
  std::int64_t m_final = 0;
  std::vector<Checkpoint> checkpoints;
  bool accelerated = false;
  bool converged = false;
};

/// Checkpoint truncations round(2^(j/16)), deduplicated, up to `m_max`.
std::vector<std::int64_t> checkpoint_grid(std::int64_t m_max);

/// Limit estimate from the checkpoints with m in [M/32, M].
AccelResult extrapolate_window(const std::vector<Checkpoint>& checkpoints, std::int64_t M, const TailModel& model);

/// Adaptive evaluation: M doubles from m_min until consecutive limit
/// estimates agree to tol/4 (relative to max(|value|, 1)) or m_max is reached.
EvalResult eval_dp(const SeriesSpec& spec, const ParamPoint<Real>& params, const EvalOptions& opts = {});

/// Extrapolated value at one fixed truncation and tail model.
Real eval_fixed(const SeriesSpec& spec, const ParamPoint<Real>& params, std::int64_t M, const TailModel& model,
                ExecPolicy policy = ExecPolicy::serial);

}  // namespace zetalab

#include "zetalab/aux_series.hpp"

#include <algorithm>

namespace zetalab {

namespace {

constexpr int kCoupledTermsPerFamily = 3;

bool near_integer(const Real& x) { return bmp::abs(x - bmp::round(x)) < Real(1e-6); }

}  // namespace

void validate(const CoupledSeriesSpec& spec) {
  if (!spec.index.admissible()) {
    throw ArgumentError("coupled series need some index part >= 2: " + spec.index.to_string());
  }
}

TailModel coupled_tail_model(const CoupledSeriesSpec& spec, const ParamPoint<Real>& params) {
  const int n = spec.index.depth();
  const int layers = n + 1;
  const Real boundary = Real(spec.index.back() - 1) + params.alpha;
  const Real bulk(spec.index.weight() - n);
  TailModel model;
  model.terms_per_family = kCoupledTermsPerFamily;
  if (near_integer(params.alpha)) {
    model.exponents = {std::min(boundary, bulk)};
    model.log_degree = layers;
  } else {
    model.exponents = {boundary, bulk};
    model.log_degree = layers - 1;
  }
  return model;
}

EvalResult eval_coupled(const CoupledSeriesSpec& spec, const ParamPoint<Real>& params, const CoupledOptions& opts) {
  validate(spec);
  validate_params(params, 2);
  if (opts.m_min < 64 || opts.m_max < opts.m_min) throw ArgumentError("need 64 <= m_min <= m_max");
  const TailModel model = coupled_tail_model(spec, params);
  const auto tab = coupled_tables(spec, params, opts.m_max);
  const auto grid = checkpoint_grid(opts.m_max);

  EvalResult result;
  result.accelerated = true;
  std::vector<Real> terms;
  Real running(0);
  std::int64_t done = 0;
  std::size_t next = 0;
  std::optional<Real> previous;
  Real last_increment(0);
  bool fit_ok = true;
  for (std::int64_t M = opts.m_min;; M *= 2) {
    M = std::min(M, opts.m_max);
    kernels::coupled_terms(opts.policy, tab, done, M, terms);
    // Ascending accumulation keeps the sums independent of the schedule.
    for (std::int64_t t = done; t < M; ++t) {
      while (next < grid.size() && grid[next] == t) {
        result.checkpoints.push_back({t, running});
        ++next;
      }
      running += terms[t - done];
    }
    done = M;
    while (next < grid.size() && grid[next] == M) {
      result.checkpoints.push_back({M, running});
      ++next;
    }
    if (result.checkpoints.back().m != M) result.checkpoints.push_back({M, running});

    const AccelResult acc = extrapolate_window(result.checkpoints, M, model);
    const auto& cps = result.checkpoints;
    last_increment = bmp::abs(cps[cps.size() - 1].partial - cps[cps.size() - 2].partial);
    fit_ok = acc.ok;
    result.value = acc.limit;
    result.m_final = M;
    if (previous) {
      result.err = bmp::abs(acc.limit - *previous);
      const Real scale = std::max(bmp::abs(acc.limit), Real(1));
      if (acc.ok && result.err <= Real(opts.tol / 4) * scale) {
        result.converged = true;
        return result;
      }
    } else {
      result.err = last_increment;
    }
    previous = acc.limit;
    if (M >= opts.m_max) break;
  }
  if (!fit_ok) result.err = std::max(result.err, last_increment);
  return result;
}

EvalResult eval_T(const Index& index, const ParamPoint<Real>& params, const CoupledOptions& opts) {
  return eval_coupled({index, false}, params, opts);
}

EvalResult eval_Tstar(const Index& index, const ParamPoint<Real>& params, const CoupledOptions& opts) {
  return eval_coupled({index, true}, params, opts);
}

Index rotate_last_to_front(const Index& index) {
  return index.depth() == 1 ? index : cyclic_shift(index, index.depth() - 1);
}

InnerSumCheck inner_sum_check(int m, int n, const Rational& alpha) {
  if (m < 0 || m >= n) throw ArgumentError("inner sum identity needs 0 <= m < n");
  if (!(alpha > 0)) throw DomainError("inner sum identity needs alpha > 0");

  // Finite side, exact.
  Rational poch_n(1);
  Rational fact_n(1);
  for (int j = 0; j < n; ++j) {
    poch_n *= alpha + j;
    fact_n *= j + 1;
  }
  Rational finite(0);
  Rational ratio(1);  // (alpha)_l / l!
  for (int l = 0; l <= m; ++l) {
    finite += ratio / Rational(n - l);
    ratio *= (alpha + l) / Rational(l + 1);
  }
  const Rational rhs = fact_n / poch_n * finite;

  // Infinite side: partial sums over n <= l < n + L, extrapolated with tail
  // exponent alpha plus integer steps.
  const Real a = to_real(alpha);
  Real front(1);  // (alpha)_{m+1} / m!
  for (int j = 0; j <= m; ++j) front *= a + j;
  for (int j = 1; j <= m; ++j) front /= j;

  const std::int64_t top = std::int64_t{1} << 13;
  Real u(1);  // l! / (alpha)_{l+1} at l = n
  for (int j = 0; j <= n; ++j) u /= a + j;
  for (int j = 1; j <= n; ++j) u *= j;
  std::vector<Checkpoint> cps;
  const auto grid = checkpoint_grid(top);
  std::size_t next = 0;
  Real running(0);
  for (std::int64_t i = 0; i <= top; ++i) {
    while (next < grid.size() && grid[next] == i) {
      cps.push_back({i, running});
      ++next;
    }
    const std::int64_t l = n + i;
    running += u / Real(l - m);
    u *= Real(l + 1) / (a + Real(l + 1));
  }
  const TailModel model{{a}, 8, 0};
  const Real lhs = front * extrapolate_window(cps, top, model).limit;

  InnerSumCheck out{lhs, rhs, relative_difference(lhs, to_real(rhs)), false};
  out.pass = out.rel_diff <= Real(1e-8);
  return out;
}

bool verify_inner_sum_identity(int m, int n, const Rational& alpha) { return inner_sum_check(m, n, alpha).pass; }

}  // namespace zetalab

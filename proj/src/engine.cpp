#include "zetalab/engine.hpp"

#include <algorithm>
#include <cmath>

namespace zetalab {

namespace {

constexpr int kTermsPerFamily = 4;
constexpr int kGridPerOctave = 16;
constexpr std::int64_t kWindowRatio = 32;

// Offset of the decoration's tail contribution; nullopt when the decorations
// cancel or are absent.
std::optional<Real> decoration_offset(const SeriesSpec& spec, const std::vector<Layer>& layers,
                                      const ParamPoint<Real>& p) {
  if (!spec.decorated()) return std::nullopt;
  if (layers.size() == 1 && spec.prefix == spec.suffix) return std::nullopt;
  const Decoration d = spec.suffix != Decoration::none ? spec.suffix : spec.prefix;
  if (d == Decoration::pochhammer3) return p.shift3();
  return p.alpha;
}

bool near_integer(const Real& x) { return bmp::abs(x - bmp::round(x)) < Real(1e-6); }

}  // namespace

TailModel default_tail_model(const SeriesSpec& spec, const ParamPoint<Real>& params, int extra_logs) {
  const auto layers = flatten(spec);
  const int K = static_cast<int>(layers.size());
  int W = 0;
  for (const auto& l : layers) W += l.weight.total();
  const Real bulk(W - K);
  TailModel model;
  model.terms_per_family = kTermsPerFamily;
  const auto delta = decoration_offset(spec, layers, params);
  if (!delta) {
    model.exponents = {bulk};
    model.log_degree = K - 1;
  } else {
    const Real boundary = Real(layers.back().weight.total() - 2) + *delta;
    if (near_integer(*delta)) {
      model.exponents = {std::min(boundary, bulk)};
      model.log_degree = K - 1;
    } else {
      model.exponents = {boundary, bulk};
      model.log_degree = std::max(K - 2, 0);
    }
  }
  for (auto& e : model.exponents) {
    if (!(e > 0)) e = Real(1);
  }
  model.log_degree += extra_logs;
  return model;
}

std::vector<std::int64_t> checkpoint_grid(std::int64_t m_max) {
  std::vector<std::int64_t> grid;
  for (int j = 0;; ++j) {
    const auto m = static_cast<std::int64_t>(std::llround(std::exp2(static_cast<double>(j) / kGridPerOctave)));
    if (m > m_max) break;
    if (grid.empty() || grid.back() != m) grid.push_back(m);
  }
  return grid;
}

AccelResult extrapolate_window(const std::vector<Checkpoint>& checkpoints, std::int64_t M, const TailModel& model) {
  std::vector<Checkpoint> window;
  for (const auto& c : checkpoints) {
    if (c.m * kWindowRatio >= M && c.m <= M) window.push_back(c);
  }
  if (window.size() < 2) throw ArgumentError("too few checkpoints to extrapolate");
  const bool flat = std::all_of(window.begin(), window.end(),
                                [&](const Checkpoint& c) { return c.partial == window.front().partial; });
  if (flat) return {window.back().partial, Real(0), true};

  TailModel fitted = model;
  const int n = static_cast<int>(window.size());
  while (fitted.terms_per_family > 1 && 2 * fitted.unknowns() > n) --fitted.terms_per_family;
  while (fitted.log_degree > 0 && 2 * fitted.unknowns() > n) --fitted.log_degree;
  const FitResult fit = fit_tail(window, fitted);
  const Real increment = bmp::abs(window[n - 1].partial - window[n - 2].partial);
  return {fit.limit, fit.residual, fit.residual <= increment};
}

EvalResult eval_dp(const SeriesSpec& spec, const ParamPoint<Real>& params, const EvalOptions& opts) {
  validate(spec);
  validate_params(spec, params);
  if (opts.m_min < 64 || opts.m_max < opts.m_min) throw ArgumentError("need 64 <= m_min <= m_max");
  const TailModel model = default_tail_model(spec, params);
  const auto grid = checkpoint_grid(opts.m_max);

  Sweep<Real> sweep(spec, params, opts.policy);
  EvalResult result;
  result.accelerated = true;
  std::size_t next = 0;
  std::optional<Real> previous;
  Real last_increment(0);
  bool fit_ok = true;
  for (std::int64_t M = opts.m_min;; M *= 2) {
    M = std::min(M, opts.m_max);
    while (next < grid.size() && grid[next] <= M) {
      result.checkpoints.push_back({grid[next], sweep.advance_to(grid[next])});
      ++next;
    }
    if (result.checkpoints.back().m != M) result.checkpoints.push_back({M, sweep.advance_to(M)});

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

Real eval_fixed(const SeriesSpec& spec, const ParamPoint<Real>& params, std::int64_t M, const TailModel& model,
                ExecPolicy policy) {
  validate(spec);
  validate_params(spec, params);
  Sweep<Real> sweep(spec, params, policy);
  std::vector<Checkpoint> cps;
  for (auto m : checkpoint_grid(M)) {
    if (m * kWindowRatio >= M) cps.push_back({m, sweep.advance_to(m)});
  }
  if (cps.back().m != M) cps.push_back({M, sweep.advance_to(M)});
  return extrapolate_window(cps, M, model).limit;
}

}  // namespace zetalab

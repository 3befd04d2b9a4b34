#include "zetalab/relations.hpp"

#include <chrono>
#include <map>

#include "zetalab/deriv.hpp"

namespace zetalab {

namespace {

std::string params_key(const ParamPoint<Real>& p) {
  std::string key = format_decimal(p.alpha) + "/" + format_decimal(p.beta);
  if (p.gamma) key += "/" + format_decimal(*p.gamma);
  return key;
}

std::string term_key(const Term& term) {
  return std::visit(
      [](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, SeriesTerm>) {
          return "S:" + describe(t.spec) + "@" + params_key(t.params);
        } else if constexpr (std::is_same_v<T, CoupledTerm>) {
          return std::string(t.spec.star ? "T*:" : "T:") + t.spec.index.to_string() + "@" + params_key(t.params);
        } else {
          return std::string(t.which == DerivParam::alpha ? "Da" : "Db") + std::to_string(t.order) + ":" +
                 describe(t.spec) + "@" + params_key(t.params);
        }
      },
      term);
}

std::int64_t term_coeff(const Term& term) {
  return std::visit([](const auto& t) { return t.coeff; }, term);
}

EvalResult evaluate_term(const Term& term, double tol, const RunSettings& settings) {
  return std::visit(
      [&](const auto& t) -> EvalResult {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, SeriesTerm>) {
          EvalOptions opts;
          opts.m_max = settings.m_max;
          opts.tol = tol;
          opts.policy = settings.policy;
          return eval_dp(t.spec, t.params, opts);
        } else if constexpr (std::is_same_v<T, CoupledTerm>) {
          CoupledOptions opts;
          opts.m_max = settings.coupled_m_max;
          opts.m_min = std::min(opts.m_min, opts.m_max);
          opts.tol = tol;
          opts.policy = settings.policy;
          return eval_coupled(t.spec, t.params, opts);
        } else {
          EvalOptions opts;
          opts.m_max = settings.m_max;
          opts.tol = tol;
          opts.policy = settings.policy;
          const FdResult fd = fd_partial_detail(t.spec, t.which, t.order, t.params, opts);
          EvalResult out;
          out.value = fd.value;
          out.err = fd.err + fd.instability;
          out.m_final = fd.m_final;
          out.accelerated = true;
          out.converged = fd.converged && fd.instability <= Real(tol) * std::max(bmp::abs(fd.value), Real(1));
          return out;
        }
      },
      term);
}

EvalResult combine(const std::vector<Term>& terms, std::map<std::string, EvalResult>& cache, double tol,
                   const RunSettings& settings) {
  EvalResult side;
  side.value = 0;
  side.err = 0;
  side.accelerated = true;
  side.converged = true;
  for (const auto& term : terms) {
    const auto key = term_key(term);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, evaluate_term(term, tol, settings)).first;
    const EvalResult& r = it->second;
    const std::int64_t c = term_coeff(term);
    side.value += Real(c) * r.value;
    side.err += Real(c < 0 ? -c : c) * r.err;
    side.m_final = std::max(side.m_final, r.m_final);
    side.accelerated = side.accelerated && r.accelerated;
    side.converged = side.converged && r.converged;
  }
  return side;
}

SeriesTerm series(std::int64_t coeff, SeriesSpec spec, const ParamPoint<Real>& p) {
  return SeriesTerm{coeff, std::move(spec), p};
}

ParamPoint<Real> checked2(const ParamPoint<Real>& p) {
  validate_params(p, 2);
  return ParamPoint<Real>{p.alpha, p.beta, std::nullopt};
}

void require_admissible(const Index& index) {
  if (!index.admissible()) throw ArgumentError("index must have some part >= 2: " + index.to_string());
}

std::vector<int> repeat(int value, int count) { return std::vector<int>(count, value); }

std::string idx(const Index& index) { return index.to_string(); }

RelationPlan make_plan(std::string id, std::string args, const ParamPoint<Real>& p, double tol) {
  if (!(tol > 0)) throw ArgumentError("tolerance must be positive");
  RelationPlan plan;
  plan.relation_id = std::move(id);
  plan.args = std::move(args);
  plan.params = p;
  plan.arity = p.gamma ? 3 : 2;
  plan.tol = tol;
  return plan;
}

}  // namespace

RelationReport run_plan(const RelationPlan& plan, const RunSettings& settings) {
  const auto start = std::chrono::steady_clock::now();
  const double eval_tol = plan.tol * settings.eval_tol_ratio;
  std::map<std::string, EvalResult> cache;
  RelationReport report;
  report.relation_id = plan.relation_id;
  report.args = plan.args;
  report.params = plan.params;
  report.arity = plan.arity;
  report.tol = plan.tol;
  report.lhs = combine(plan.lhs, cache, eval_tol, settings);
  report.rhs = combine(plan.rhs, cache, eval_tol, settings);
  report.lhs_terms = plan.lhs.size();
  report.rhs_terms = plan.rhs.size();
  finalize(report);
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Index ones_twos_index(int m, int n) {
  if (m < 1 || n < 1) throw ArgumentError("need m, n >= 1");
  std::vector<int> parts{1};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m - 1; ++j) parts.push_back(1);
    parts.push_back(2);
  }
  return Index(parts);
}

RelationPlan plan_csf_strict(const Index& index, const ParamPoint<Real>& params, double tol) {
  require_admissible(index);
  const auto p = checked2(params);
  auto plan = make_plan("csf-strict", "index=" + idx(index), p, tol);
  for (const auto& x : csf_lhs_terms(index)) plan.lhs.push_back(series(1, spec_Z_I(x), p));
  for (const auto& x : csf_rhs_terms(index)) plan.rhs.push_back(series(1, spec_Z_II(x), p));
  return plan;
}

RelationPlan plan_csf_star(const Index& index, const ParamPoint<Real>& params, double tol) {
  require_admissible(index);
  const auto p = checked2(params);
  auto plan = make_plan("csf-star", "index=" + idx(index), p, tol);
  for (const auto& x : csf_lhs_terms(index)) plan.lhs.push_back(series(1, spec_Zstar_I(x), p));
  const int k = index.weight();
  const int n = index.depth();
  plan.rhs.push_back(series(k - n, spec_Z_single(n, k - n + 1), p));
  plan.rhs.push_back(series(n, spec_Z_single(n + 1, k - n), p));
  return plan;
}

RelationPlan plan_sum_formula(int k, int n, const ParamPoint<Real>& params, double tol) {
  const auto comps = compositions(k, n);
  const auto p = checked2(params);
  auto plan = make_plan("sum-formula", "k=" + std::to_string(k) + " n=" + std::to_string(n), p, tol);
  for (const auto& x : comps) plan.lhs.push_back(series(1, spec_Zstar_I(x), p));
  const auto c1 = binomial(k - 2, n - 1);
  const auto c2 = binomial(k - 2, n - 2);
  if (c1 != 0) plan.rhs.push_back(series(c1, spec_Z_single(n - 1, k - n + 1), p));
  if (c2 != 0) plan.rhs.push_back(series(c2, spec_Z_single(n, k - n), p));
  return plan;
}

RelationPlan plan_eq12(int m, int n, const ParamPoint<Real>& params, double tol) {
  const Index index = ones_twos_index(m, n);
  const auto p = checked2(params);
  auto plan = make_plan("eq12", "m=" + std::to_string(m) + " n=" + std::to_string(n), p, tol);
  plan.lhs.push_back(series(1, spec_Zstar_I(index), p));
  plan.rhs.push_back(series(1, spec_Z_single(m * n, n + 1), p));
  plan.rhs.push_back(series(m, spec_Z_single(m * n + 1, n), p));
  return plan;
}

RelationPlan plan_eq15(int n, const ParamPoint<Real>& params, double tol) {
  if (n < 1) throw ArgumentError("need n >= 1");
  const auto p = checked2(params);
  auto plan = make_plan("eq15", "n=" + std::to_string(n), p, tol);
  std::vector<int> left{1};
  for (int i = 0; i < n; ++i) left.push_back(2);
  std::vector<int> right = repeat(2, n - 1);
  right.push_back(3);
  plan.lhs.push_back(series(1, spec_Z_I(Index(left)), p));
  plan.rhs.push_back(series(1, spec_Z_II(Index(right)), p));
  return plan;
}

RelationPlan plan_eq16(int n, int r, const ParamPoint<Real>& params, double tol) {
  if (n < 1 || r < 0) throw ArgumentError("need n >= 1 and r >= 0");
  const auto p = checked2(params);
  auto plan = make_plan("eq16", "n=" + std::to_string(n) + " r=" + std::to_string(r), p, tol);
  // Left: chains r_1..r_n, shifts s_1..s_n on positions 2..n+1.
  for (const auto& c : weak_compositions(r, 2 * n)) {
    std::vector<int> chains(c.begin(), c.begin() + n);
    std::vector<int> a{0};
    for (int i = 0; i < n; ++i) a.push_back(1 + c[n + i]);
    plan.lhs.push_back(series(1, spec_Zr(chains, a, repeat(1, n + 1)), p));
  }
  // Right: chains r_1..r_{n-1}, shifts s_1..s_n, weight (1 + s_n).
  for (const auto& c : weak_compositions(r, 2 * n - 1)) {
    std::vector<int> chains(c.begin(), c.begin() + (n - 1));
    std::vector<int> a;
    for (int i = 0; i < n; ++i) a.push_back(1 + c[n - 1 + i]);
    a.back() += 1;
    plan.rhs.push_back(series(1 + c.back(), spec_Zr(chains, a, repeat(1, n)), p));
  }
  return plan;
}

RelationPlan plan_eq17(int n, int r, const ParamPoint<Real>& params, double tol) {
  if (n < 1 || r < 0) throw ArgumentError("need n >= 1 and r >= 0");
  const auto p = checked2(params);
  auto plan = make_plan("eq17", "n=" + std::to_string(n) + " r=" + std::to_string(r), p, tol);
  for (const auto& c : weak_compositions(r, n + 1)) {
    std::vector<int> parts{1 + c[0]};
    for (int i = 1; i <= n; ++i) parts.push_back(2 + c[i]);
    plan.lhs.push_back(series(1, spec_Z_I(Index(parts)), p));
  }
  for (const auto& c : weak_compositions(r, n)) {
    std::vector<int> parts;
    for (int i = 0; i < n; ++i) parts.push_back(2 + c[i]);
    parts.back() += 1;
    plan.rhs.push_back(series(1, spec_Z_II(Index(parts)), p));
  }
  return plan;
}

RelationPlan plan_deriv12_alpha(int m, int n, int r, const ParamPoint<Real>& params, double tol) {
  if (m < 1 || n < 1 || r < 0) throw ArgumentError("need m, n >= 1 and r >= 0");
  const auto p = checked2(params);
  auto plan = make_plan("deriv12-alpha",
                        "m=" + std::to_string(m) + " n=" + std::to_string(n) + " r=" + std::to_string(r), p, tol);
  // Each run of ones before a 2 is fed by m insertion slots, so a block
  // receiving t extra ones arises binom(m-1+t, t) ways.
  for (const auto& t : weak_compositions(r, n)) {
    std::int64_t coeff = 1;
    std::vector<int> parts{1};
    for (int i = 0; i < n; ++i) {
      coeff *= binomial(m - 1 + t[i], t[i]);
      for (int j = 0; j < m - 1 + t[i]; ++j) parts.push_back(1);
      parts.push_back(2);
    }
    plan.lhs.push_back(series(coeff, spec_Zstar_I(Index(parts)), p));
  }
  const int mn = m * n;
  plan.rhs.push_back(series(binomial(mn + r - 1, r), spec_Z_single(mn + r, n + 1), p));
  plan.rhs.push_back(series(m * binomial(mn + r, r), spec_Z_single(mn + r + 1, n), p));
  return plan;
}

RelationPlan plan_deriv12_beta(int m, int n, int r, const ParamPoint<Real>& params, double tol) {
  if (m < 1 || n < 1 || r < 0) throw ArgumentError("need m, n >= 1 and r >= 0");
  const auto p = checked2(params);
  auto plan = make_plan("deriv12-beta",
                        "m=" + std::to_string(m) + " n=" + std::to_string(n) + " r=" + std::to_string(r), p, tol);
  for (const auto& c : weak_compositions(r, n + 1)) {
    std::vector<int> parts{1 + c[0]};
    for (int i = 1; i <= n; ++i) {
      for (int j = 0; j < m - 1; ++j) parts.push_back(1);
      parts.push_back(2 + c[i]);
    }
    plan.lhs.push_back(series(1, spec_Zstar_I(Index(parts)), p));
  }
  const int mn = m * n;
  plan.rhs.push_back(series(binomial(n + r, r), spec_Z_single(mn, n + r + 1), p));
  plan.rhs.push_back(series(m * binomial(n + r - 1, r), spec_Z_single(mn + 1, n + r), p));
  return plan;
}

RelationPlan plan_c2_symmetry(const Index& indexK, const Index& indexL, const ParamPoint<Real>& params, double tol) {
  const int total = indexK.depth() + indexL.depth();
  if (indexK.weight() != total || indexL.weight() != total) {
    throw ArgumentError("symmetry needs weight(K) = weight(L) = depth(K) + depth(L)");
  }
  const auto p = checked2(params);
  const ParamPoint<Real> swapped{p.beta, p.alpha, std::nullopt};
  auto plan = make_plan("c2-symmetry", "K=" + idx(indexK) + " L=" + idx(indexL), p, tol);
  for (const auto& x : csf_lhs_terms(indexK)) plan.lhs.push_back(series(1, spec_Zstar_I(x), p));
  for (const auto& x : csf_lhs_terms(indexL)) plan.rhs.push_back(series(1, spec_Zstar_I(x), swapped));
  return plan;
}

RelationPlan plan_eq21(int s, const ParamPoint<Real>& params3, double tol) {
  if (s < 2) throw ArgumentError("need s >= 2");
  if (!params3.gamma) throw ArgumentError("eq21 needs gamma");
  validate_params(params3, 3);
  auto plan = make_plan("eq21", "s=" + std::to_string(s), params3, tol);
  std::vector<int> parts{1};
  for (int i = 0; i < s - 1; ++i) parts.push_back(2);
  plan.lhs.push_back(series(1, spec_Zstar_I3(Index(parts)), params3));
  ParamPoint<Real> reflected = params3;
  reflected.gamma = params3.shift3();
  plan.rhs.push_back(series(1, spec_Z3_single(s - 1, s - 1, 1), params3));
  plan.rhs.push_back(series(1, spec_Z3_single(s - 1, s - 1, 1), reflected));
  return plan;
}

RelationPlan plan_lemma1(const Index& index, const ParamPoint<Real>& params, bool star, double tol) {
  require_admissible(index);
  const auto p = checked2(params);
  auto plan = make_plan(star ? "lemma1-star" : "lemma1-strict", "index=" + idx(index), p, tol);
  const Index rotated = rotate_last_to_front(index);
  plan.lhs.push_back(CoupledTerm{1, {index, star}, p});
  plan.lhs.push_back(CoupledTerm{-1, {rotated, star}, p});

  const auto& k = index.parts();
  const int n = index.depth();
  const int kn = index.back();
  if (star) {
    const int w = index.weight();
    if (kn - 1 != 0) plan.rhs.push_back(series(kn - 1, spec_Z_single(n, w - n + 1), p));
    plan.rhs.push_back(series(1, spec_Z_single(n + 1, w - n), p));
  } else {
    std::vector<int> bumped = rotated.parts();
    bumped.back() += 1;
    plan.rhs.push_back(series(1, spec_Z_II(Index(bumped)), p));
  }
  for (int j = 0; j <= kn - 2; ++j) {
    std::vector<int> parts{j + 1};
    parts.insert(parts.end(), k.begin(), k.end() - 1);
    parts.push_back(kn - j);
    const Index x(parts);
    plan.rhs.push_back(series(-1, star ? spec_Zstar_I(x) : spec_Z_I(x), p));
  }
  return plan;
}

RelationReport verify_csf_strict(const Index& index, const ParamPoint<Real>& params, double tol,
                                 const RunSettings& settings) {
  return run_plan(plan_csf_strict(index, params, tol), settings);
}

RelationReport verify_csf_star(const Index& index, const ParamPoint<Real>& params, double tol,
                               const RunSettings& settings) {
  return run_plan(plan_csf_star(index, params, tol), settings);
}

RelationReport verify_sum_formula(int k, int n, const ParamPoint<Real>& params, double tol,
                                  const RunSettings& settings) {
  return run_plan(plan_sum_formula(k, n, params, tol), settings);
}

RelationReport verify_eq12(int m, int n, const ParamPoint<Real>& params, double tol, const RunSettings& settings) {
  return run_plan(plan_eq12(m, n, params, tol), settings);
}

RelationReport verify_eq15(int n, const ParamPoint<Real>& params, double tol, const RunSettings& settings) {
  return run_plan(plan_eq15(n, params, tol), settings);
}

RelationReport verify_eq16(int n, int r, const ParamPoint<Real>& params, double tol, const RunSettings& settings) {
  return run_plan(plan_eq16(n, r, params, tol), settings);
}

RelationReport verify_eq17(int n, int r, const ParamPoint<Real>& params, double tol, const RunSettings& settings) {
  return run_plan(plan_eq17(n, r, params, tol), settings);
}

RelationReport verify_deriv12_alpha(int m, int n, int r, const ParamPoint<Real>& params, double tol,
                                    const RunSettings& settings) {
  return run_plan(plan_deriv12_alpha(m, n, r, params, tol), settings);
}

RelationReport verify_deriv12_beta(int m, int n, int r, const ParamPoint<Real>& params, double tol,
                                   const RunSettings& settings) {
  return run_plan(plan_deriv12_beta(m, n, r, params, tol), settings);
}

RelationReport verify_symmetry_c2(const Index& indexK, const Index& indexL, const ParamPoint<Real>& params,
                                  double tol, const RunSettings& settings) {
  return run_plan(plan_c2_symmetry(indexK, indexL, params, tol), settings);
}

RelationReport verify_eq21(int s, const ParamPoint<Real>& params3, double tol, const RunSettings& settings) {
  return run_plan(plan_eq21(s, params3, tol), settings);
}

RelationReport verify_lemma1(const Index& index, const ParamPoint<Real>& params, bool star, double tol,
                             const RunSettings& settings) {
  return run_plan(plan_lemma1(index, params, star, tol), settings);
}

}  // namespace zetalab

#include "zetalab/deriv.hpp"

#include <functional>
#include <map>

namespace zetalab {

Real default_fd_step(const Real& param) {
  const Real unit = bmp::ldexp(Real(1), -static_cast<int>(working_precision() / 4));
  return unit * std::max(Real(1), bmp::abs(param));
}

namespace {

Real& slot(ParamPoint<Real>& p, DerivParam which) { return which == DerivParam::alpha ? p.alpha : p.beta; }

Real factorial(int r) {
  Real f(1);
  for (int i = 2; i <= r; ++i) f *= i;
  return f;
}

}  // namespace

FdResult fd_partial_detail(const SeriesSpec& spec, DerivParam which, int r, const ParamPoint<Real>& params,
                           const EvalOptions& opts, std::optional<Real> h) {
  if (r < 0 || r > kMaxFdOrder) throw ArgumentError("finite-difference order must be in 0..3");
  validate(spec);
  validate_params(spec, params);
  const EvalResult centre = eval_dp(spec, params, opts);
  if (r == 0) return {centre.value, Real(0), centre.err, centre.m_final, centre.converged};

  ParamPoint<Real> base = params;
  const Real x0 = slot(base, which);
  const Real step = h ? *h : default_fd_step(x0);
  if (!(step > 0)) throw ArgumentError("finite-difference step must be positive");
  if (!(x0 - Real(r) * step > 0)) throw ArgumentError("parameter too close to the domain boundary for this step");

  const TailModel model = default_tail_model(spec, params, r);
  const std::int64_t M = centre.m_final;
  // Stencil values keyed by offset in units of step/2.
  std::map<int, Real> values;
  auto f = [&](int half_steps) -> const Real& {
    auto it = values.find(half_steps);
    if (it != values.end()) return it->second;
    ParamPoint<Real> p = base;
    slot(p, which) = x0 + Real(half_steps) * step / 2;
    try {
      validate_params(spec, p);
    } catch (const DomainError&) {
      throw ArgumentError("finite-difference stencil leaves the parameter domain");
    }
    return values.emplace(half_steps, eval_fixed(spec, p, M, model, opts.policy)).first->second;
  };
  // Central difference with step u * (step/2), u in {1, 2}.
  auto diff = [&](int u) -> Real {
    const Real hh = Real(u) * step / 2;
    switch (r) {
      case 1: return (f(u) - f(-u)) / (2 * hh);
      case 2: return (f(u) - 2 * f(0) + f(-u)) / (hh * hh);
      default: return (f(2 * u) - 2 * f(u) + 2 * f(-u) - f(-2 * u)) / (2 * hh * hh * hh);
    }
  };
  const Real coarse = diff(2);
  const Real fine = diff(1);
  const Real refined = (4 * fine - coarse) / 3;
  const Real norm = Real(r % 2 ? -1 : 1) / factorial(r);
  return {norm * refined, bmp::abs(norm) * bmp::abs(fine - coarse), centre.err, M, centre.converged};
}

Real fd_partial(const SeriesSpec& spec, DerivParam which, int r, const ParamPoint<Real>& params,
                std::optional<Real> h) {
  return fd_partial_detail(spec, which, r, params, {}, h).value;
}

std::vector<ExpansionTerm> alpha_star_terms(const Index& index, int r) {
  if (r < 0) throw ArgumentError("derivative order must be non-negative");
  const int n = index.depth();
  std::vector<ExpansionTerm> terms;
  if (n == 1) {
    if (r == 0) terms.push_back({1, spec_Zstar_I(index)});
    return terms;
  }
  for (const auto& c : weak_compositions(r, n - 1)) {
    std::vector<int> parts;
    for (int i = 0; i < n; ++i) {
      parts.push_back(index[i]);
      if (i + 1 < n) parts.insert(parts.end(), c[i], 1);
    }
    terms.push_back({1, spec_Zstar_I(Index(parts))});
  }
  return terms;
}

std::vector<ExpansionTerm> alpha_general_terms(const SeriesSpec& spec, int r) {
  if (r < 0) throw ArgumentError("derivative order must be non-negative");
  validate(spec);
  const bool strict_form = spec.arity == 2 && spec.prefix == Decoration::pochhammer &&
                           spec.suffix == Decoration::pochhammer &&
                           std::all_of(spec.links.begin(), spec.links.end(), [](Link l) { return l == Link::strict; }) &&
                           std::all_of(spec.chains.begin(), spec.chains.end(), [](int c) { return c == 0; });
  if (!strict_form) throw ArgumentError("alpha expansion needs a strict chain-free decorated 2-parameter series");
  const int n = spec.depth();
  std::vector<int> b;
  for (const auto& p : spec.positions) b.push_back(p.b);
  std::vector<ExpansionTerm> terms;
  for (const auto& c : weak_compositions(r, 2 * n - 1)) {
    std::vector<int> chains(c.begin(), c.begin() + (n - 1));
    std::vector<int> a;
    std::int64_t coeff = 1;
    for (int i = 0; i < n; ++i) {
      const int s = c[n - 1 + i];
      const int ai = spec.positions[i].a;
      coeff *= binomial(ai - 1 + s, s);
      a.push_back(ai + s);
    }
    if (coeff == 0) continue;
    terms.push_back({coeff, spec_Zr(chains, a, b)});
  }
  return terms;
}

std::vector<ExpansionTerm> beta_terms(const SeriesSpec& spec, int r) {
  if (r < 0) throw ArgumentError("derivative order must be non-negative");
  validate(spec);
  if (spec.prefix == Decoration::pochhammer3 || spec.suffix == Decoration::pochhammer3) {
    throw ArgumentError("beta expansion is not defined for 3-parameter decorations");
  }
  std::vector<ExpansionTerm> terms;
  for (const auto& c : weak_compositions(r, spec.depth())) {
    SeriesSpec raised = spec;
    std::int64_t coeff = 1;
    for (int i = 0; i < spec.depth(); ++i) {
      coeff *= binomial(spec.positions[i].b - 1 + c[i], c[i]);
      raised.positions[i].b += c[i];
    }
    if (coeff == 0) continue;
    terms.push_back({coeff, raised});
  }
  return terms;
}

namespace {

Real sum_terms(const std::vector<ExpansionTerm>& terms, const ParamPoint<Real>& params, const EvalOptions& opts) {
  Real total(0);
  for (const auto& t : terms) total += Real(t.coeff) * eval_dp(t.spec, params, opts).value;
  return total;
}

}  // namespace

Real expansion_alpha_star(const Index& index, int r, const ParamPoint<Real>& params, const EvalOptions& opts) {
  return sum_terms(alpha_star_terms(index, r), params, opts);
}

Real expansion_alpha_general(const SeriesSpec& spec, int r, const ParamPoint<Real>& params, const EvalOptions& opts) {
  return sum_terms(alpha_general_terms(spec, r), params, opts);
}

Real expansion_beta(const SeriesSpec& spec, int r, const ParamPoint<Real>& params, const EvalOptions& opts) {
  return sum_terms(beta_terms(spec, r), params, opts);
}

std::string to_string(ExpansionKind kind) {
  switch (kind) {
    case ExpansionKind::alpha_star: return "alpha-star";
    case ExpansionKind::alpha_strict: return "alpha-strict";
    case ExpansionKind::beta: return "beta";
  }
  return "beta";
}

ExpansionKind parse_expansion_kind(const std::string& text) {
  if (text == "alpha-star") return ExpansionKind::alpha_star;
  if (text == "alpha-strict") return ExpansionKind::alpha_strict;
  if (text == "beta") return ExpansionKind::beta;
  throw ArgumentError("unknown expansion kind '" + text + "'");
}

RelationPlan plan_expansion(ExpansionKind kind, const ExpansionTarget& target, int r, const ParamPoint<Real>& params,
                            double tol) {
  if (r < 0 || r > kMaxFdOrder) throw ArgumentError("expansion order must be in 0..3");
  if (!(tol > 0)) throw ArgumentError("tolerance must be positive");
  const Index* index = std::get_if<Index>(&target);
  if (kind == ExpansionKind::alpha_star && !index) throw ArgumentError("alpha-star expansion takes an index");

  SeriesSpec base;
  if (index) {
    base = kind == ExpansionKind::alpha_strict ? spec_Z_I(*index) : spec_Zstar_I(*index);
  } else {
    base = std::get<SeriesSpec>(target);
    validate(base);
  }
  validate_params(base, params);

  std::vector<ExpansionTerm> terms;
  switch (kind) {
    case ExpansionKind::alpha_star: terms = alpha_star_terms(*index, r); break;
    case ExpansionKind::alpha_strict: terms = alpha_general_terms(base, r); break;
    case ExpansionKind::beta: terms = beta_terms(base, r); break;
  }

  RelationPlan plan;
  plan.relation_id = "expansion";
  plan.args = "kind=" + to_string(kind) + (index ? " index=" + index->to_string() : " spec=" + describe(base)) +
              " r=" + std::to_string(r);
  plan.params = params;
  plan.arity = base.arity;
  plan.tol = tol;
  for (const auto& t : terms) plan.lhs.push_back(SeriesTerm{t.coeff, t.spec, params});
  const DerivParam which = kind == ExpansionKind::beta ? DerivParam::beta : DerivParam::alpha;
  plan.rhs.push_back(FdTerm{1, base, which, r, params});
  return plan;
}

RelationReport verify_expansion(ExpansionKind kind, const ExpansionTarget& target, int r,
                                const ParamPoint<Real>& params, double tol, const RunSettings& settings) {
  return run_plan(plan_expansion(kind, target, r, params, tol), settings);
}

namespace {

// Truncated power series in eps with exact coefficients.
class Jet {
 public:
  Jet(int degree, const Rational& constant, const Rational& slope = Rational(0)) : c_(degree + 1, Rational(0)) {
    c_[0] = constant;
    if (degree >= 1) c_[1] = slope;
  }

  const Rational& operator[](int k) const { return c_[k]; }

  Jet& operator*=(const Jet& o) {
    std::vector<Rational> out(c_.size(), Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) {
      for (std::size_t j = 0; i + j < c_.size(); ++j) out[i + j] += c_[i] * o.c_[j];
    }
    c_ = std::move(out);
    return *this;
  }

  Jet inverse() const {
    Jet out(static_cast<int>(c_.size()) - 1, Rational(1) / c_[0]);
    for (std::size_t k = 1; k < c_.size(); ++k) {
      Rational s(0);
      for (std::size_t i = 1; i <= k; ++i) s += c_[i] * out.c_[k - i];
      out.c_[k] = -s / c_[0];
    }
    return out;
  }

 private:
  std::vector<Rational> c_;
};

// prod_{j=lo}^{hi-1} (alpha + j + eps)
Jet rising_jet(int degree, const Rational& alpha, std::int64_t lo, std::int64_t hi) {
  Jet out(degree, Rational(1));
  for (std::int64_t j = lo; j < hi; ++j) out *= Jet(degree, alpha + Rational(j), Rational(1));
  return out;
}

// Sum over lo <= l_1 <= ... <= l_q <= hi (l_q < hi when strict) of prod 1/(l+alpha).
Rational chain_sum(const Rational& alpha, std::int64_t lo, std::int64_t hi, int q, bool strict) {
  if (q == 0) return Rational(1);
  const std::int64_t top = strict ? hi - 1 : hi;
  Rational total(0);
  std::function<void(int, std::int64_t, Rational)> rec = [&](int left, std::int64_t from, Rational acc) {
    if (left == 0) {
      total += acc;
      return;
    }
    for (std::int64_t l = from; l <= top; ++l) rec(left - 1, l, acc / (alpha + Rational(l)));
  };
  rec(q, lo, Rational(1));
  return total;
}

}  // namespace

TermIdentityCheck check_alpha_term_identity(const std::vector<std::int64_t>& m, int r, const Rational& alpha,
                                            bool strict) {
  if (m.empty()) throw ArgumentError("need at least one variable");
  if (r < 0) throw ArgumentError("derivative order must be non-negative");
  if (!(alpha > 0)) throw DomainError("alpha must be positive");
  if (m.front() < 0) throw ArgumentError("variables must be non-negative");
  for (std::size_t i = 1; i < m.size(); ++i) {
    if (strict ? m[i - 1] >= m[i] : m[i - 1] > m[i]) throw ArgumentError("variables violate the ordering");
  }
  const int n = static_cast<int>(m.size());

  Jet f = rising_jet(r, alpha, 0, m.front());
  f *= rising_jet(r, alpha, 0, m.back()).inverse();
  if (!strict) {
    for (int i = 1; i < n; ++i) f *= Jet(r, alpha + Rational(m[i]), Rational(1)).inverse();
  }
  TermIdentityCheck out;
  out.lhs = (r % 2 ? Rational(-1) : Rational(1)) * f[r];

  const Rational base = f[0];
  Rational chains(0);
  for (const auto& c : weak_compositions(r, n - 1)) {
    Rational prod(1);
    for (int i = 0; i + 1 < n; ++i) prod *= chain_sum(alpha, m[i], m[i + 1], c[i], strict);
    chains += prod;
  }
  out.rhs = base * chains;
  out.equal = out.lhs == out.rhs;
  return out;
}

}  // namespace zetalab

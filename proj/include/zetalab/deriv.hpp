#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "zetalab/engine.hpp"
#include "zetalab/index.hpp"
#include "zetalab/relations.hpp"

namespace zetalab {

inline constexpr int kMaxFdOrder = 3;

/// Default step 2^(-precision/4) * max(1, |param|).
Real default_fd_step(const Real& param);

struct FdResult {
  /// (-1)^r / r! times the r-th partial derivative.
  Real value;
  /// |D(h) - D(h/2)| of the normalized stencil estimates.
  Real instability;
  /// Error estimate of the centre evaluation, carried over.
  Real err;
  std::int64_t m_final = 0;
  bool converged = false;
};

/// Central differences of order r (2r+1-point stencil at most) at steps h and
/// h/2 followed by one Richardson step.  The centre is evaluated adaptively;
/// every stencil point then reuses its truncation and tail model (with r extra
/// log powers), so the differences act on one linear extrapolation.
FdResult fd_partial_detail(const SeriesSpec& spec, DerivParam which, int r, const ParamPoint<Real>& params,
                           const EvalOptions& opts = {}, std::optional<Real> h = std::nullopt);
Real fd_partial(const SeriesSpec& spec, DerivParam which, int r, const ParamPoint<Real>& params,
                std::optional<Real> h = std::nullopt);

struct ExpansionTerm {
  std::int64_t coeff = 1;
  SeriesSpec spec;
};

/// Weak series with {1}^{r_i} inserted after position i < n, summed over
/// r_1 + ... + r_{n-1} = r.  Empty for depth 1 and r >= 1.
std::vector<ExpansionTerm> alpha_star_terms(const Index& index, int r);
/// Binomial-weighted mixed series over r_1..r_{n-1}, s_1..s_n summing to r,
/// coefficient prod binom(a_i - 1 + s_i, s_i).  `spec` must be a strict,
/// chain-free, Pochhammer-decorated 2-parameter series.
std::vector<ExpansionTerm> alpha_general_terms(const SeriesSpec& spec, int r);
/// b_i raised by r_i with coefficient prod binom(b_i - 1 + r_i, r_i).  Not
/// defined for 3-parameter decorations (beta enters them).
std::vector<ExpansionTerm> beta_terms(const SeriesSpec& spec, int r);

Real expansion_alpha_star(const Index& index, int r, const ParamPoint<Real>& params, const EvalOptions& opts = {});
Real expansion_alpha_general(const SeriesSpec& spec, int r, const ParamPoint<Real>& params,
                             const EvalOptions& opts = {});
Real expansion_beta(const SeriesSpec& spec, int r, const ParamPoint<Real>& params, const EvalOptions& opts = {});

enum class ExpansionKind { alpha_star, alpha_strict, beta };

std::string to_string(ExpansionKind kind);
ExpansionKind parse_expansion_kind(const std::string& text);

/// An index selects the named series (weak first kind for alpha-star and beta,
/// strict first kind for alpha-strict); a spec is used as given.
using ExpansionTarget = std::variant<Index, SeriesSpec>;

RelationPlan plan_expansion(ExpansionKind kind, const ExpansionTarget& target, int r, const ParamPoint<Real>& params,
                            double tol = kDefaultExpansionTol);
RelationReport verify_expansion(ExpansionKind kind, const ExpansionTarget& target, int r,
                                const ParamPoint<Real>& params, double tol = kDefaultExpansionTol,
                                const RunSettings& settings = {});

/// Exact check of the term-level alpha-derivative identity at a fixed
/// tuple 0 <= m_1 <= ... <= m_n (strictly increasing when `strict`):
///   weak:   (-1)^r/r! d^r/dalpha^r [ (alpha)_{m_1}/(alpha)_{m_n} prod_{i>=2} 1/(m_i+alpha) ]
///           = base * sum over chains m_i <= l_1 <= ... <= l_{r_i} <= m_{i+1}
///   strict: (-1)^r/r! d^r/dalpha^r [ (alpha)_{m_1}/(alpha)_{m_n} ]
///           = base * sum over chains m_i <= l_1 <= ... <= l_{r_i} < m_{i+1}
/// with prod 1/(l_j+alpha) weights.  The left side uses truncated Taylor
/// arithmetic, the right side literal chain enumeration.
struct TermIdentityCheck {
  Rational lhs;
  Rational rhs;
  bool equal = false;
};

TermIdentityCheck check_alpha_term_identity(const std::vector<std::int64_t>& m, int r, const Rational& alpha,
                                            bool strict);

}  // namespace zetalab

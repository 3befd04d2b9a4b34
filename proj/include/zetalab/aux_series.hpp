#pragma once

#include <cstdint>
#include <vector>

#include "zetalab/engine.hpp"
#include "zetalab/index.hpp"
#include "zetalab/kernels.hpp"
#include "zetalab/params.hpp"
#include "zetalab/pochhammer.hpp"

namespace zetalab {

/// Coupled series
///   sum (alpha)_{m_0}/m_0! * m_n!/(alpha)_{m_n} * prod_i 1/((m_i+alpha)(m_i+beta)^{k_i-1}) / (m_n - m_0)
/// over 0 <= m_0 < m_1 < ... < m_n (strict) or 0 <= m_0 <= ... <= m_n with
/// m_0 != m_n (star).
struct CoupledSeriesSpec {
  Index index;
  bool star = false;
};

struct CoupledOptions {
  std::int64_t m_min = 512;
  std::int64_t m_max = std::int64_t{1} << 13;
  double tol = 1e-6;
  ExecPolicy policy = ExecPolicy::serial;
};

void validate(const CoupledSeriesSpec& spec);

/// Kernel tables covering 0 <= m <= M.
template <class T>
kernels::CoupledTables<T> coupled_tables(const CoupledSeriesSpec& spec, const ParamPoint<T>& params, std::int64_t M) {
  validate(spec);
  validate_params(params, 2);
  kernels::CoupledTables<T> tab;
  const auto poch = build_pochhammer(params.alpha, M);
  tab.prefix = poch.prefix;
  tab.suffix = poch.suffix;
  tab.inverse.assign(M + 1, T(0));
  for (std::int64_t d = 1; d <= M; ++d) tab.inverse[d] = T(1) / T(d);
  for (int k : spec.index.parts()) {
    const Node node{1, k - 1, 0};
    std::vector<T> w(M + 1);
    for (std::int64_t m = 0; m <= M; ++m) w[m] = kernels::node_weight(node, params, m);
    tab.weights.push_back(std::move(w));
  }
  tab.links.assign(spec.index.depth(), spec.star ? Link::weak : Link::strict);
  return tab;
}

/// Truncated sums (all variables < M) for each M in `Ms`.
template <class T>
std::vector<T> coupled_partial_sums(const CoupledSeriesSpec& spec, const ParamPoint<T>& params,
                                    const std::vector<std::int64_t>& Ms, ExecPolicy policy = ExecPolicy::serial) {
  std::int64_t top = 0;
  for (auto M : Ms) {
    if (M < 0) throw ArgumentError("truncation must be non-negative");
    top = std::max(top, M);
  }
  const auto tab = coupled_tables(spec, params, top);
  std::vector<T> terms;
  kernels::coupled_terms(policy, tab, 0, top, terms);
  std::vector<T> prefix_sums(top + 1, T(0));
  for (std::int64_t t = 0; t < top; ++t) prefix_sums[t + 1] = prefix_sums[t] + terms[t];
  std::vector<T> out;
  out.reserve(Ms.size());
  for (auto M : Ms) out.push_back(prefix_sums[M]);
  return out;
}

/// Two power families: k_n + alpha - 1 from the outer boundary and
/// weight - depth from the bulk, merged for integer alpha.
TailModel coupled_tail_model(const CoupledSeriesSpec& spec, const ParamPoint<Real>& params);

EvalResult eval_coupled(const CoupledSeriesSpec& spec, const ParamPoint<Real>& params, const CoupledOptions& opts = {});
EvalResult eval_T(const Index& index, const ParamPoint<Real>& params, const CoupledOptions& opts = {});
EvalResult eval_Tstar(const Index& index, const ParamPoint<Real>& params, const CoupledOptions& opts = {});

/// The rotation (k_n, k_1, ..., k_{n-1}).
Index rotate_last_to_front(const Index& index);

struct InnerSumCheck {
  Real lhs;
  Rational rhs;
  Real rel_diff;
  bool pass = false;
};

/// (alpha)_{m+1}/m! sum_{l>=n} l!/((alpha)_{l+1}(l-m)) against the finite
/// n!/(alpha)_n sum_{l=0}^{m} (alpha)_l/(l!(n-l)) for 0 <= m < n.
InnerSumCheck inner_sum_check(int m, int n, const Rational& alpha);
bool verify_inner_sum_identity(int m, int n, const Rational& alpha);

}  // namespace zetalab

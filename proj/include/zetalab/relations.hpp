#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "zetalab/aux_series.hpp"
#include "zetalab/engine.hpp"
#include "zetalab/index.hpp"
#include "zetalab/report.hpp"

namespace zetalab {

inline constexpr double kDefaultRelationTol = 1e-6;
inline constexpr double kDefaultLemmaTol = 1e-4;
inline constexpr double kDefaultExpansionTol = 1e-4;

enum class DerivParam { alpha, beta };

/// coeff * value of a nested series.
struct SeriesTerm {
  std::int64_t coeff = 1;
  SeriesSpec spec;
  ParamPoint<Real> params;
};

/// coeff * value of a coupled series.
struct CoupledTerm {
  std::int64_t coeff = 1;
  CoupledSeriesSpec spec;
  ParamPoint<Real> params;
};

/// coeff * (-1)^order / order! * d^order/d(param)^order of a nested series,
/// by finite differences.
struct FdTerm {
  std::int64_t coeff = 1;
  SeriesSpec spec;
  DerivParam which = DerivParam::alpha;
  int order = 0;
  ParamPoint<Real> params;
};

using Term = std::variant<SeriesTerm, CoupledTerm, FdTerm>;

/// A relation instance reduced to two term lists.  Building a plan validates
/// the arguments; evaluation is separate.
struct RelationPlan {
  std::string relation_id;
  std::string args;
  ParamPoint<Real> params;
  int arity = 2;
  std::vector<Term> lhs;
  std::vector<Term> rhs;
  double tol = kDefaultRelationTol;
};

struct RunSettings {
  std::int64_t m_max = std::int64_t{1} << 20;
  std::int64_t coupled_m_max = std::int64_t{1} << 13;
  /// Per-term evaluation tolerance as a fraction of the relation tolerance.
  double eval_tol_ratio = 0.01;
  ExecPolicy policy = ExecPolicy::serial;
};

/// Evaluates every term independently (identical terms are evaluated once)
/// and compares the two sides.
RelationReport run_plan(const RelationPlan& plan, const RunSettings& settings = {});

RelationPlan plan_csf_strict(const Index& index, const ParamPoint<Real>& params, double tol = kDefaultRelationTol);
RelationPlan plan_csf_star(const Index& index, const ParamPoint<Real>& params, double tol = kDefaultRelationTol);
RelationPlan plan_sum_formula(int k, int n, const ParamPoint<Real>& params, double tol = kDefaultRelationTol);
RelationPlan plan_eq12(int m, int n, const ParamPoint<Real>& params, double tol = kDefaultRelationTol);
RelationPlan plan_eq15(int n, const ParamPoint<Real>& params, double tol = kDefaultRelationTol);
RelationPlan plan_eq16(int n, int r, const ParamPoint<Real>& params, double tol = kDefaultRelationTol);
RelationPlan plan_eq17(int n, int r, const ParamPoint<Real>& params, double tol = kDefaultRelationTol);
RelationPlan plan_deriv12_alpha(int m, int n, int r, const ParamPoint<Real>& params,
                                double tol = kDefaultRelationTol);
RelationPlan plan_deriv12_beta(int m, int n, int r, const ParamPoint<Real>& params, double tol = kDefaultRelationTol);
RelationPlan plan_c2_symmetry(const Index& indexK, const Index& indexL, const ParamPoint<Real>& params,
                              double tol = kDefaultRelationTol);
RelationPlan plan_eq21(int s, const ParamPoint<Real>& params3, double tol = kDefaultRelationTol);
RelationPlan plan_lemma1(const Index& index, const ParamPoint<Real>& params, bool star, double tol = kDefaultLemmaTol);

RelationReport verify_csf_strict(const Index& index, const ParamPoint<Real>& params, double tol = kDefaultRelationTol,
                                 const RunSettings& settings = {});
RelationReport verify_csf_star(const Index& index, const ParamPoint<Real>& params, double tol = kDefaultRelationTol,
                               const RunSettings& settings = {});
RelationReport verify_sum_formula(int k, int n, const ParamPoint<Real>& params, double tol = kDefaultRelationTol,
                                  const RunSettings& settings = {});
RelationReport verify_eq12(int m, int n, const ParamPoint<Real>& params, double tol = kDefaultRelationTol,
                           const RunSettings& settings = {});
RelationReport verify_eq15(int n, const ParamPoint<Real>& params, double tol = kDefaultRelationTol,
                           const RunSettings& settings = {});
RelationReport verify_eq16(int n, int r, const ParamPoint<Real>& params, double tol = kDefaultRelationTol,
                           const RunSettings& settings = {});
RelationReport verify_eq17(int n, int r, const ParamPoint<Real>& params, double tol = kDefaultRelationTol,
                           const RunSettings& settings = {});
RelationReport verify_deriv12_alpha(int m, int n, int r, const ParamPoint<Real>& params,
                                    double tol = kDefaultRelationTol, const RunSettings& settings = {});
RelationReport verify_deriv12_beta(int m, int n, int r, const ParamPoint<Real>& params,
                                   double tol = kDefaultRelationTol, const RunSettings& settings = {});
RelationReport verify_symmetry_c2(const Index& indexK, const Index& indexL, const ParamPoint<Real>& params,
                                  double tol = kDefaultRelationTol, const RunSettings& settings = {});
RelationReport verify_eq21(int s, const ParamPoint<Real>& params3, double tol = kDefaultRelationTol,
                           const RunSettings& settings = {});
RelationReport verify_lemma1(const Index& index, const ParamPoint<Real>& params, bool star,
                             double tol = kDefaultLemmaTol, const RunSettings& settings = {});

/// Index (1, {{1}^{m-1}, 2}^n).
Index ones_twos_index(int m, int n);

}  // namespace zetalab

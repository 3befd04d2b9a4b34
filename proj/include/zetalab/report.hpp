#pragma once

#include <json.hpp>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "zetalab/engine.hpp"
#include "zetalab/params.hpp"

namespace zetalab {

inline constexpr const char* kToolVersion = "zetalab 1.0.0";

/// One verified identity instance.  Each side aggregates its terms: the value
/// is the weighted sum, the error the weighted sum of term errors, m_final the
/// largest truncation, and converged holds only if every term converged.
struct RelationReport {
  std::string relation_id;
  std::string args;
  ParamPoint<Real> params;
  int arity = 2;
  EvalResult lhs;
  EvalResult rhs;
  std::size_t lhs_terms = 0;
  std::size_t rhs_terms = 0;
  Real abs_diff;
  Real rel_diff;
  double tol = 0;
  bool pass = false;
  bool inconclusive = false;
  double wall_time = 0;
};

/// Fills abs_diff, rel_diff, inconclusive and pass from the two sides.
void finalize(RelationReport& report);

/// Backend-independent form of a report: every number a decimal string.
struct ReportRow {
  std::string relation_id;
  std::string args;
  std::string alpha;
  std::string beta;
  std::optional<std::string> gamma;
  std::string lhs;
  std::string lhs_err;
  std::string rhs;
  std::string rhs_err;
  std::int64_t m_final = 0;
  std::string abs_diff;
  std::string rel_diff;
  std::string tol;
  bool pass = false;
  bool inconclusive = false;
  double wall_time = 0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

ReportRow to_row(const RelationReport& report);

struct ReportSummary {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t inconclusive = 0;
  friend bool operator==(const ReportSummary&, const ReportSummary&) = default;
};

struct ReportDocument {
  std::string tool_version = kToolVersion;
  nlohmann::json config = nlohmann::json::object();
  std::vector<ReportRow> rows;
  ReportSummary summary;
  double total_wall_time = 0;

  friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

/// Outcome label: "pass", "fail" or "inconclusive".
std::string outcome(const ReportRow& row);
ReportSummary tally(const std::vector<ReportRow>& rows);

void to_json(nlohmann::json& j, const ReportRow& row);
void from_json(const nlohmann::json& j, ReportRow& row);
void to_json(nlohmann::json& j, const ReportDocument& doc);
void from_json(const nlohmann::json& j, ReportDocument& doc);

/// Columns relation_id,args,alpha,beta,gamma,lhs,rhs,rel_diff,pass.
void write_csv(std::ostream& out, const std::vector<ReportRow>& rows);

/// Multi-line text rendering for the CLI.
std::string format_report(const ReportRow& row);

}  // namespace zetalab

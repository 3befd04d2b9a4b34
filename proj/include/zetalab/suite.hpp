#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zetalab/relations.hpp"
#include "zetalab/report.hpp"

namespace zetalab {

/// Malformed or out-of-domain suite configuration.
class SuiteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One line of the [relations] table.
struct SuiteInstance {
  std::string relation_id;
  std::map<std::string, std::string> args;
  int line = 0;
};

/// Line-oriented configuration:
///
///   # comment
///   precision = 256
///   threads = 2
///   output = reports/acceptance     (writes .json and .csv next to this stem)
///   tol = 1e-6                       (default relation tolerance)
///   tol.lemma1 = 1e-4
///   tol.expansion = 1e-4
///   mmax = 1048576
///   mmax.aux = 8192
///   grid main = 1,1 | 0.8,1.7
///
///   [relations]
///   csf-strict index=1,2 grid=main
///   csf-star index=admissible:6:3 grid=main
///   eq21 s=2 params=1,1,1 tol=1e-8
struct SuiteConfig {
  unsigned precision = kDefaultPrecisionBits;
  int threads = 1;
  std::string output;
  double tol = kDefaultRelationTol;
  double tol_lemma1 = kDefaultLemmaTol;
  double tol_expansion = kDefaultExpansionTol;
  std::int64_t mmax = std::int64_t{1} << 20;
  std::int64_t mmax_aux = std::int64_t{1} << 13;
  std::map<std::string, std::vector<std::string>> grids;
  std::vector<SuiteInstance> instances;
};

SuiteConfig parse_suite(const std::string& text);
SuiteConfig load_suite(const std::filesystem::path& path);

nlohmann::json config_echo(const SuiteConfig& config);

/// Relation ids accepted in suites and by the CLI.
const std::vector<std::string>& known_relations();

/// Builds the plan of one relation from string arguments (the CLI and suite
/// share this).  `params` is "a,b" or "a,b,c".  Throws ArgumentError,
/// DomainError or SpecError on invalid input.
RelationPlan build_plan(const std::string& relation_id, const std::map<std::string, std::string>& args,
                        const std::string& params, const SuiteConfig& defaults);

/// Expands grids and index patterns into plans, validating every instance
/// before anything is evaluated.  Sets the working precision.  Throws
/// SuiteError naming the offending line.
std::vector<RelationPlan> expand_suite(const SuiteConfig& config);

/// Runs the plans over `threads` workers; rows keep configuration order.
ReportDocument run_suite(const SuiteConfig& config, const std::vector<RelationPlan>& plans);

/// 1 if any row failed, else 3 if any was inconclusive, else 0.
int suite_exit_code(const ReportDocument& doc);

/// Writes <stem>.json and <stem>.csv.
void write_report_files(const ReportDocument& doc, const std::filesystem::path& stem);

ParamPoint<Real> parse_params(const std::string& text);

}  // namespace zetalab

// Command-line front end: eval, verify, suite.

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <locale>
#include <sstream>

#include "zetalab/aux_series.hpp"
#include "zetalab/engine.hpp"
#include "zetalab/errors.hpp"
#include "zetalab/report.hpp"
#include "zetalab/suite.hpp"

namespace {

using namespace zetalab;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInconclusive = 3;

struct EvalArgs {
  std::string series;
  std::string spec_file;
  std::string index;
  std::string a;
  std::string b;
  int c = 0;
  std::string r;
  std::string alpha;
  std::string beta;
  std::string gamma;
  double tol = 0;
  std::int64_t mmax = 0;
  bool json = false;
};

struct VerifyArgs {
  std::string relation;
  std::map<std::string, std::string> values;
  std::string alpha;
  std::string beta;
  std::string gamma;
  double tol = 0;
  std::int64_t mmax = 0;
  std::int64_t mmax_aux = 0;
  bool json = false;
};

struct SuiteArgs {
  std::string config;
  std::string output;
  int threads = 0;
};

std::vector<int> int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ArgumentError(std::string("--") + what + " needs comma-separated integers");
    }
  }
  return out;
}

int single_int(const std::string& text, const char* what) {
  const auto v = int_list(text, what);
  if (v.size() != 1) throw ArgumentError(std::string("--") + what + " needs one integer");
  return v.front();
}

ParamPoint<Real> eval_params(const EvalArgs& args) {
  if (args.alpha.empty() || args.beta.empty()) throw ArgumentError("--alpha and --beta are required");
  std::string text = args.alpha + "," + args.beta;
  if (!args.gamma.empty()) text += "," + args.gamma;
  return parse_params(text);
}

void print_eval(const EvalResult& r, bool json) {
  if (json) {
    nlohmann::json j{{"value", format_decimal(r.value)},   {"err", format_decimal(r.err, 6)},
                     {"m_final", r.m_final},                {"accelerated", r.accelerated},
                     {"converged", r.converged},            {"checkpoints", r.checkpoints.size()}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "value      " << format_decimal(r.value) << "\n"
              << "err        " << format_decimal(r.err, 6) << "\n"
              << "M_final    " << r.m_final << "\n"
              << "converged  " << (r.converged ? "yes" : "no") << "\n";
  }
}

int run_eval(const EvalArgs& args) {
  const auto params = eval_params(args);
  const std::string& s = args.series;
  if (s == "t" || s == "tstar") {
    CoupledOptions opts;
    if (args.tol > 0) opts.tol = args.tol;
    if (args.mmax > 0) opts.m_max = args.mmax;
    opts.m_min = std::min(opts.m_min, opts.m_max);
    opts.policy = ExecPolicy::parallel;
    const auto r = eval_coupled({Index::parse(args.index), s == "tstar"}, params, opts);
    print_eval(r, args.json);
    return r.converged ? kExitOk : kExitInconclusive;
  }

  SeriesSpec spec;
  if (!args.spec_file.empty()) {
    std::ifstream in(args.spec_file);
    if (!in) throw ArgumentError("cannot read " + args.spec_file);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw SpecError(std::string("spec file is not valid JSON: ") + e.what());
    }
    spec = j.get<SeriesSpec>();
    validate(spec);
  } else if (s == "zi") {
    spec = spec_Z_I(Index::parse(args.index));
  } else if (s == "zii") {
    spec = spec_Z_II(Index::parse(args.index));
  } else if (s == "zstar-i") {
    spec = spec_Zstar_I(Index::parse(args.index));
  } else if (s == "zstar-i3") {
    spec = spec_Zstar_I3(Index::parse(args.index));
  } else if (s == "z-single") {
    spec = spec_Z_single(single_int(args.a, "a"), single_int(args.b, "b"));
  } else if (s == "z3-single") {
    spec = spec_Z3_single(single_int(args.a, "a"), single_int(args.b, "b"), args.c);
  } else if (s == "zr") {
    spec = spec_Zr(int_list(args.r, "r"), int_list(args.a, "a"), int_list(args.b, "b"));
  } else {
    throw ArgumentError("--series or --spec-file is required");
  }
  EvalOptions opts;
  if (args.tol > 0) opts.tol = args.tol;
  if (args.mmax > 0) opts.m_max = args.mmax;
  opts.m_min = std::min(opts.m_min, opts.m_max);
  opts.policy = ExecPolicy::parallel;
  const auto r = eval_dp(spec, params, opts);
  print_eval(r, args.json);
  return r.converged ? kExitOk : kExitInconclusive;
}

int run_verify(const VerifyArgs& args) {
  if (args.alpha.empty() || args.beta.empty()) throw ArgumentError("--alpha and --beta are required");
  std::string params = args.alpha + "," + args.beta;
  if (!args.gamma.empty()) params += "," + args.gamma;
  std::map<std::string, std::string> values;
  for (const auto& [k, v] : args.values) {
    if (!v.empty()) values[k] = v;
  }
  SuiteConfig defaults;
  if (args.tol > 0) values["tol"] = nlohmann::json(args.tol).dump();
  RunSettings settings;
  if (args.mmax > 0) settings.m_max = args.mmax;
  if (args.mmax_aux > 0) settings.coupled_m_max = args.mmax_aux;
  settings.policy = ExecPolicy::parallel;
  const auto plan = build_plan(args.relation, values, params, defaults);
  const auto row = to_row(run_plan(plan, settings));
  if (args.json) {
    std::cout << nlohmann::json(row).dump(2) << "\n";
  } else {
    std::cout << format_report(row);
  }
  if (row.inconclusive) return kExitInconclusive;
  return row.pass ? kExitOk : kExitFail;
}

// Six significant digits for one-line listings; reports keep full precision.
std::string brief(const std::string& decimal) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::setprecision(6) << std::stod(decimal);
  return out.str();
}

int run_suite_command(const SuiteArgs& args, bool precision_given, unsigned precision) {
  SuiteConfig config = load_suite(args.config);
  if (precision_given) config.precision = precision;
  if (args.threads > 0) config.threads = args.threads;
  if (!args.output.empty()) config.output = args.output;
  const auto plans = expand_suite(config);
  const auto doc = run_suite(config, plans);
  if (!config.output.empty()) write_report_files(doc, config.output);
  for (const auto& row : doc.rows) {
    std::cout << outcome(row) << "  " << row.relation_id << " " << row.args << " (" << brief(row.alpha) << ", "
              << brief(row.beta) << (row.gamma ? ", " + brief(*row.gamma) : "") << ") rel_diff=" << row.rel_diff << "\n";
  }
  std::cout << "summary: " << doc.summary.pass << " pass, " << doc.summary.fail << " fail, "
            << doc.summary.inconclusive << " inconclusive of " << doc.rows.size() << "\n";
  return suite_exit_code(doc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate parametrized multiple zeta series and verify identities among them"};
  app.require_subcommand(1);
  unsigned precision = 0;
  app.add_option("--precision", precision, "Working precision in bits (overrides ZETALAB_PRECISION)")
      ->check(CLI::Range(32u, 100000u));

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate one series");
  eval->add_option("--series", eval_args.series, "zi | zii | zstar-i | z-single | zr | zstar-i3 | z3-single | t | tstar")
      ->check(CLI::IsMember({"zi", "zii", "zstar-i", "z-single", "zr", "zstar-i3", "z3-single", "t", "tstar"}));
  eval->add_option("--spec-file", eval_args.spec_file, "JSON series description");
  eval->add_option("--index", eval_args.index, "Index k1,...,kn");
  eval->add_option("--a", eval_args.a, "Alpha exponent(s)");
  eval->add_option("--b", eval_args.b, "Beta exponent(s)");
  eval->add_option("--c", eval_args.c, "Gamma exponent");
  eval->add_option("--r", eval_args.r, "Chain lengths r1,...,r(n-1)");
  eval->add_option("--alpha", eval_args.alpha, "alpha > 0");
  eval->add_option("--beta", eval_args.beta, "beta > 0");
  eval->add_option("--gamma", eval_args.gamma, "gamma > 0 (3-parameter series)");
  eval->add_option("--tol", eval_args.tol, "Relative tolerance")->check(CLI::PositiveNumber);
  eval->add_option("--mmax", eval_args.mmax, "Largest truncation")->check(CLI::Range(std::int64_t{64}, std::int64_t{1} << 30));
  eval->add_flag("--json", eval_args.json, "JSON output");
  eval->get_option("--spec-file")->excludes("--series");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Verify one relation instance");
  verify->add_option("--relation", verify_args.relation, "Relation id")->required()->check(CLI::IsMember(known_relations()));
  for (const char* key : {"index", "indexK", "indexL", "k", "n", "m", "r", "s", "kind", "series"}) {
    verify->add_option(std::string("--") + key, verify_args.values[key]);
  }
  verify->add_option("--alpha", verify_args.alpha, "alpha > 0");
  verify->add_option("--beta", verify_args.beta, "beta > 0");
  verify->add_option("--gamma", verify_args.gamma, "gamma > 0 (eq21)");
  verify->add_option("--tol", verify_args.tol, "Relative tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--mmax", verify_args.mmax, "Largest truncation")->check(CLI::Range(std::int64_t{1024}, std::int64_t{1} << 30));
  verify->add_option("--mmax-aux", verify_args.mmax_aux, "Largest truncation of coupled series")
      ->check(CLI::Range(std::int64_t{1024}, std::int64_t{1} << 20));
  verify->add_flag("--json", verify_args.json, "JSON output");

  SuiteArgs suite_args;
  auto* suite = app.add_subcommand("suite", "Run a suite configuration");
  suite->add_option("config", suite_args.config, "Suite file")->required();
  suite->add_option("--output", suite_args.output, "Report path stem (writes .json and .csv)");
  suite->add_option("--threads", suite_args.threads, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  // Flag, then environment; the suite file's own setting applies otherwise.
  const unsigned override_bits = precision != 0 ? precision : precision_from_env(0);
  set_working_precision(override_bits != 0 ? override_bits : kDefaultPrecisionBits);
  try {
    if (*eval) return run_eval(eval_args);
    if (*verify) return run_verify(verify_args);
    return run_suite_command(suite_args, override_bits != 0, override_bits);
  } catch (const SuiteError& e) {
    std::cerr << "suite error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return kExitFail;
  }
}

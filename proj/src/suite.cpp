#include "zetalab/suite.hpp"

#include <omp.h>

#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include "zetalab/deriv.hpp"

namespace zetalab {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ArgumentError("'" + key + "' needs an integer, got '" + value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size() || !(v > 0)) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ArgumentError("'" + key + "' needs a positive number, got '" + value + "'");
  }
}

class Args {
 public:
  explicit Args(const std::map<std::string, std::string>& args) : args_(args) {}

  const std::string& text(const std::string& key) {
    used_.insert(key);
    auto it = args_.find(key);
    if (it == args_.end()) throw ArgumentError("missing argument '" + key + "'");
    return it->second;
  }
  std::optional<std::string> optional(const std::string& key) {
    used_.insert(key);
    auto it = args_.find(key);
    if (it == args_.end()) return std::nullopt;
    return it->second;
  }
  int integer(const std::string& key) { return static_cast<int>(parse_int(key, text(key))); }
  Index index(const std::string& key) { return Index::parse(text(key)); }
  double tol(double fallback) {
    auto v = optional("tol");
    return v ? parse_double("tol", *v) : fallback;
  }
  void finish() const {
    for (const auto& [key, value] : args_) {
      if (!used_.count(key)) throw ArgumentError("unknown argument '" + key + "'");
    }
  }

 private:
  const std::map<std::string, std::string>& args_;
  std::set<std::string> used_;
};

SeriesSpec expansion_series(const std::string& name, const Index& index) {
  if (name == "zi") return spec_Z_I(index);
  if (name == "zii") return spec_Z_II(index);
  if (name == "zstar-i") return spec_Zstar_I(index);
  throw ArgumentError("expansion series must be zi, zii or zstar-i");
}

}  // namespace

ParamPoint<Real> parse_params(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2 && parts.size() != 3) throw ArgumentError("parameters must be 'alpha,beta[,gamma]'");
  ParamPoint<Real> p{ScalarTraits<Real>::parse(parts[0]), ScalarTraits<Real>::parse(parts[1]), std::nullopt};
  if (parts.size() == 3) p.gamma = ScalarTraits<Real>::parse(parts[2]);
  return p;
}

const std::vector<std::string>& known_relations() {
  static const std::vector<std::string> ids{"csf-strict",    "csf-star",     "sum-formula", "eq12",          "eq15",
                                            "eq16",          "eq17",         "deriv12-alpha", "deriv12-beta", "c2-symmetry",
                                            "eq21",          "lemma1-strict", "lemma1-star", "expansion"};
  return ids;
}

RelationPlan build_plan(const std::string& id, const std::map<std::string, std::string>& raw,
                        const std::string& params_text, const SuiteConfig& defaults) {
  Args args(raw);
  const ParamPoint<Real> p = parse_params(params_text);
  const bool three = id == "eq21";
  if (three != p.gamma.has_value()) {
    throw ArgumentError(three ? "eq21 needs alpha,beta,gamma" : id + " takes alpha,beta only");
  }
  RelationPlan plan;
  if (id == "csf-strict") {
    plan = plan_csf_strict(args.index("index"), p, args.tol(defaults.tol));
  } else if (id == "csf-star") {
    plan = plan_csf_star(args.index("index"), p, args.tol(defaults.tol));
  } else if (id == "sum-formula") {
    plan = plan_sum_formula(args.integer("k"), args.integer("n"), p, args.tol(defaults.tol));
  } else if (id == "eq12") {
    plan = plan_eq12(args.integer("m"), args.integer("n"), p, args.tol(defaults.tol));
  } else if (id == "eq15") {
    plan = plan_eq15(args.integer("n"), p, args.tol(defaults.tol));
  } else if (id == "eq16") {
    plan = plan_eq16(args.integer("n"), args.integer("r"), p, args.tol(defaults.tol));
  } else if (id == "eq17") {
    plan = plan_eq17(args.integer("n"), args.integer("r"), p, args.tol(defaults.tol));
  } else if (id == "deriv12-alpha") {
    plan = plan_deriv12_alpha(args.integer("m"), args.integer("n"), args.integer("r"), p, args.tol(defaults.tol));
  } else if (id == "deriv12-beta") {
    plan = plan_deriv12_beta(args.integer("m"), args.integer("n"), args.integer("r"), p, args.tol(defaults.tol));
  } else if (id == "c2-symmetry") {
    plan = plan_c2_symmetry(args.index("indexK"), args.index("indexL"), p, args.tol(defaults.tol));
  } else if (id == "eq21") {
    plan = plan_eq21(args.integer("s"), p, args.tol(defaults.tol));
  } else if (id == "lemma1-strict" || id == "lemma1-star") {
    plan = plan_lemma1(args.index("index"), p, id == "lemma1-star", args.tol(defaults.tol_lemma1));
  } else if (id == "expansion") {
    const ExpansionKind kind = parse_expansion_kind(args.text("kind"));
    const Index index = args.index("index");
    const int r = args.integer("r");
    const double tol = args.tol(defaults.tol_expansion);
    if (auto series = args.optional("series")) {
      if (kind == ExpansionKind::alpha_star && *series != "zstar-i") {
        throw ArgumentError("alpha-star expansion applies to zstar-i only");
      }
      plan = kind == ExpansionKind::alpha_star ? plan_expansion(kind, index, r, p, tol)
                                              : plan_expansion(kind, expansion_series(*series, index), r, p, tol);
      if (kind != ExpansionKind::alpha_star) {
        plan.args = "kind=" + to_string(kind) + " series=" + *series + " index=" + index.to_string() +
                    " r=" + std::to_string(r);
      }
    } else {
      plan = plan_expansion(kind, index, r, p, tol);
    }
  } else {
    throw ArgumentError("unknown relation '" + id + "'");
  }
  args.finish();
  return plan;
}

SuiteConfig parse_suite(const std::string& text) {
  SuiteConfig config;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool in_relations = false;
  auto fail = [&](const std::string& what) -> SuiteError {
    return SuiteError("line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line == "[relations]") {
      in_relations = true;
      continue;
    }
    try {
      if (in_relations) {
        std::istringstream words(line);
        SuiteInstance inst;
        inst.line = line_no;
        words >> inst.relation_id;
        const auto& ids = known_relations();
        if (std::find(ids.begin(), ids.end(), inst.relation_id) == ids.end()) {
          throw fail("unknown relation '" + inst.relation_id + "'");
        }
        std::string word;
        while (words >> word) {
          const auto eq = word.find('=');
          if (eq == std::string::npos || eq == 0) throw fail("expected key=value, got '" + word + "'");
          if (!inst.args.emplace(word.substr(0, eq), word.substr(eq + 1)).second) {
            throw fail("duplicate key '" + word.substr(0, eq) + "'");
          }
        }
        if (inst.args.count("grid") == inst.args.count("params")) {
          throw fail("give exactly one of grid= or params=");
        }
        config.instances.push_back(std::move(inst));
        continue;
      }
      if (line.rfind("grid ", 0) == 0) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw fail("grid needs '='");
        const std::string name = trim(line.substr(5, eq - 5));
        if (name.empty() || name.find(' ') != std::string::npos) throw fail("bad grid name");
        auto points = split(line.substr(eq + 1), '|');
        for (const auto& pt : points) {
          if (pt.empty()) throw fail("empty grid point");
        }
        config.grids[name] = points;
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw fail("expected key = value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key == "precision") {
        const auto bits = parse_int(key, value);
        if (bits < 32 || bits > 100000) throw fail("precision must be in 32..100000 bits");
        config.precision = static_cast<unsigned>(bits);
      } else if (key == "threads") {
        config.threads = static_cast<int>(parse_int(key, value));
        if (config.threads < 1) throw fail("threads must be >= 1");
      } else if (key == "output") {
        config.output = value;
      } else if (key == "tol") {
        config.tol = parse_double(key, value);
      } else if (key == "tol.lemma1") {
        config.tol_lemma1 = parse_double(key, value);
      } else if (key == "tol.expansion") {
        config.tol_expansion = parse_double(key, value);
      } else if (key == "mmax" || key == "mmax.aux") {
        const auto v = parse_int(key, value);
        if (v < 1024) throw fail(key + " must be >= 1024");
        (key == "mmax" ? config.mmax : config.mmax_aux) = v;
      } else {
        throw fail("unknown setting '" + key + "'");
      }
    } catch (const SuiteError&) {
      throw;
    } catch (const std::exception& e) {
      throw fail(e.what());
    }
  }
  for (const auto& inst : config.instances) {
    auto it = inst.args.find("grid");
    if (it != inst.args.end() && !config.grids.count(it->second)) {
      line_no = inst.line;
      throw fail("unknown grid '" + it->second + "'");
    }
  }
  return config;
}

SuiteConfig load_suite(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SuiteError("cannot read suite file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_suite(buf.str());
}

nlohmann::json config_echo(const SuiteConfig& config) {
  nlohmann::json relations = nlohmann::json::array();
  for (const auto& inst : config.instances) {
    relations.push_back({{"relation_id", inst.relation_id}, {"args", inst.args}});
  }
  return {{"precision", config.precision},
          {"threads", config.threads},
          {"output", config.output},
          {"tol", config.tol},
          {"tol.lemma1", config.tol_lemma1},
          {"tol.expansion", config.tol_expansion},
          {"mmax", config.mmax},
          {"mmax.aux", config.mmax_aux},
          {"grids", config.grids},
          {"relations", relations}};
}

std::vector<RelationPlan> expand_suite(const SuiteConfig& config) {
  set_working_precision(config.precision);
  std::vector<RelationPlan> plans;
  for (const auto& inst : config.instances) {
    try {
      std::vector<std::string> points;
      auto args = inst.args;
      if (auto g = args.find("grid"); g != args.end()) {
        points = config.grids.at(g->second);
        args.erase(g);
      } else {
        points = {args.at("params")};
        args.erase("params");
      }
      std::vector<std::map<std::string, std::string>> variants;
      auto idx = args.find("index");
      if (idx != args.end() && idx->second.rfind("admissible:", 0) == 0) {
        const auto spec = split(idx->second.substr(11), ':');
        if (spec.size() != 2) throw ArgumentError("use index=admissible:<max weight>:<max depth>");
        for (const auto& x : admissible_indices(static_cast<int>(parse_int("weight", spec[0])),
                                                static_cast<int>(parse_int("depth", spec[1])))) {
          auto copy = args;
          copy["index"] = x.to_string();
          variants.push_back(std::move(copy));
        }
      } else {
        variants.push_back(args);
      }
      for (const auto& v : variants) {
        for (const auto& pt : points) plans.push_back(build_plan(inst.relation_id, v, pt, config));
      }
    } catch (const std::exception& e) {
      throw SuiteError("line " + std::to_string(inst.line) + " (" + inst.relation_id + "): " + e.what());
    }
  }
  return plans;
}

ReportDocument run_suite(const SuiteConfig& config, const std::vector<RelationPlan>& plans) {
  set_working_precision(config.precision);
  const auto start = std::chrono::steady_clock::now();
  RunSettings settings;
  settings.m_max = config.mmax;
  settings.coupled_m_max = config.mmax_aux;
  settings.policy = ExecPolicy::serial;

  const std::int64_t count = static_cast<std::int64_t>(plans.size());
  std::vector<std::optional<RelationReport>> reports(plans.size());
  std::vector<std::string> errors(plans.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.threads)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      reports[i] = run_plan(plans[i], settings);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (std::int64_t i = 0; i < count; ++i) {
    if (!reports[i]) throw std::runtime_error(plans[i].relation_id + " " + plans[i].args + ": " + errors[i]);
  }

  ReportDocument doc;
  doc.config = config_echo(config);
  for (const auto& r : reports) doc.rows.push_back(to_row(*r));
  doc.summary = tally(doc.rows);
  doc.total_wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return doc;
}

int suite_exit_code(const ReportDocument& doc) {
  if (doc.summary.fail > 0) return 1;
  if (doc.summary.inconclusive > 0) return 3;
  return 0;
}

void write_report_files(const ReportDocument& doc, const std::filesystem::path& stem) {
  if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
  std::filesystem::path json_path = stem;
  json_path += ".json";
  std::filesystem::path csv_path = stem;
  csv_path += ".csv";
  std::ofstream json_out(json_path);
  if (!json_out) throw std::runtime_error("cannot write " + json_path.string());
  json_out << nlohmann::json(doc).dump(2) << "\n";
  std::ofstream csv_out(csv_path);
  if (!csv_out) throw std::runtime_error("cannot write " + csv_path.string());
  write_csv(csv_out, doc.rows);
}

}  // namespace zetalab

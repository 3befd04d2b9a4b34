#include "zetalab/report.hpp"

#include <sstream>

namespace zetalab {

void finalize(RelationReport& report) {
  report.abs_diff = bmp::abs(report.lhs.value - report.rhs.value);
  report.rel_diff = relative_difference(report.lhs.value, report.rhs.value);
  report.inconclusive = !report.lhs.converged || !report.rhs.converged;
  report.pass = !report.inconclusive && report.rel_diff <= Real(report.tol);
}

namespace {

std::string format_tol(double tol) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << tol;
  return out.str();
}

}  // namespace

ReportRow to_row(const RelationReport& report) {
  ReportRow row;
  row.relation_id = report.relation_id;
  row.args = report.args;
  row.alpha = format_decimal(report.params.alpha);
  row.beta = format_decimal(report.params.beta);
  if (report.arity == 3 && report.params.gamma) row.gamma = format_decimal(*report.params.gamma);
  row.lhs = format_decimal(report.lhs.value);
  row.lhs_err = format_decimal(report.lhs.err, 6);
  row.rhs = format_decimal(report.rhs.value);
  row.rhs_err = format_decimal(report.rhs.err, 6);
  row.m_final = std::max(report.lhs.m_final, report.rhs.m_final);
  row.abs_diff = format_decimal(report.abs_diff, 6);
  row.rel_diff = format_decimal(report.rel_diff, 6);
  row.tol = format_tol(report.tol);
  row.pass = report.pass;
  row.inconclusive = report.inconclusive;
  row.wall_time = report.wall_time;
  return row;
}

std::string outcome(const ReportRow& row) {
  if (row.inconclusive) return "inconclusive";
  return row.pass ? "pass" : "fail";
}

ReportSummary tally(const std::vector<ReportRow>& rows) {
  ReportSummary s;
  for (const auto& r : rows) {
    if (r.inconclusive) {
      ++s.inconclusive;
    } else if (r.pass) {
      ++s.pass;
    } else {
      ++s.fail;
    }
  }
  return s;
}

void to_json(nlohmann::json& j, const ReportRow& row) {
  j = nlohmann::json{{"relation_id", row.relation_id},
                     {"args", row.args},
                     {"alpha", row.alpha},
                     {"beta", row.beta},
                     {"gamma", row.gamma ? nlohmann::json(*row.gamma) : nlohmann::json(nullptr)},
                     {"lhs", row.lhs},
                     {"lhs_err", row.lhs_err},
                     {"rhs", row.rhs},
                     {"rhs_err", row.rhs_err},
                     {"m_final", row.m_final},
                     {"abs_diff", row.abs_diff},
                     {"rel_diff", row.rel_diff},
                     {"tol", row.tol},
                     {"pass", row.pass},
                     {"inconclusive", row.inconclusive},
                     {"outcome", outcome(row)},
                     {"wall_time", row.wall_time}};
}

void from_json(const nlohmann::json& j, ReportRow& row) {
  row.relation_id = j.at("relation_id").get<std::string>();
  row.args = j.at("args").get<std::string>();
  row.alpha = j.at("alpha").get<std::string>();
  row.beta = j.at("beta").get<std::string>();
  if (j.at("gamma").is_null()) {
    row.gamma.reset();
  } else {
    row.gamma = j.at("gamma").get<std::string>();
  }
  row.lhs = j.at("lhs").get<std::string>();
  row.lhs_err = j.at("lhs_err").get<std::string>();
  row.rhs = j.at("rhs").get<std::string>();
  row.rhs_err = j.at("rhs_err").get<std::string>();
  row.m_final = j.at("m_final").get<std::int64_t>();
  row.abs_diff = j.at("abs_diff").get<std::string>();
  row.rel_diff = j.at("rel_diff").get<std::string>();
  row.tol = j.at("tol").get<std::string>();
  row.pass = j.at("pass").get<bool>();
  row.inconclusive = j.at("inconclusive").get<bool>();
  row.wall_time = j.at("wall_time").get<double>();
}

void to_json(nlohmann::json& j, const ReportDocument& doc) {
  j = nlohmann::json{{"tool_version", doc.tool_version},
                     {"config", doc.config},
                     {"reports", doc.rows},
                     {"summary",
                      {{"pass", doc.summary.pass},
                       {"fail", doc.summary.fail},
                       {"inconclusive", doc.summary.inconclusive},
                       {"total", doc.rows.size()}}},
                     {"total_wall_time", doc.total_wall_time}};
}

void from_json(const nlohmann::json& j, ReportDocument& doc) {
  doc.tool_version = j.at("tool_version").get<std::string>();
  doc.config = j.at("config");
  doc.rows = j.at("reports").get<std::vector<ReportRow>>();
  const auto& s = j.at("summary");
  doc.summary.pass = s.at("pass").get<std::size_t>();
  doc.summary.fail = s.at("fail").get<std::size_t>();
  doc.summary.inconclusive = s.at("inconclusive").get<std::size_t>();
  doc.total_wall_time = j.at("total_wall_time").get<double>();
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "relation_id,args,alpha,beta,gamma,lhs,rhs,rel_diff,pass\n";
  for (const auto& r : rows) {
    out << csv_field(r.relation_id) << ',' << csv_field(r.args) << ',' << r.alpha << ',' << r.beta << ','
        << r.gamma.value_or("") << ',' << r.lhs << ',' << r.rhs << ',' << r.rel_diff << ','
        << (r.pass ? "true" : "false") << '\n';
  }
}

std::string format_report(const ReportRow& row) {
  std::ostringstream out;
  out << "relation  " << row.relation_id << " (" << row.args << ")\n";
  out << "params    alpha=" << row.alpha << " beta=" << row.beta;
  if (row.gamma) out << " gamma=" << *row.gamma;
  out << "\n";
  out << "lhs       " << row.lhs << "  (err " << row.lhs_err << ")\n";
  out << "rhs       " << row.rhs << "  (err " << row.rhs_err << ")\n";
  out << "rel_diff  " << row.rel_diff << "  tol " << row.tol << "\n";
  out << "result    " << outcome(row) << "\n";
  return out.str();
}

}  // namespace zetalab

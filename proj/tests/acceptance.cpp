// Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.  Usage: acceptance <suite file>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "zetalab/deriv.hpp"
#include "zetalab/engine.hpp"
#include "zetalab/suite.hpp"

using namespace zetalab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(const Real& x) { return format_decimal(x, 3); }

ParamPoint<Real> real(const char* a, const char* b) {
  return {ScalarTraits<Real>::parse(a), ScalarTraits<Real>::parse(b), std::nullopt};
}

// Random spec within the oracle-equivalence envelope: depth <= 3, chain total
// <= 2, exponents in -1..3 meeting the convergence guard.
SeriesSpec random_spec(std::mt19937& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (;;) {
    SeriesSpec s;
    s.arity = pick(0, 3) == 0 ? 3 : 2;
    const int n = pick(1, 3);
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      const Node node{pick(-1, 3), pick(-1, 3), s.arity == 3 ? pick(-1, 3) : 0};
      if (node.total() < (i + 1 == n ? 2 : 1)) ok = false;
      s.positions.push_back(node);
    }
    if (!ok) continue;
    int chains = 0;
    for (int i = 0; i + 1 < n; ++i) {
      s.links.push_back(pick(0, 1) ? Link::weak : Link::strict);
      s.chains.push_back(pick(0, 2));
      chains += s.chains.back();
    }
    if (chains > 2) continue;
    const Decoration decos[] = {Decoration::none, Decoration::pochhammer, Decoration::pochhammer3};
    s.prefix = decos[pick(0, s.arity == 3 ? 2 : 1)];
    s.suffix = decos[pick(0, s.arity == 3 ? 2 : 1)];
    return s;
  }
}

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(0x5eed);
  const Rational grid[] = {Rational(1, 2), Rational(1), Rational(3, 2), Rational(2)};
  int done = 0;
  int mismatches = 0;
  while (done < 200) {
    const auto spec = random_spec(rng);
    ParamPoint<Rational> p{grid[rng() % 4], grid[rng() % 4], std::nullopt};
    if (spec.arity == 3) {
      p.gamma = grid[rng() % 4];
      if (!(p.shift3() > 0)) continue;
    }
    const int K = spec.layer_count();
    const std::int64_t M = K >= 5 ? 8 : K == 4 ? 14 : K == 3 ? 30 : 50;
    const auto sums = partial_sums(spec, p, {M / 3, M});
    if (sums[0] != eval_naive(spec, p, M / 3) || sums[1] != eval_naive(spec, p, M)) ++mismatches;
    ++done;
  }
  const double t = seconds_since(t0);
  std::ostringstream d;
  d << done << " random specs, " << mismatches << " mismatches, " << t << " s";
  return {mismatches == 0 && t <= 60, d.str()};
}

Outcome anchors() {
  const auto z2 = eval_dp(spec_Z_single(0, 2), real("1", "1"));
  const auto z3 = eval_dp(spec_Z_II(Index({3})), real("1", "1"));
  const auto one = eval_dp(spec_Z_single(1, 1), real("1", "2"));
  const Real e2 = oracle::rel(z2.value, oracle::zeta2());
  const Real e3 = oracle::rel(z3.value, oracle::zeta3());
  const Real e1 = oracle::rel(one.value, Real(1));
  std::ostringstream d;
  d << "Z(0|2) " << sci(e2) << ", Z_II(3) " << sci(e3) << ", Z(1|1;(1,2)) " << sci(e1);
  return {e2 <= Real("1e-10") && e3 <= Real("1e-10") && e1 <= Real("1e-12"), d.str()};
}

// All rows of the given relation ids pass at `tol`, and there are `expected` of them.
Outcome rows_pass(const ReportDocument& doc, const std::vector<std::string>& ids, std::size_t expected, double tol) {
  std::size_t count = 0;
  std::size_t good = 0;
  double worst = 0;
  std::string first_bad;
  for (const auto& row : doc.rows) {
    if (std::find(ids.begin(), ids.end(), row.relation_id) == ids.end()) continue;
    ++count;
    const double rd = std::stod(row.rel_diff);
    worst = std::max(worst, rd);
    if (row.pass && !row.inconclusive && rd <= tol) {
      ++good;
    } else if (first_bad.empty()) {
      first_bad = row.relation_id + " " + row.args + " (" + outcome(row) + ")";
    }
  }
  std::ostringstream d;
  d << good << "/" << count << " rows pass (expected " << expected << "), worst rel_diff " << worst;
  if (!first_bad.empty()) d << ", first failure: " << first_bad;
  return {count == expected && good == count, d.str()};
}

const ReportRow* find_row(const ReportDocument& doc, const std::string& id, const std::string& args, const char* alpha,
                          const char* beta, const char* gamma = nullptr) {
  const std::string a = format_decimal(ScalarTraits<Real>::parse(alpha));
  const std::string b = format_decimal(ScalarTraits<Real>::parse(beta));
  for (const auto& row : doc.rows) {
    if (row.relation_id != id || row.args != args || row.alpha != a || row.beta != b) continue;
    if (gamma && row.gamma != format_decimal(ScalarTraits<Real>::parse(gamma))) continue;
    return &row;
  }
  return nullptr;
}

Real value(const std::string& s) { return ScalarTraits<Real>::parse(s); }

Outcome sum_formula(const ReportDocument& doc) {
  Outcome o = rows_pass(doc, {"sum-formula"}, 6 * 4 + 1, 1e-6);
  const ReportRow* anchor = find_row(doc, "sum-formula", "k=3 n=2", "1", "1");
  if (!anchor) return {false, o.detail + "; anchor row missing"};
  const Real e = oracle::rel(value(anchor->lhs), 2 * oracle::zeta3());
  o.detail += "; (3,2) at (1,1) vs 2 zeta(3): " + sci(e);
  o.pass = o.pass && e <= Real("1e-8");
  return o;
}

Outcome expansions(const ReportDocument& doc) {
  Outcome o = rows_pass(doc, {"expansion"}, 3 * 2 * 2 * 4, 1e-4);
  int checked = 0;
  int unequal = 0;
  for (bool strict : {false, true}) {
    for (int n = 1; n <= 3; ++n) {
      std::vector<std::int64_t> m(n, 0);
      std::function<void(int, std::int64_t)> rec = [&](int i, std::int64_t from) {
        if (i == n) {
          for (int r = 0; r <= 2; ++r) {
            for (const Rational& alpha : {Rational(1, 2), Rational(1), Rational(7, 3)}) {
              if (!check_alpha_term_identity(m, r, alpha, strict).equal) ++unequal;
              ++checked;
            }
          }
          return;
        }
        for (std::int64_t v = from; v <= 8; ++v) {
          m[i] = v;
          rec(i + 1, v + (strict ? 1 : 0));
        }
      };
      rec(0, 0);
    }
  }
  o.detail += "; exact term identity " + std::to_string(checked - unequal) + "/" + std::to_string(checked);
  o.pass = o.pass && unequal == 0;
  return o;
}

Outcome three_parameter(const ReportDocument& doc) {
  Outcome o = rows_pass(doc, {"eq21"}, 9, 1e-6);
  const ReportRow* anchor = find_row(doc, "eq21", "s=2", "1", "1", "1");
  if (!anchor) return {false, o.detail + "; anchor row missing"};
  const Real e = oracle::rel(value(anchor->lhs), 2 * oracle::zeta3());
  o.detail += "; s=2 at (1,1,1) vs 2 zeta(3): " + sci(e);
  o.pass = o.pass && e <= Real("1e-8");
  // At beta = gamma both sides reduce to the ones-twos relation with m = 1.
  const Real rounding = boost::multiprecision::ldexp(Real(1), 20 - static_cast<int>(working_precision()));
  Real worst_ratio = 0;
  for (int s = 2; s <= 4; ++s) {
    const ReportRow* row = find_row(doc, "eq21", "s=" + std::to_string(s), "0.9", "1.3", "1.3");
    if (!row) return {false, o.detail + "; beta = gamma row missing"};
    const auto ref = verify_eq12(1, s - 1, real("0.9", "1.3"));
    const Real dl = boost::multiprecision::abs(value(row->lhs) - ref.lhs.value);
    const Real dr = boost::multiprecision::abs(value(row->rhs) - ref.rhs.value);
    const Real bl = value(row->lhs_err) + ref.lhs.err + rounding;
    const Real br = value(row->rhs_err) + ref.rhs.err + rounding;
    worst_ratio = std::max({worst_ratio, dl / bl, dr / br});
  }
  o.detail += "; beta = gamma vs ones-twos: worst |diff|/err bound " + sci(worst_ratio);
  o.pass = o.pass && worst_ratio <= 1;
  return o;
}

Outcome determinism(const ReportDocument& a, const ReportDocument& b) {
  if (a.rows.size() != b.rows.size()) return {false, "row counts differ"};
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& x = a.rows[i];
    const auto& y = b.rows[i];
    const bool eq = x.relation_id == y.relation_id && x.args == y.args && x.alpha == y.alpha && x.beta == y.beta &&
                    x.gamma == y.gamma && x.lhs == y.lhs && x.lhs_err == y.lhs_err && x.rhs == y.rhs &&
                    x.rhs_err == y.rhs_err && x.m_final == y.m_final && x.abs_diff == y.abs_diff &&
                    x.rel_diff == y.rel_diff && x.pass == y.pass && x.inconclusive == y.inconclusive;
    if (eq) ++same;
  }
  return {same == a.rows.size() && !a.rows.empty(),
          std::to_string(same) + "/" + std::to_string(a.rows.size()) + " rows identical across two runs"};
}

void print(int criterion, const Outcome& o) {
  std::cout << "criterion " << criterion << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <suite file>\n";
    return 2;
  }
  try {
    const SuiteConfig config = load_suite(argv[1]);
    set_working_precision(config.precision);
    bool all = true;
    auto report = [&](int c, const Outcome& o) {
      print(c, o);
      all = all && o.pass;
    };

    report(1, oracle_equivalence());
    report(2, anchors());

    const auto t0 = std::chrono::steady_clock::now();
    const auto plans = expand_suite(config);
    const ReportDocument first = run_suite(config, plans);
    const double suite_time = seconds_since(t0);

    Outcome csf = rows_pass(first, {"csf-strict", "csf-star"}, 38 * 4 * 2, 1e-6);
    csf.detail += ", suite " + std::to_string(static_cast<int>(suite_time)) + " s";
    csf.pass = csf.pass && suite_time <= 1800;
    report(3, csf);
    report(4, sum_formula(first));
    report(5, rows_pass(first, {"eq12", "eq15", "eq16", "eq17", "deriv12-alpha", "deriv12-beta"},
                        (4 + 3 + 8 + 16) * 4, 1e-6));
    report(6, expansions(first));
    report(7, three_parameter(first));
    report(8, rows_pass(first, {"lemma1-strict", "lemma1-star"}, 16, 1e-4));
    report(9, rows_pass(first, {"c2-symmetry"}, 3, 1e-6));

    const ReportDocument second = run_suite(config, expand_suite(config));
    report(10, determinism(first, second));
    return all ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "acceptance: " << e.what() << "\n";
    return 2;
  }
}

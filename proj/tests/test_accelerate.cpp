#include <doctest.h>

#include <vector>

#include "oracles.hpp"
#include "zetalab/accelerate.hpp"
#include "zetalab/errors.hpp"

using zetalab::Checkpoint;
using zetalab::Real;

namespace {

// Partial sums of sum_{m>=0} f(m) at M = 2^lo .. 2^hi by direct summation.
template <class F>
std::vector<Checkpoint> powers_of_two(F f, int lo, int hi) {
  std::vector<Checkpoint> out;
  Real s = 0;
  std::int64_t m = 0;
  for (int e = lo; e <= hi; ++e) {
    const std::int64_t M = std::int64_t{1} << e;
    for (; m < M; ++m) s += f(m);
    out.push_back({M, s});
  }
  return out;
}

Real abs_diff(const Real& a, const Real& b) { return boost::multiprecision::abs(a - b); }

}  // namespace

TEST_CASE("Basel partial sums extrapolate to pi^2/6") {
  const auto cps = powers_of_two([](std::int64_t m) { return 1 / (Real(m + 1) * (m + 1)); }, 10, 16);
  const auto res = zetalab::accelerate(cps, Real(1), 0);
  CHECK(res.ok);
  CHECK(abs_diff(res.limit, oracle::zeta2()) < Real("1e-10"));
  // Without acceleration the last partial sum is off by about 2^-16.
  CHECK(abs_diff(cps.back().partial, oracle::zeta2()) > Real("1e-5"));
}

TEST_CASE("telescoping partial sums extrapolate to 1") {
  const auto cps = powers_of_two([](std::int64_t m) { return 1 / (Real(m + 1) * (m + 2)); }, 10, 16);
  const auto res = zetalab::accelerate(cps, Real(1), 0);
  CHECK(res.ok);
  CHECK(abs_diff(res.limit, Real(1)) < Real("1e-12"));
}

TEST_CASE("constant checkpoints return the last value") {
  std::vector<Checkpoint> cps;
  for (int e = 4; e <= 9; ++e) cps.push_back({std::int64_t{1} << e, Real("2.5")});
  const auto res = zetalab::accelerate(cps, Real(1), 0);
  CHECK(res.limit == Real("2.5"));
  CHECK(res.err == 0);
  CHECK(res.ok);
}

TEST_CASE("synthetic tail with known exponents is recovered to working precision") {
  const Real limit = oracle::pi();
  const Real theta = Real(7) / 10;
  std::vector<Checkpoint> cps;
  for (int j = 0; j < 40; ++j) {
    const std::int64_t M = 1000 + 250 * j;
    const Real x(M);
    const Real lx = boost::multiprecision::log(x);
    const Real tail = (3 + 2 * lx) / boost::multiprecision::pow(x, theta) - 5 / boost::multiprecision::pow(x, theta + 1) +
                      Real(1) / (x * x);
    cps.push_back({M, limit - tail});
  }
  zetalab::TailModel model{{theta, Real(2)}, 3, 1};
  const auto fit = zetalab::fit_tail(cps, model);
  CHECK(oracle::rel(fit.limit, limit) < Real("1e-60"));
  CHECK(fit.residual < Real("1e-60"));
  const auto res = zetalab::accelerate(cps, model);
  CHECK(res.ok);
  CHECK(oracle::rel(res.limit, limit) < Real("1e-60"));
}

TEST_CASE("fit failures are flagged with a best estimate") {
  // Scattered early values and a nearly flat end: no smooth tail fits.
  std::vector<Checkpoint> cps;
  for (int j = 0; j < 10; ++j) cps.push_back({std::int64_t{64} << j, Real(1) + Real(j % 3) / 10});
  cps.push_back({std::int64_t{64} << 10, Real(1)});
  cps.push_back({std::int64_t{64} << 11, Real(1) + boost::multiprecision::ldexp(Real(1), -100)});
  const auto res = zetalab::accelerate(cps, Real(1), 0);
  CHECK_FALSE(res.ok);
  CHECK(res.err >= 0);
  CHECK(abs_diff(res.limit, Real(1)) < Real(1));
}

TEST_CASE("accelerate argument checks") {
  std::vector<Checkpoint> none;
  CHECK_THROWS_AS(zetalab::accelerate(none, Real(1), 0), zetalab::ArgumentError);
  std::vector<Checkpoint> two{{4, Real(1)}, {8, Real(2)}};
  CHECK_THROWS_AS(zetalab::accelerate(two, Real(0), 0), zetalab::ArgumentError);
  CHECK_THROWS_AS(zetalab::accelerate(two, Real(1), 3), zetalab::ArgumentError);
  CHECK_THROWS_AS(zetalab::fit_tail(two, zetalab::TailModel{{Real(1)}, 4, 0}), zetalab::ArgumentError);
}

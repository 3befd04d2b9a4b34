#include "zetalab/accelerate.hpp"

#include <algorithm>

#include "zetalab/errors.hpp"

namespace zetalab {

namespace {

using Matrix = std::vector<std::vector<Real>>;  // row-major

// Householder least squares; returns the solution vector.
std::vector<Real> least_squares(Matrix a, std::vector<Real> b) {
  const std::size_t rows = a.size();
  const std::size_t cols = a.front().size();

  // Column equilibration.
  std::vector<Real> scale(cols, Real(0));
  for (std::size_t j = 0; j < cols; ++j) {
    Real norm = 0;
    for (std::size_t i = 0; i < rows; ++i) norm += a[i][j] * a[i][j];
    norm = bmp::sqrt(norm);
    scale[j] = norm > 0 ? Real(1 / norm) : Real(1);
    for (std::size_t i = 0; i < rows; ++i) a[i][j] *= scale[j];
  }

  for (std::size_t k = 0; k < cols; ++k) {
    Real norm = 0;
    for (std::size_t i = k; i < rows; ++i) norm += a[i][k] * a[i][k];
    norm = bmp::sqrt(norm);
    if (norm == 0) continue;
    if (a[k][k] > 0) norm = -norm;
    // v = x - norm * e_k, stored in column k below the diagonal.
    std::vector<Real> v(rows - k);
    for (std::size_t i = k; i < rows; ++i) v[i - k] = a[i][k];
    v[0] -= norm;
    Real vnorm2 = 0;
    for (const auto& x : v) vnorm2 += x * x;
    if (vnorm2 == 0) continue;
    for (std::size_t j = k; j < cols; ++j) {
      Real dot = 0;
      for (std::size_t i = k; i < rows; ++i) dot += v[i - k] * a[i][j];
      Real f = 2 * dot / vnorm2;
      for (std::size_t i = k; i < rows; ++i) a[i][j] -= f * v[i - k];
    }
    Real dot = 0;
    for (std::size_t i = k; i < rows; ++i) dot += v[i - k] * b[i];
    Real f = 2 * dot / vnorm2;
    for (std::size_t i = k; i < rows; ++i) b[i] -= f * v[i - k];
  }

  std::vector<Real> x(cols, Real(0));
  for (std::size_t kk = cols; kk-- > 0;) {
    Real s = b[kk];
    for (std::size_t j = kk + 1; j < cols; ++j) s -= a[kk][j] * x[j];
    x[kk] = a[kk][kk] != 0 ? Real(s / a[kk][kk]) : Real(0);
  }
  for (std::size_t j = 0; j < cols; ++j) x[j] *= scale[j];
  return x;
}

bool all_equal(std::span<const Checkpoint> cps) {
  return std::all_of(cps.begin(), cps.end(), [&](const Checkpoint& c) { return c.partial == cps.front().partial; });
}

}  // namespace

FitResult fit_tail(std::span<const Checkpoint> checkpoints, const TailModel& model) {
  const int unknowns = model.unknowns();
  if (static_cast<int>(checkpoints.size()) < unknowns) {
    throw ArgumentError("tail fit needs at least " + std::to_string(unknowns) + " checkpoints");
  }
  std::int64_t m_top = 0;
  for (const auto& c : checkpoints) {
    if (c.m <= 0) throw ArgumentError("checkpoints must have m > 0");
    m_top = std::max(m_top, c.m);
  }
  const Real top(m_top);

  Matrix a;
  std::vector<Real> b;
  a.reserve(checkpoints.size());
  for (const auto& c : checkpoints) {
    // Scaled abscissa x = M / M_top spans the same function space and keeps
    // the columns O(1).
    const Real x = Real(c.m) / top;
    const Real lx = bmp::log(x);
    const Real inv_x = 1 / x;
    std::vector<Real> row;
    row.reserve(unknowns);
    row.emplace_back(1);
    for (const auto& theta : model.exponents) {
      Real base = bmp::exp(-theta * lx);
      for (int j = 0; j < model.terms_per_family; ++j) {
        if (j) base *= inv_x;
        Real logs(1);
        for (int l = 0; l <= model.log_degree; ++l) {
          row.push_back(base * logs);
          logs *= lx;
        }
      }
    }
    a.push_back(std::move(row));
    b.push_back(c.partial);
  }

  auto x = least_squares(a, b);

  Real ss = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Real r = -b[i];
    for (std::size_t j = 0; j < x.size(); ++j) r += a[i][j] * x[j];
    ss += r * r;
  }
  return {x[0], bmp::sqrt(ss / Real(a.size()))};
}

AccelResult accelerate(std::span<const Checkpoint> checkpoints, const TailModel& model) {
  if (checkpoints.empty()) throw ArgumentError("accelerate needs checkpoints");
  if (static_cast<int>(checkpoints.size()) < model.log_degree + 2) {
    throw ArgumentError("accelerate needs at least log_degree + 2 checkpoints");
  }
  if (all_equal(checkpoints)) return {checkpoints.back().partial, Real(0), true};

  TailModel fitted = model;
  const int n = static_cast<int>(checkpoints.size());
  while (fitted.terms_per_family > 1 && fitted.unknowns() > n - 1) --fitted.terms_per_family;
  if (fitted.unknowns() > n) {
    throw ArgumentError("too few checkpoints for the tail model");
  }

  const FitResult main = fit_tail(checkpoints, fitted);
  Real err;
  if (fitted.terms_per_family > 1) {
    TailModel coarse = fitted;
    --coarse.terms_per_family;
    err = bmp::abs(main.limit - fit_tail(checkpoints, coarse).limit);
  } else {
    err = bmp::abs(main.limit - checkpoints.back().partial);
  }

  const auto& last = checkpoints[n - 1];
  const auto& prev = checkpoints[n - 2];
  const Real increment = bmp::abs(last.partial - prev.partial);
  const bool ok = main.residual <= increment;
  return {main.limit, err, ok};
}

AccelResult accelerate(std::span<const Checkpoint> checkpoints, const Real& theta, int log_degree) {
  if (!(theta > 0)) throw ArgumentError("tail exponent must be positive");
  const int n = static_cast<int>(checkpoints.size());
  TailModel model{{theta}, std::max(1, (n - 2) / (log_degree + 1)), log_degree};
  return accelerate(checkpoints, model);
}

}  // namespace zetalab

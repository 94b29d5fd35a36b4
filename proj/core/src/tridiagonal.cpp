#include "compacton/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "compacton/error.hpp"

namespace compacton {

int sturm_count(const Tridiagonal& t, double x) {
  const std::size_t n = t.diag.size();
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double b2 = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1];
    q = (t.diag[i] - x) - (i == 0 ? 0.0 : b2 / q);
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(x) + 1.0);
    if (q < 0.0) ++count;
  }
  return count;
}

double tridiagonal_eigenvalue(const Tridiagonal& t, int k, double tol) {
  const std::size_t n = t.diag.size();
  if (n == 0 || k < 0 || static_cast<std::size_t>(k) >= n)
    throw InvalidInput("tridiagonal_eigenvalue: index out of range");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(t.off[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (sturm_count(t, mid) > k) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> tridiagonal_solve(const Tridiagonal& t, double shift, std::span<const double> b) {
  const std::size_t n = t.diag.size();
  // Banded LU with partial pivoting: U has two super-diagonals.
  std::vector<double> d(n), u1(n, 0.0), u2(n, 0.0), x(b.begin(), b.end());
  std::vector<double> sub(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = t.diag[i] - shift;
    if (i + 1 < n) u1[i] = t.off[i];
    if (i > 0) sub[i] = t.off[i - 1];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(sub[i + 1]) > std::abs(d[i])) {
      // swap rows i and i+1
      std::swap(d[i], sub[i + 1]);
      const double a = u1[i];
      u1[i] = d[i + 1];
      d[i + 1] = a;
      const double c = u2[i];
      u2[i] = i + 2 < n ? u1[i + 1] : 0.0;
      if (i + 2 < n) u1[i + 1] = c;
      std::swap(x[i], x[i + 1]);
    }
    if (d[i] == 0.0) d[i] = std::numeric_limits<double>::epsilon() * (1.0 + std::abs(shift));
    const double m = sub[i + 1] / d[i];
    d[i + 1] -= m * u1[i];
    if (i + 2 < n) u1[i + 1] -= m * u2[i];
    x[i + 1] -= m * x[i];
  }
  if (d[n - 1] == 0.0) d[n - 1] = std::numeric_limits<double>::epsilon() * (1.0 + std::abs(shift));
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    if (ii + 1 < n) s -= u1[ii] * x[ii + 1];
    if (ii + 2 < n) s -= u2[ii] * x[ii + 2];
    x[ii] = s / d[ii];
  }
  return x;
}

std::vector<double> tridiagonal_eigenvector(const Tridiagonal& t, double lambda) {
  const std::size_t n = t.diag.size();
  std::vector<double> v(n);
  // Deterministic start with components in every direction.
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * std::sin(0.37 * static_cast<double>(i) + 0.1);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(t.diag[i]));
  const double shift = lambda + 1e-14 * (1.0 + scale);
  for (int it = 0; it < 4; ++it) {
    v = tridiagonal_solve(t, shift, v);
    double norm = 0.0;
    for (double a : v) norm += a * a;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalFailure("inverse iteration broke down");
    for (double& a : v) a /= norm;
  }
  // Fix the sign so that the largest component is positive.
  const auto it = std::max_element(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*it < 0.0)
    for (double& a : v) a = -a;
  return v;
}

}  // namespace compacton

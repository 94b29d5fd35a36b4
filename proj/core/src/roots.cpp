#include "compacton/roots.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "compacton/error.hpp"

namespace compacton {

double solve_bracketed(const std::function<double(double)>& f,
                       const std::function<double(double)>& df, double lo, double hi,
                       double rel_tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw NumericalFailure("solve_bracketed: no sign change");

  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    double next = 0.5 * (lo + hi);
    if (df) {
      const double d = df(x);
      if (d != 0.0 && std::isfinite(d)) {
        const double newton = x - fx / d;
        if (newton > lo && newton < hi) next = newton;
      }
    }
    const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
    if (std::abs(next - x) <= rel_tol * scale || hi - lo <= rel_tol * scale) return next;
    x = next;
  }
  return x;
}

std::optional<std::pair<double, double>> first_sign_change(const std::function<double(double)>& f,
                                                           double lo, double hi, int samples) {
  double prev_x = lo;
  double prev_f = f(lo);
  for (int i = 1; i <= samples; ++i) {
    const double x = lo + (hi - lo) * i / samples;
    const double fx = f(x);
    if (prev_f == 0.0) return std::make_pair(prev_x, prev_x);
    if ((fx > 0.0) != (prev_f > 0.0) || fx == 0.0) return std::make_pair(prev_x, x);
    prev_x = x;
    prev_f = fx;
  }
  return std::nullopt;
}

GoldenResult golden_section(const std::function<double(double)>& f, double lo, double hi,
                            double x_tol, int max_iter) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  while (b - a > x_tol && it < max_iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++it;
  }
  // Endpoints are candidates too: the optimum may sit on the bracket edge.
  GoldenResult best{c, fc, it};
  if (fd < best.value) best = {d, fd, it};
  const double fa = f(lo);
  const double fb = f(hi);
  if (fa < best.value) best = {lo, fa, it};
  if (fb < best.value) best = {hi, fb, it};
  return best;
}

}  // namespace compacton

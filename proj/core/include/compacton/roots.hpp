#pragma once

#include <functional>
#include <optional>

namespace compacton {

/// Safeguarded Newton iteration inside a sign-changing bracket [lo, hi].
/// Falls back to bisection whenever the Newton step leaves the bracket.
/// `df` may be empty, in which case pure bisection (plus secant polish) is used.
double solve_bracketed(const std::function<double(double)>& f,
                       const std::function<double(double)>& df, double lo, double hi,
                       double rel_tol = 1e-12);

/// Scans [lo, hi] at `samples` points and returns the first sub-interval on
/// which f changes sign, if any.
std::optional<std::pair<double, double>> first_sign_change(const std::function<double(double)>& f,
                                                           double lo, double hi,
                                                           int samples = 256);

/// Golden-section minimisation of a unimodal function on [lo, hi].
struct GoldenResult {
  double x;
  double value;
  int iterations;
};
GoldenResult golden_section(const std::function<double(double)>& f, double lo, double hi,
                            double x_tol, int max_iter = 200);

}  // namespace compacton

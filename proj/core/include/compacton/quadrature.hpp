#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace compacton {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes and weights of the m-point Gauss-Legendre rule (cached, thread safe).
const GaussRule& gauss_legendre(int m);

/// Composite Gauss-Legendre quadrature of f over [a, b] with `panels` equal panels.
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int panels = 8, int order = 16);

/// Composite Simpson rule on uniformly spaced samples with spacing h.
/// An even number of intervals uses Simpson throughout; an odd number closes
/// with the 3/8 rule on the last three intervals.
double simpson(std::span<const double> f, double h);

/// Composite trapezoidal rule on uniform samples.
double trapezoid(std::span<const double> f, double h);

/// Fourth-order cumulative quadrature for samples on a cell-centred grid.
///
/// The grid has n cells of width h covering [a, a + n h]; sample i sits at
/// a + (i + 1/2) h. The returned vector has n + 1 entries: entry i is the
/// integral from the left wall to cell centre i, and the last entry is the
/// integral over the whole interval.
std::vector<double> cumulative_cell_integral(std::span<const double> f, double h);

/// Weights w such that sum_i w_i f_i equals the last entry of
/// cumulative_cell_integral (the full-interval integral).
std::vector<double> cell_quadrature_weights(std::size_t n, double h);

}  // namespace compacton

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "compacton/spectral.hpp"

namespace testing_support {

/// exp(-1 / (1 - y^2)) with y = (x - a) / w, zero outside.
inline double bump(double x, double a, double w) {
  const double y = (x - a) / w;
  return std::abs(y) < 1 ? std::exp(-1.0 / (1.0 - y * y)) : 0.0;
}

/// Smooth bumps with random centre and width inside the support, made
/// orthogonal to the constrained directions of the case.
inline std::vector<std::vector<double>> random_bumps(const compacton::LinearizedOperator& op, int count,
                                                     unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> centre(-0.3, 0.3), width(0.3, 0.6);
  const double X = op.x_r();
  std::vector<std::vector<double>> out;
  std::vector<std::vector<double>> basis{op.phi()};
  if (op.case_tag() == compacton::CaseTag::B0c1) basis.push_back(op.phi_x());
  const bool constrained = op.case_tag() == compacton::CaseTag::B0c1 || op.case_tag() == compacton::CaseTag::B14c0;
  for (int k = 0; k < count; ++k) {
    const double a = centre(gen) * X, w = width(gen) * X;
    std::vector<double> f(op.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = bump(op.xs()[i], a, w);
    if (constrained) {
      // Subtract multiples of two further bumps so <f, b> = 0 for each b in basis;
      // the correction stays compactly supported and smooth.
      std::vector<std::vector<double>> g;
      for (std::size_t j = 0; j < basis.size(); ++j) {
        std::vector<double> gj(op.size());
        const double cj = (j == 0 ? -0.4 : 0.45) * X;
        for (std::size_t i = 0; i < gj.size(); ++i) gj[i] = bump(op.xs()[i], cj, 0.45 * X);
        g.push_back(gj);
      }
      const std::size_t m = basis.size();
      // Solve M c = r with M_ij = <g_j, b_i>, r_i = <f, b_i>.
      double M[2][2] = {}, r[2] = {};
      for (std::size_t i = 0; i < m; ++i) {
        r[i] = op.inner(f, basis[i]);
        for (std::size_t j = 0; j < m; ++j) M[i][j] = op.inner(g[j], basis[i]);
      }
      double c[2] = {};
      if (m == 1) {
        c[0] = r[0] / M[0][0];
      } else {
        const double det = M[0][0] * M[1][1] - M[0][1] * M[1][0];
        c[0] = (r[0] * M[1][1] - r[1] * M[0][1]) / det;
        c[1] = (M[0][0] * r[1] - M[1][0] * r[0]) / det;
      }
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < f.size(); ++i) f[i] -= c[j] * g[j][i];
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace testing_support

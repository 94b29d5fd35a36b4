#include "compacton/quadrature.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "compacton/error.hpp"

namespace compacton {

namespace {

GaussRule make_rule(int m) {
  GaussRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[m - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[m - 1 - i] = w;
  }
  return rule;
}

// Integral over [lo, hi] (in units of h, nodes at t = 0, 1, 2, 3) of each
// cubic Lagrange basis polynomial.
std::array<double, 4> lagrange_cubic_weights(double lo, double hi) {
  const auto& g = gauss_legendre(4);
  std::array<double, 4> w{};
  for (std::size_t q = 0; q < g.nodes.size(); ++q) {
    const double t = 0.5 * (hi - lo) * g.nodes[q] + 0.5 * (hi + lo);
    const double gw = 0.5 * (hi - lo) * g.weights[q];
    for (int j = 0; j < 4; ++j) {
      double l = 1.0;
      for (int k = 0; k < 4; ++k) {
        if (k != j) l *= (t - k) / static_cast<double>(j - k);
      }
      w[j] += gw * l;
    }
  }
  return w;
}

}  // namespace

const GaussRule& gauss_legendre(int m) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, make_rule(m)).first;
  return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int panels,
                    int order) {
  const auto& g = gauss_legendre(order);
  const double width = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double mid = lo + 0.5 * width;
    double panel = 0.0;
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      panel += g.weights[q] * f(mid + 0.5 * width * g.nodes[q]);
    }
    sum += 0.5 * width * panel;
  }
  return sum;
}

double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 3) throw InvalidInput("simpson: need at least 3 samples");
  const std::size_t intervals = n - 1;
  std::size_t end = intervals % 2 == 0 ? intervals : intervals - 3;
  double sum = 0.0;
  if (end >= 2) {
    sum = f[0] + f[end];
    for (std::size_t i = 1; i < end; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    sum *= h / 3.0;
  }
  if (end != intervals) {
    if (n < 4) throw InvalidInput("simpson: need at least 4 samples for an odd interval count");
    sum += 3.0 * h / 8.0 * (f[end] + 3.0 * f[end + 1] + 3.0 * f[end + 2] + f[end + 3]);
  }
  return sum;
}

double trapezoid(std::span<const double> f, double h) {
  if (f.size() < 2) return 0.0;
  double sum = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
  return sum * h;
}

std::vector<double> cumulative_cell_integral(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 4) throw InvalidInput("cumulative_cell_integral: need at least 4 cells");
  static const auto left = lagrange_cubic_weights(-0.5, 0.0);
  static const auto right = lagrange_cubic_weights(3.0, 3.5);

  std::vector<double> out(n + 1);
  out[0] = h * (left[0] * f[0] + left[1] * f[1] + left[2] * f[2] + left[3] * f[3]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double piece;
    if (i == 0) {
      piece = (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) / 24.0;
    } else if (i + 2 == n) {
      piece = (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]) / 24.0;
    } else {
      piece = (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]) / 24.0;
    }
    out[i + 1] = out[i] + h * piece;
  }
  out[n] = out[n - 1] + h * (right[0] * f[n - 4] + right[1] * f[n - 3] + right[2] * f[n - 2] +
                             right[3] * f[n - 1]);
  return out;
}

std::vector<double> cell_quadrature_weights(std::size_t n, double h) {
  static const auto left = lagrange_cubic_weights(-0.5, 0.0);
  static const auto right = lagrange_cubic_weights(3.0, 3.5);
  if (n < 4) throw InvalidInput("cell_quadrature_weights: need at least 4 cells");
  std::vector<double> w(n, 0.0);
  for (int j = 0; j < 4; ++j) w[j] += left[j];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (i == 0) {
      w[0] += 9.0 / 24.0; w[1] += 19.0 / 24.0; w[2] -= 5.0 / 24.0; w[3] += 1.0 / 24.0;
    } else if (i + 2 == n) {
      w[n - 4] += 1.0 / 24.0; w[n - 3] -= 5.0 / 24.0; w[n - 2] += 19.0 / 24.0; w[n - 1] += 9.0 / 24.0;
    } else {
      w[i - 1] -= 1.0 / 24.0; w[i] += 13.0 / 24.0; w[i + 1] += 13.0 / 24.0; w[i + 2] -= 1.0 / 24.0;
    }
  }
  for (int j = 0; j < 4; ++j) w[n - 4 + j] += right[j];
  for (auto& x : w) x *= h;
  return w;
}

}  // namespace compacton

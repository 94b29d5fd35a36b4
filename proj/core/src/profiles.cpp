#include "compacton/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "compacton/error.hpp"
#include "compacton/quadrature.hpp"
#include "compacton/roots.hpp"

namespace compacton {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_p4(const ModelParams& m) { return m.p == 4.0 && m.A == 0.0; }
bool is_p2(const ModelParams& m) { return m.p == 2.0 && m.A == 0.0; }

void require_finite(const ModelParams& m) {
  if (!std::isfinite(m.p) || !std::isfinite(m.A) || !std::isfinite(m.B) || !std::isfinite(m.c))
    throw InvalidInput("model parameters must be finite");
}

bool adjacent_to_zero(const ModelParams& m) {
  return m.B > 0.0 || (m.B == 0.0 && m.A > 0.0) || (m.A == 0.0 && m.B == 0.0 && m.c > 0.0);
}

double G_of(const ModelParams& m, double s) {
  return 2.0 * m.B + 2.0 * m.A * s + m.c * s * s - (2.0 / m.p) * std::pow(s, m.p);
}

double dG_of(const ModelParams& m, double s) {
  return 2.0 * m.A + 2.0 * m.c * s - 2.0 * std::pow(s, m.p - 1.0);
}

// G divided by its vanishing order at s = 0, positive near 0 on the compacton branch.
double reduced_G(const ModelParams& m, double s) {
  if (m.B > 0.0) return G_of(m, s);
  if (m.A > 0.0) return 2.0 * m.A + m.c * s - (2.0 / m.p) * std::pow(s, m.p - 1.0);
  return m.c - (2.0 / m.p) * std::pow(s, m.p - 2.0);
}

double F_direct(const ModelParams& m, double s) {
  return 2.0 * m.B / (s * s) + 2.0 * m.A / s + m.c - (2.0 / m.p) * std::pow(s, m.p - 2.0);
}

// Positive roots of the equilibrium relation s^(p-1) - c s = A (double roots of G).
std::vector<double> equilibria(const ModelParams& m) {
  auto h = [&](double s) { return std::pow(s, m.p - 1.0) - m.c * s - m.A; };
  auto dh = [&](double s) { return (m.p - 1.0) * std::pow(s, m.p - 2.0) - m.c; };
  double hi = 1.0;
  for (int i = 0; i < 200 && h(hi) <= 0.0; ++i) hi *= 2.0;
  std::vector<double> out;
  auto root_in = [&](double a, double b) {
    const double fa = h(a);
    const double fb = h(b);
    if (fa == 0.0 && a > 0.0) out.push_back(a);
    else if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0))
      out.push_back(solve_bracketed(h, dh, a, b, 1e-14));
  };
  if (m.c > 0.0) {
    const double s_star = std::pow(m.c / (m.p - 1.0), 1.0 / (m.p - 2.0));
    root_in(0.0, s_star);
    root_in(s_star, std::max(hi, 2.0 * s_star));
  } else {
    root_in(0.0, hi);
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](double z) { return !(z > 0.0); }),
            out.end());
  return out;
}

double front_tolerance(const ModelParams& m) { return 1e-10 * (1.0 + std::abs(m.c)); }

}  // namespace

std::string to_string(SolutionKind kind) {
  switch (kind) {
    case SolutionKind::Periodic: return "Periodic";
    case SolutionKind::Front: return "Front";
    case SolutionKind::Compacton: return "Compacton";
  }
  return "?";
}

std::string to_string(EdgeCase edge) {
  switch (edge) {
    case EdgeCase::B_pos_A_nonzero: return "B_pos_A_nonzero";
    case EdgeCase::B_zero_A_pos: return "B_zero_A_pos";
    case EdgeCase::A_zero_B_pos: return "A_zero_B_pos";
    case EdgeCase::A_B_zero_c_pos: return "A_B_zero_c_pos";
  }
  return "?";
}

double first_integral(double phi, const ModelParams& params) {
  if (phi < 0.0 || std::isnan(phi)) throw InvalidInput("first_integral: phi must be nonnegative");
  if (phi == 0.0) {
    if (params.A != 0.0 || params.B != 0.0)
      throw InvalidInput("first_integral: division by zero at phi = 0 with A or B nonzero");
    return params.p == 2.0 ? params.c - 1.0 : (params.p > 2.0 ? params.c : -kInf);
  }
  return F_direct(params, phi);
}

std::optional<double> stationary_point(double A, double c, double p) {
  if (!(p > 2.0)) throw InvalidInput("stationary_point: requires p > 2");
  auto g = [&](double z) { return std::pow(z, p - 2.0) - c * z - A; };
  auto dg = [&](double z) { return (p - 2.0) * std::pow(z, p - 3.0) - c; };
  // Log-spaced coarse scan; the relation mixes scales through A and c.
  constexpr int kSamples = 256;
  const double lo = 1e-8;
  const double hi = 1e8;
  double prev_z = lo;
  double prev = g(lo);
  for (int i = 1; i <= kSamples; ++i) {
    const double z = lo * std::pow(hi / lo, static_cast<double>(i) / kSamples);
    const double gz = g(z);
    if (prev == 0.0) return prev_z;
    if ((gz > 0.0) != (prev > 0.0) || gz == 0.0) return solve_bracketed(g, dg, prev_z, z, 1e-12);
    prev_z = z;
    prev = gz;
  }
  return std::nullopt;
}

SolutionClass classify(const ModelParams& params) {
  require_finite(params);
  if (!(params.p > 2.0)) throw InvalidInput("classify: requires p > 2");
  const double tol = front_tolerance(params);
  const auto eq = equilibria(params);

  if (adjacent_to_zero(params)) {
    for (double z : eq) {
      if (std::abs(F_direct(params, z)) >= tol) continue;
      bool positive_below = true;
      for (int i = 1; i < 256; ++i) {
        if (reduced_G(params, z * i / 256.0) <= 0.0) {
          positive_below = false;
          break;
        }
      }
      if (positive_below) return {SolutionKind::Front, std::nullopt};
    }
    EdgeCase edge;
    if (params.B > 0.0)
      edge = params.A != 0.0 ? EdgeCase::B_pos_A_nonzero : EdgeCase::A_zero_B_pos;
    else if (params.A > 0.0)
      edge = EdgeCase::B_zero_A_pos;
    else
      edge = EdgeCase::A_B_zero_c_pos;
    return {SolutionKind::Compacton, edge};
  }

  for (double z : eq)
    if (F_direct(params, z) > tol) return {SolutionKind::Periodic, std::nullopt};
  throw InvalidInput("classify: F < 0 for all phi > 0, no non-constant positive solution");
}

namespace {

void require_compacton_branch(const ModelParams& m, const char* who) {
  require_finite(m);
  if (m.A != 0.0) throw InvalidInput(std::string(who) + ": requires A = 0");
  if (m.p == 2.0) {
    if (!(m.B > 0.0) || !(m.c < 1.0))
      throw InvalidInput(std::string(who) + ": p = 2 compactons require B > 0 and c < 1");
    return;
  }
  if (!(m.p > 2.0)) throw InvalidInput(std::string(who) + ": requires p >= 2");
  const auto cls = classify(m);
  if (cls.tag != SolutionKind::Compacton)
    throw InvalidInput(std::string(who) + ": parameters are not in the compacton region (" +
                       to_string(cls.tag) + ")");
}

}  // namespace

// ---------------------------------------------------------------------------
// CompactonQuadrature

CompactonQuadrature::CompactonQuadrature(const ModelParams& params) : params_(params) {
  require_finite(params);
  if (params.p < 2.0) throw InvalidInput("compacton quadrature: requires p >= 2");
  if (params.p == 2.0 && !(params.c < 1.0))
    throw InvalidInput("compacton quadrature: p = 2 requires c < 1");
  if (!adjacent_to_zero(params))
    throw InvalidInput("compacton quadrature: no solution branch emanates from phi = 0");

  auto r = [this](double s) { return reduced_G(params_, s); };
  double hi = 1.0;
  for (int i = 0; i < 200 && r(hi) >= 0.0; ++i) hi *= 2.0;
  if (r(hi) >= 0.0) throw NumericalFailure("compacton quadrature: turning point not bracketed");
  auto bracket = first_sign_change(r, 0.0, hi, 256);
  if (!bracket) throw NumericalFailure("compacton quadrature: turning point not found");
  peak_ = solve_bracketed(r, {}, bracket->first, bracket->second, 1e-15);
  // Polish on G itself, which has a simple root here.
  for (int i = 0; i < 3; ++i) {
    const double d = dG(peak_);
    if (d == 0.0) break;
    const double step = G(peak_) / d;
    if (!(std::abs(step) < 1e-8 * peak_)) break;
    peak_ -= step;
  }
  if (!(dG(peak_) < 0.0))
    throw NumericalFailure("compacton quadrature: degenerate turning point (front)");

  const double m = peak_;
  const double p = params_.p;
  const double g1 = dG(m);
  const double g2 = 2.0 * params_.c - 2.0 * (p - 1.0) * std::pow(m, p - 2.0);
  const double g3 = -2.0 * (p - 1.0) * (p - 2.0) * std::pow(m, p - 3.0);
  const double g4 = -2.0 * (p - 1.0) * (p - 2.0) * (p - 3.0) * std::pow(m, p - 4.0);
  // G(m - w) = w (taylor_[0] + taylor_[1] w + taylor_[2] w^2 + taylor_[3] w^3) + O(w^5)
  taylor_[0] = -g1;
  taylor_[1] = 0.5 * g2;
  taylor_[2] = -g3 / 6.0;
  taylor_[3] = g4 / 24.0;

  graded_ = params_.A == 0.0 && params_.B == 0.0 && params_.p != std::round(params_.p);

  u_mid_ = std::sqrt(0.5 * m);
  t_mid_ = std::sqrt(m - u_mid_ * u_mid_);
  x_mid_ = x_of_u(u_mid_);
  edge_mid_ = edge_distance_of_t(t_mid_);
  half_width_ = x_mid_ + edge_mid_;
}

double CompactonQuadrature::G(double s) const { return G_of(params_, s); }
double CompactonQuadrature::dG(double s) const { return dG_of(params_, s); }

double CompactonQuadrature::F_at_u(double u) const {
  const double w = u * u;
  const double s = peak_ - w;
  if (w < 1e-3 * peak_) {
    const double P = taylor_[0] + w * (taylor_[1] + w * (taylor_[2] + w * taylor_[3]));
    return w * P / (s * s);
  }
  return F_direct(params_, s);
}

double CompactonQuadrature::top_jacobian(double u) const {
  const double w = u * u;
  const double s = peak_ - w;
  if (w < 1e-3 * peak_) {
    const double P = taylor_[0] + w * (taylor_[1] + w * (taylor_[2] + w * taylor_[3]));
    return 2.0 * s / std::sqrt(P);
  }
  return 2.0 * u / std::sqrt(F_direct(params_, s));
}

double CompactonQuadrature::bottom_jacobian(double t) const {
  if (t == 0.0) return 0.0;
  const double F = F_direct(params_, t * t);
  return 2.0 * t / std::sqrt(F);
}

double CompactonQuadrature::integrate_bottom(const std::function<double(double)>& f, double t0,
                                             double t1) const {
  if (t1 <= t0) return 0.0;
  if (!graded_ || t0 > 0.0) return integrate_gl(f, t0, t1, 2, 16);
  double total = 0.0;
  double b = t1;
  for (int level = 0; level < 24; ++level) {
    const double a = 0.5 * b;
    total += integrate_gl(f, a, b, 1, 16);
    b = a;
  }
  return total + integrate_gl(f, 0.0, b, 1, 16);
}

double CompactonQuadrature::x_of_u(double u) const {
  return integrate_gl([this](double v) { return top_jacobian(v); }, 0.0, u, 8, 16);
}

double CompactonQuadrature::edge_distance_of_t(double t) const {
  return integrate_bottom([this](double v) { return bottom_jacobian(v); }, 0.0, t);
}

CompactonQuadrature::Point CompactonQuadrature::locate(double x) const {
  x = std::abs(x);
  if (x >= half_width_) return {0.0, kInf, false, 0.0};
  if (x <= x_mid_) {
    if (x == 0.0) return {peak_, 0.0, true, 0.0};
    auto f = [&](double u) { return x_of_u(u) - x; };
    auto df = [&](double u) { return top_jacobian(u); };
    const double u = solve_bracketed(f, df, 0.0, u_mid_, 1e-15);
    return {peak_ - u * u, F_at_u(u), true, u};
  }
  const double d = half_width_ - x;
  if (d >= edge_mid_) return {t_mid_ * t_mid_, F_direct(params_, t_mid_ * t_mid_), false, t_mid_};
  auto f = [&](double t) { return edge_distance_of_t(t) - d; };
  auto df = [&](double t) { return bottom_jacobian(t); };
  const double t = solve_bracketed(f, df, 0.0, t_mid_, 1e-15);
  const double s = t * t;
  return {s, F_direct(params_, s), false, t};
}

CompactonQuadrature::Integrals CompactonQuadrature::integrals() const {
  const double p = params_.p;
  auto top = [&](auto&& g) {
    return integrate_gl([&](double u) { return g(peak_ - u * u) * top_jacobian(u); }, 0.0, u_mid_,
                        32, 16);
  };
  auto bottom = [&](auto&& g) {
    return integrate_bottom([&](double t) { return g(t * t) * bottom_jacobian(t); }, 0.0, t_mid_);
  };
  auto sq = [](double s) { return s * s; };
  auto disp = [&](double s) { return std::max(0.0, G(s)); };
  auto pot = [&](double s) { return std::pow(s, p); };
  Integrals out{};
  out.mass = 2.0 * (top(sq) + bottom(sq));
  out.dispersion = 2.0 * (top(disp) + bottom(disp));
  out.potential = 2.0 * (top(pot) + bottom(pot));
  return out;
}

// ---------------------------------------------------------------------------
// Closed forms (A = 0)

namespace {

struct ClosedP4 {
  double c, Z, X;
  explicit ClosedP4(const ModelParams& m)
      : c(m.c), Z(std::sqrt(4.0 * m.B + m.c * m.c)), X(std::acos(-m.c / Z) / std::numbers::sqrt2) {}
  // c + Z cos(sqrt2 x) written as a product, exact at the support edge.
  double rho(double x) const {
    const double r2 = std::numbers::sqrt2;
    return 2.0 * Z * std::sin(r2 * (X + x) / 2.0) * std::sin(r2 * (X - x) / 2.0);
  }
  double drho(double x) const { return -std::numbers::sqrt2 * Z * std::sin(std::numbers::sqrt2 * x); }
};

struct ClosedP2 {
  double c, X;
  explicit ClosedP2(const ModelParams& m) : c(m.c), X(std::sqrt(2.0 * m.B) / (1.0 - m.c)) {}
  double rho(double x) const { return (1.0 - c) * (X - x) * (X + x); }
  double drho(double x) const { return 2.0 * (c - 1.0) * x; }
};

// Evaluates a compacton of either construction at arbitrary x.
class CompactonEvaluator {
public:
  explicit CompactonEvaluator(const ModelParams& m) : params_(m) {
    if (is_p4(m)) p4_.emplace(m);
    else if (is_p2(m)) p2_.emplace(m);
    else quad_.emplace(m);
  }
  double half_width() const {
    if (p4_) return p4_->X;
    if (p2_) return p2_->X;
    return quad_->half_width();
  }
  double operator()(double x) const {
    x = std::abs(x);
    if (x >= half_width()) return 0.0;
    if (p4_) return std::sqrt(std::max(0.0, p4_->rho(x)));
    if (p2_) return std::sqrt(std::max(0.0, p2_->rho(x)));
    return quad_->phi_of_x(x);
  }

private:
  ModelParams params_;
  std::optional<ClosedP4> p4_;
  std::optional<ClosedP2> p2_;
  std::optional<CompactonQuadrature> quad_;
};

std::vector<double> symmetric_grid(double half, std::size_t n) {
  std::vector<double> xs(n);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    xs[i] = half * ((2.0 * static_cast<double>(i) - denom) / denom);
  xs.front() = -half;
  xs.back() = half;
  return xs;
}

// Fills phi/dphi for x >= 0 via `right`, then mirrors (phi even, dphi odd).
template <class Right>
void fill_even(const std::vector<double>& xs, std::vector<double>& phi, std::vector<double>& dphi,
               Right&& right) {
  const std::size_t n = xs.size();
  phi.assign(n, 0.0);
  dphi.assign(n, 0.0);
  for (std::size_t i = n / 2; i < n; ++i) {
    if (xs[i] < 0.0) continue;
    const auto [f, df] = right(xs[i]);
    phi[i] = f;
    dphi[i] = xs[i] == 0.0 ? 0.0 : df;
    const std::size_t j = n - 1 - i;
    phi[j] = phi[i];
    dphi[j] = -dphi[i];
  }
}

double edge_slope(const ModelParams& m) {
  // phi' at x -> X-, finite only when A = B = 0.
  if (m.B > 0.0 || m.A > 0.0) return -kInf;
  return -std::sqrt(m.c);
}

}  // namespace

double support_half_width(const ModelParams& params) {
  require_compacton_branch(params, "support_half_width");
  return CompactonEvaluator(params).half_width();
}

double CompactonProfile::flux(std::size_t i) const {
  if (phi[i] == 0.0) {
    const double limit = params.B > 0.0 ? std::sqrt(2.0 * params.B) : 0.0;
    return xs[i] > 0.0 ? -limit : limit;
  }
  return phi[i] * dphi[i];
}

std::vector<double> CompactonProfile::fluxes() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = flux(i);
  return out;
}

CompactonProfile build_compacton(const ModelParams& params, std::size_t n) {
  require_compacton_branch(params, "build_compacton");
  if (n < 16) throw InvalidInput("build_compacton: need at least 16 samples");
  if (!is_p4(params) && !is_p2(params)) return build_compacton_quadrature(params, n);

  CompactonProfile out;
  out.params = params;
  out.closed_form = true;
  if (is_p4(params)) {
    const ClosedP4 cf(params);
    out.half_width = cf.X;
    out.xs = symmetric_grid(cf.X, n);
    fill_even(out.xs, out.phi, out.dphi, [&](double x) -> std::pair<double, double> {
      if (x >= cf.X) return {0.0, edge_slope(params)};
      if (params.B == 0.0) {
        // sqrt(2c) cos(x / sqrt2)
        const double a = x / std::numbers::sqrt2;
        return {std::sqrt(2.0 * params.c) * std::cos(a), -std::sqrt(params.c) * std::sin(a)};
      }
      const double f = std::sqrt(cf.rho(x));
      return {f, cf.drho(x) / (2.0 * f)};
    });
  } else {
    const ClosedP2 cf(params);
    out.half_width = cf.X;
    out.xs = symmetric_grid(cf.X, n);
    fill_even(out.xs, out.phi, out.dphi, [&](double x) -> std::pair<double, double> {
      if (x >= cf.X) return {0.0, -kInf};
      const double f = std::sqrt(cf.rho(x));
      return {f, cf.drho(x) / (2.0 * f)};
    });
  }
  return out;
}

CompactonProfile build_compacton_quadrature(const ModelParams& params, std::size_t n) {
  require_finite(params);
  if (!(params.p > 2.0)) throw InvalidInput("build_compacton_quadrature: requires p > 2");
  if (n < 16) throw InvalidInput("build_compacton_quadrature: need at least 16 samples");
  const auto cls = classify(params);
  if (cls.tag != SolutionKind::Compacton)
    throw InvalidInput("build_compacton_quadrature: parameters are not in the compacton region (" +
                       to_string(cls.tag) + ")");
  const CompactonQuadrature q(params);
  CompactonProfile out;
  out.params = params;
  out.closed_form = false;
  out.half_width = q.half_width();
  out.xs = symmetric_grid(out.half_width, n);
  double previous = kInf;
  fill_even(out.xs, out.phi, out.dphi, [&](double x) -> std::pair<double, double> {
    if (x >= out.half_width) return {0.0, edge_slope(params)};
    const auto pt = q.locate(x);
    if (pt.s > previous) throw NumericalFailure("build_compacton_quadrature: inversion is not monotone");
    previous = pt.s;
    return {pt.s, -std::sqrt(std::max(0.0, pt.F))};
  });
  return out;
}

double compacton_value(const ModelParams& params, double x) {
  require_compacton_branch(params, "compacton_value");
  return CompactonEvaluator(params)(x);
}

// ---------------------------------------------------------------------------
// Periodic profiles

namespace {

// Quadrature between the two simple roots a < b of G, with s = m + r cos(theta).
class PeriodicQuadrature {
public:
  explicit PeriodicQuadrature(const ModelParams& params) : params_(params) {
    const double tol = front_tolerance(params);
    double z = -1.0;
    for (double e : equilibria(params)) {
      const double d2 = 2.0 * params.c - 2.0 * (params.p - 1.0) * std::pow(e, params.p - 2.0);
      if (F_direct(params, e) > tol && d2 < 0.0) z = e;
    }
    if (z < 0.0) throw InvalidInput("build_periodic: no periodic orbit for these parameters");
    auto g = [this](double s) { return G_of(params_, s); };
    auto dg = [this](double s) { return dG_of(params_, s); };
    // Lower root: scan down from z.
    auto glow = [&](double s) {
      return params_.B == 0.0 ? 2.0 * params_.A + params_.c * s -
                                    (2.0 / params_.p) * std::pow(s, params_.p - 1.0)
                              : g(s);
    };
    double lo_a = 0.0;
    double hi_a = z;
    {
      constexpr int kSamples = 256;
      double prev = z;
      for (int i = 1; i <= kSamples; ++i) {
        const double s = z * (1.0 - static_cast<double>(i) / kSamples);
        if (glow(s) <= 0.0) {
          lo_a = s;
          hi_a = prev;
          break;
        }
        prev = s;
      }
    }
    a_ = solve_bracketed(glow, {}, lo_a, hi_a, 1e-15);
    double hi = 2.0 * z;
    for (int i = 0; i < 200 && g(hi) >= 0.0; ++i) hi *= 2.0;
    auto br = first_sign_change(g, z, hi, 256);
    if (!br) throw NumericalFailure("build_periodic: upper turning point not found");
    b_ = solve_bracketed(g, dg, br->first, br->second, 1e-15);
    if (!(a_ > 0.0) || !(b_ > a_)) throw NumericalFailure("build_periodic: invalid turning points");
    m_ = 0.5 * (a_ + b_);
    r_ = 0.5 * (b_ - a_);
    set_taylor(b_, -1.0, tb_);
    set_taylor(a_, 1.0, ta_);
    half_period_ = x_of_theta(std::numbers::pi);
  }

  double min_value() const { return a_; }
  double max_value() const { return b_; }
  double period() const { return 2.0 * half_period_; }

  double jacobian(double th) const {
    const double sh = std::sin(0.5 * th);
    const double ch = std::cos(0.5 * th);
    const double eb = 2.0 * r_ * sh * sh;  // b - s
    const double ea = 2.0 * r_ * ch * ch;  // s - a
    const double s = th < 0.5 * std::numbers::pi ? b_ - eb : a_ + ea;
    const double k = std::sqrt(2.0 * r_);
    if (eb < 1e-3 * r_) return k * ch * s / std::sqrt(poly(tb_, eb));
    if (ea < 1e-3 * r_) return k * sh * s / std::sqrt(poly(ta_, ea));
    return r_ * std::sin(th) * s / std::sqrt(G_of(params_, s));
  }

  double x_of_theta(double th) const {
    return integrate_gl([this](double t) { return jacobian(t); }, 0.0, th, 16, 16);
  }

  // (phi, F(phi)) at |x| reduced to [0, half period].
  std::pair<double, double> locate(double x) const {
    x = std::fmod(std::abs(x), period());
    if (x > half_period_) x = period() - x;
    if (x == 0.0) return {b_, 0.0};
    if (x >= half_period_) return {a_, 0.0};
    auto f = [&](double t) { return x_of_theta(t) - x; };
    auto df = [&](double t) { return jacobian(t); };
    const double th = solve_bracketed(f, df, 0.0, std::numbers::pi, 1e-15);
    const double sh = std::sin(0.5 * th);
    const double ch = std::cos(0.5 * th);
    const double eb = 2.0 * r_ * sh * sh;
    const double ea = 2.0 * r_ * ch * ch;
    const double s = th < 0.5 * std::numbers::pi ? b_ - eb : a_ + ea;
    double G;
    if (eb < 1e-3 * r_) G = eb * poly(tb_, eb);
    else if (ea < 1e-3 * r_) G = ea * poly(ta_, ea);
    else G = G_of(params_, s);
    return {s, std::max(0.0, G) / (s * s)};
  }

private:
  // G(root + dir e) = e * poly(e)
  void set_taylor(double root, double dir, double* t) const {
    const double p = params_.p;
    const double g1 = dG_of(params_, root);
    const double g2 = 2.0 * params_.c - 2.0 * (p - 1.0) * std::pow(root, p - 2.0);
    const double g3 = -2.0 * (p - 1.0) * (p - 2.0) * std::pow(root, p - 3.0);
    const double g4 = -2.0 * (p - 1.0) * (p - 2.0) * (p - 3.0) * std::pow(root, p - 4.0);
    t[0] = dir * g1;
    t[1] = 0.5 * g2;
    t[2] = dir * g3 / 6.0;
    t[3] = g4 / 24.0;
  }
  static double poly(const double* t, double e) { return t[0] + e * (t[1] + e * (t[2] + e * t[3])); }

  ModelParams params_;
  double a_ = 0.0, b_ = 0.0, m_ = 0.0, r_ = 0.0, half_period_ = 0.0;
  double tb_[4] = {}, ta_[4] = {};
};

void require_periodic(const ModelParams& m) {
  require_finite(m);
  if (!(m.p > 2.0)) throw InvalidInput("build_periodic: requires p > 2");
  if (classify(m).tag != SolutionKind::Periodic)
    throw InvalidInput("build_periodic: parameters are not in the periodic region");
}

}  // namespace

PeriodicProfile build_periodic(const ModelParams& params, std::size_t n) {
  require_periodic(params);
  if (n < 16) throw InvalidInput("build_periodic: need at least 16 samples");
  PeriodicProfile out;
  out.params = params;
  if (is_p4(params)) {
    const double Z = std::sqrt(4.0 * params.B + params.c * params.c);
    out.closed_form = true;
    out.period = std::numbers::sqrt2 * std::numbers::pi;
    out.min_value = std::sqrt(params.c - Z);
    out.max_value = std::sqrt(params.c + Z);
    out.xs = symmetric_grid(0.5 * out.period, n);
    fill_even(out.xs, out.phi, out.dphi, [&](double x) -> std::pair<double, double> {
      const double a = std::numbers::sqrt2 * x;
      const double f = std::sqrt(params.c + Z * std::cos(a));
      return {f, -std::numbers::sqrt2 * Z * std::sin(a) / (2.0 * f)};
    });
    return out;
  }
  const PeriodicQuadrature q(params);
  out.period = q.period();
  out.min_value = q.min_value();
  out.max_value = q.max_value();
  out.xs = symmetric_grid(0.5 * out.period, n);
  fill_even(out.xs, out.phi, out.dphi, [&](double x) -> std::pair<double, double> {
    const auto [s, F] = q.locate(x);
    return {s, -std::sqrt(F)};
  });
  return out;
}

double periodic_value(const ModelParams& params, double x) {
  require_periodic(params);
  if (is_p4(params)) {
    const double Z = std::sqrt(4.0 * params.B + params.c * params.c);
    return std::sqrt(params.c + Z * std::cos(std::numbers::sqrt2 * x));
  }
  return PeriodicQuadrature(params).locate(x).first;
}

// ---------------------------------------------------------------------------
// Edge expansions

std::vector<EdgeTerm> edge_expansion(const ModelParams& params, int order) {
  if (order < 1 || order > 2) throw InvalidInput("edge_expansion: order must be 1 or 2");
  EdgeCase edge;
  if (params.p == 2.0) {
    require_compacton_branch(params, "edge_expansion");
    edge = EdgeCase::A_zero_B_pos;
  } else {
    const auto cls = classify(params);
    if (cls.tag != SolutionKind::Compacton)
      throw InvalidInput("edge_expansion: parameters are not in the compacton region");
    edge = *cls.edge_case;
  }
  const double A = params.A;
  const double B = params.B;
  const double c = params.p == 2.0 ? params.c - 1.0 : params.c;
  const double p = params.p;
  std::vector<EdgeTerm> out;
  switch (edge) {
    case EdgeCase::B_pos_A_nonzero:
      out.push_back({0.5, std::sqrt(2.0 * std::sqrt(2.0 * B))});
      out.push_back({1.0, 2.0 * A / (3.0 * std::sqrt(2.0 * B))});
      break;
    case EdgeCase::B_zero_A_pos: {
      const double a = std::cbrt(4.5 * A);
      out.push_back({2.0 / 3.0, a});
      out.push_back({4.0 / 3.0, 9.0 * c / (20.0 * a)});
      break;
    }
    case EdgeCase::A_zero_B_pos:
      out.push_back({0.5, std::sqrt(2.0 * std::sqrt(2.0 * B))});
      out.push_back({1.5, c / (std::pow(2.0, 1.5) * std::pow(2.0 * B, 0.25))});
      break;
    case EdgeCase::A_B_zero_c_pos:
      out.push_back({1.0, std::sqrt(c)});
      out.push_back({p - 1.0, -std::pow(c, 0.5 * (p - 3.0)) / (p * (p - 1.0))});
      break;
  }
  out.resize(static_cast<std::size_t>(order));
  return out;
}

// ---------------------------------------------------------------------------
// Multi-compactons

std::vector<double> assemble_multi(const MultiCompacton& spec, std::span<const double> grid) {
  const auto& comps = spec.components;
  if (comps.empty()) return std::vector<double>(grid.size(), 0.0);
  for (const auto& comp : comps) {
    if (comp.sign != 1 && comp.sign != -1) throw InvalidInput("assemble_multi: sign must be +1 or -1");
    if (comp.params.c != comps.front().params.c || comp.params.p != comps.front().params.p)
      throw InvalidInput("assemble_multi: all components must share p and c");
    require_compacton_branch(comp.params, "assemble_multi");
  }
  std::vector<CompactonEvaluator> evals;
  evals.reserve(comps.size());
  for (const auto& comp : comps) evals.emplace_back(comp.params);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    for (std::size_t j = i + 1; j < comps.size(); ++j) {
      const double li = comps[i].shift - evals[i].half_width();
      const double ri = comps[i].shift + evals[i].half_width();
      const double lj = comps[j].shift - evals[j].half_width();
      const double rj = comps[j].shift + evals[j].half_width();
      if (ri > lj && rj > li)
        throw InvalidInput("assemble_multi: supports of components " + std::to_string(i) + " and " +
                           std::to_string(j) + " overlap");
    }
  }
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const double y = grid[k] - comps[i].shift;
      if (std::abs(y) < evals[i].half_width()) out[k] += comps[i].sign * evals[i](y);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Weak residual

double weak_residual(const CompactonProfile& profile, const TestFunction& psi) {
  if (!psi.d1 || !psi.d2) throw InvalidInput("weak_residual: test function needs two derivatives");
  const ModelParams& m = profile.params;
  const CompactonQuadrature q(m);
  const double X = q.half_width();
  const auto& rule = gauss_legendre(16);

  // Integrand per unit dx at a point with value s, first integral F, position x >= 0.
  auto density = [&](double s, double F, double x) {
    const double lin = (m.c * s - std::pow(s, m.p - 1.0) + F * s);
    const double curv = s * s * std::sqrt(std::max(0.0, F));
    return lin * (psi.d1(x) + psi.d1(-x)) - curv * (psi.d2(x) - psi.d2(-x));
  };

  double total = 0.0;
  // Peak chart: x increases with u.
  constexpr int kPanels = 64;
  double x_left = 0.0;
  for (int k = 0; k < kPanels; ++k) {
    const double u0 = q.u_mid() * k / kPanels;
    const double u1 = q.u_mid() * (k + 1) / kPanels;
    const double hw = 0.5 * (u1 - u0);
    const double mid = 0.5 * (u0 + u1);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double u = mid + hw * rule.nodes[j];
      const double x = x_left + integrate_gl([&](double v) { return q.top_jacobian(v); }, u0, u, 1, 16);
      total += hw * rule.weights[j] * q.top_jacobian(u) * density(q.peak() - u * u, q.F_at_u(u), x);
    }
    x_left += integrate_gl([&](double v) { return q.top_jacobian(v); }, u0, u1, 1, 16);
  }
  // Edge chart: X - x increases with t.
  double e_left = 0.0;
  for (int k = 0; k < kPanels; ++k) {
    const double t0 = q.t_mid() * k / kPanels;
    const double t1 = q.t_mid() * (k + 1) / kPanels;
    const double hw = 0.5 * (t1 - t0);
    const double mid = 0.5 * (t0 + t1);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double t = mid + hw * rule.nodes[j];
      const double e = e_left + q.integrate_bottom([&](double v) { return q.bottom_jacobian(v); }, t0, t);
      const double s = t * t;
      const double F = first_integral(s, m);
      total += hw * rule.weights[j] * q.bottom_jacobian(t) * density(s, F, X - e);
    }
    e_left += q.integrate_bottom([&](double v) { return q.bottom_jacobian(v); }, t0, t1);
  }
  return total;
}

// ---------------------------------------------------------------------------
// NLS phase

PhaseSamples nls_phase(const CompactonProfile& base) {
  const std::size_t n = base.size();
  if (n < 3) throw InvalidInput("nls_phase: profile too short");
  if (base.params.A != 0.0) throw InvalidInput("nls_phase: requires A = 0");
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (!(base.phi[i] > 0.0)) throw InvalidInput("nls_phase: profile has non-positive interior values");

  const CompactonQuadrature q(base.params);
  PhaseSamples out;
  out.theta.assign(n, 0.0);
  if (base.params.B > 0.0) {
    out.kind = PhaseAsymptotic::Logarithmic;
    out.coefficient = 1.0 / (4.0 * std::sqrt(2.0 * base.params.B));
  } else {
    out.kind = PhaseAsymptotic::InverseDistance;
    out.coefficient = 1.0 / (2.0 * base.params.c);
  }

  auto top_rate = [&](double u) {
    const double s = q.peak() - u * u;
    return -q.top_jacobian(u) / (2.0 * s * s);
  };
  auto bottom_rate = [&](double tau) {
    const double t = std::exp(tau);
    return 1.0 / std::sqrt(q.G(t * t));
  };
  const double theta_mid = integrate_gl(top_rate, 0.0, q.u_mid(), 8, 16);

  double u_prev = 0.0;
  double theta_top = 0.0;
  double tau_prev = std::log(q.t_mid());
  double theta_bottom = theta_mid;
  for (std::size_t i = n / 2; i < n; ++i) {
    const double x = base.xs[i];
    if (x < 0.0) continue;
    double th;
    if (x == 0.0) {
      th = 0.0;
    } else if (i == n - 1) {
      th = -kInf;
    } else {
      const auto pt = q.locate(x);
      if (pt.top) {
        theta_top += integrate_gl(top_rate, u_prev, pt.coord, 1, 16);
        u_prev = pt.coord;
        th = theta_top;
      } else {
        const double tau = std::log(pt.coord);
        theta_bottom -= integrate_gl(bottom_rate, tau, tau_prev, 1, 16);
        tau_prev = tau;
        th = theta_bottom;
      }
    }
    out.theta[i] = th;
    out.theta[n - 1 - i] = -th;
  }
  return out;
}

NlsProfile build_nls_compacton(const ModelParams& params, double v, std::size_t n) {
  if (!std::isfinite(v)) throw InvalidInput("build_nls_compacton: v must be finite");
  NlsProfile out;
  out.base = build_compacton(params, n);
  out.v = v;
  out.theta = nls_phase(out.base).theta;
  const std::size_t m = out.base.size();
  out.re.assign(m, 0.0);
  out.im.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double f = out.base.phi[i];
    if (f == 0.0) continue;
    const double arg = v * out.theta[i];
    out.re[i] = f * std::cos(arg);
    out.im[i] = f * std::sin(arg);
  }
  return out;
}

ModelParams scale_params(const ModelParams& params, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("scale_params: lambda must be positive");
  ModelParams out = params;
  out.A = params.A * std::pow(lambda, params.p - 1.0);
  out.B = params.B * std::pow(lambda, params.p);
  out.c = params.c * std::pow(lambda, params.p - 2.0);
  return out;
}

}  // namespace compacton

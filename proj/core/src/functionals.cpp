#include "compacton/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "compacton/error.hpp"
#include "compacton/profile_io.hpp"
#include "compacton/quadrature.hpp"
#include "compacton/roots.hpp"

namespace compacton {

namespace {

template <class F>
std::vector<double> map_samples(std::size_t n, F&& f) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
  return out;
}

void require_grid(std::size_t n, const char* who) {
  if (n < 3) throw InvalidInput(std::string(who) + ": need at least 3 samples");
}

// (w/2)_x for w = u^2 on a uniform grid, second order everywhere.
std::vector<double> half_square_derivative(std::span<const double> u, double h) {
  const std::size_t n = u.size();
  std::vector<double> out(n);
  auto w = [&](std::size_t i) { return 0.5 * u[i] * u[i]; };
  out[0] = (-3.0 * w(0) + 4.0 * w(1) - w(2)) / (2.0 * h);
  out[n - 1] = (3.0 * w(n - 1) - 4.0 * w(n - 2) + w(n - 3)) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (w(i + 1) - w(i - 1)) / (2.0 * h);
  return out;
}

template <class T>
std::vector<T> centred_derivative(std::span<const T> u, double h) {
  const std::size_t n = u.size();
  std::vector<T> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const T right = i + 1 < n ? u[i + 1] : T(0);
    const T left = i > 0 ? u[i - 1] : T(0);
    out[i] = (right - left) / (2.0 * h);
  }
  return out;
}

}  // namespace

std::string to_json(const FunctionalReport& r) {
  std::ostringstream s;
  s << "{\"mass\": " << format_double(r.mass) << ", \"hamiltonian\": " << format_double(r.hamiltonian)
    << ", \"momentum_P\": " << format_double(r.momentum_P)
    << ", \"momentum_K\": " << format_double(r.momentum_K)
    << ", \"pohozaev_residual\": " << format_double(r.pohozaev_residual)
    << ", \"energy_identity_residual\": " << format_double(r.energy_identity_residual) << "}";
  return s.str();
}

double mass(std::span<const double> u, double h) {
  require_grid(u.size(), "mass");
  return simpson(map_samples(u.size(), [&](std::size_t i) { return u[i] * u[i]; }), h);
}

double mass(std::span<const std::complex<double>> u, double h) {
  require_grid(u.size(), "mass");
  return simpson(map_samples(u.size(), [&](std::size_t i) { return std::norm(u[i]); }), h);
}

double hamiltonian(std::span<const double> u, std::span<const double> flux, double h, double p) {
  require_grid(u.size(), "hamiltonian");
  if (flux.size() != u.size()) throw InvalidInput("hamiltonian: derivative data missing or mismatched");
  const double disp = simpson(map_samples(u.size(), [&](std::size_t i) { return flux[i] * flux[i]; }), h);
  const double pot = simpson(map_samples(u.size(), [&](std::size_t i) { return std::pow(std::abs(u[i]), p); }), h);
  return 0.5 * disp - pot / p;
}

double hamiltonian(std::span<const double> u, double h, double p) {
  require_grid(u.size(), "hamiltonian");
  const auto flux = half_square_derivative(u, h);
  return hamiltonian(u, flux, h, p);
}

double hamiltonian(std::span<const std::complex<double>> u, double h, double p) {
  require_grid(u.size(), "hamiltonian");
  const auto du = centred_derivative(u, h);
  const double disp = simpson(map_samples(u.size(), [&](std::size_t i) { return std::norm(u[i] * du[i]); }), h);
  const double pot = simpson(map_samples(u.size(), [&](std::size_t i) { return std::pow(std::abs(u[i]), p); }), h);
  return 0.5 * disp - pot / p;
}

double momentum_P(std::span<const double> u, double h) {
  require_grid(u.size(), "momentum_P");
  return simpson(u, h);
}

double momentum_K(std::span<const double>, double) { return 0.0; }

double momentum_K(std::span<const std::complex<double>> u, double h) {
  require_grid(u.size(), "momentum_K");
  const auto du = centred_derivative(u, h);
  return simpson(map_samples(u.size(), [&](std::size_t i) { return std::imag(std::conj(u[i]) * du[i]); }), h);
}

double mass(const CompactonProfile& profile) { return mass(profile.phi, profile.spacing()); }

double hamiltonian(const CompactonProfile& profile) {
  const auto flux = profile.fluxes();
  return hamiltonian(profile.phi, flux, profile.spacing(), profile.params.p);
}

double momentum_P(const CompactonProfile& profile) { return momentum_P(profile.phi, profile.spacing()); }

double mass(const NlsProfile& q) { return mass(q.base); }

double hamiltonian(const NlsProfile& q) {
  // |Q Q'|^2 = (Phi Phi')^2 + v^2 (Phi^2 theta')^2 with Phi^2 theta' = -1/2.
  const auto& b = q.base;
  const auto flux = b.fluxes();
  const double twist = 0.25 * q.v * q.v;
  const double disp = simpson(map_samples(b.size(), [&](std::size_t i) { return flux[i] * flux[i] + twist; }), b.spacing());
  const double pot = simpson(map_samples(b.size(), [&](std::size_t i) { return std::pow(b.phi[i], b.params.p); }), b.spacing());
  return 0.5 * disp - pot / b.params.p;
}

double momentum_K(const NlsProfile& q) {
  const auto& b = q.base;
  return simpson(std::vector<double>(b.size(), -0.5 * q.v), b.spacing());
}

IdentityResiduals identity_residuals(const CompactonProfile& profile) {
  const auto& m = profile.params;
  const double h = profile.spacing();
  const auto flux = profile.fluxes();
  const double M = mass(profile);
  const double D = simpson(map_samples(profile.size(), [&](std::size_t i) { return flux[i] * flux[i]; }), h);
  const double Q = simpson(map_samples(profile.size(), [&](std::size_t i) { return std::pow(profile.phi[i], m.p); }), h);
  const double X = profile.half_width;
  const double H = 0.5 * D - Q / m.p;
  IdentityResiduals r{};
  r.energy = m.c * M + 2.0 * D - Q;
  r.pohozaev = -m.c * M + D + (2.0 / m.p) * Q - 4.0 * m.B * X;
  r.combined = H - (m.c * (m.p - 8.0) / (2.0 * m.p + 8.0) * M + (m.p - 4.0) / (m.p + 4.0) * 2.0 * m.B * X);
  r.scale = std::max({std::abs(m.c * M), D, Q, std::abs(4.0 * m.B * X), std::abs(H)});
  return r;
}

double pohozaev_residual(const CompactonProfile& profile) { return identity_residuals(profile).combined; }

FunctionalReport functional_report(const CompactonProfile& profile) {
  const auto ids = identity_residuals(profile);
  FunctionalReport r;
  r.mass = mass(profile);
  r.hamiltonian = hamiltonian(profile);
  r.momentum_P = momentum_P(profile);
  r.momentum_K = 0.0;
  r.pohozaev_residual = ids.combined;
  r.energy_identity_residual = ids.energy;
  return r;
}

// ---------------------------------------------------------------------------
// Family minimisation

FamilyValues family_values(double p, double B, double c) {
  const CompactonQuadrature q({p, 0.0, B, c});
  const auto I = q.integrals();
  return {I.mass, 0.5 * I.dispersion - I.potential / p, q.half_width()};
}

std::string to_json(const MinimizerResult& r) {
  std::ostringstream s;
  s << "{\"B_star\": " << format_double(r.B_star) << ", \"c_star\": " << format_double(r.c_star)
    << ", \"H_star\": " << format_double(r.H_star) << ", \"mass\": " << format_double(r.mass)
    << ", \"iterations\": " << r.iterations << "}";
  return s.str();
}

MinimizerResult minimize_in_family(double p, double m) {
  if (!(p > 2.0 && p < 8.0))
    throw InvalidInput("minimize_in_family: p must lie in (2, 8); for p >= 8 the infimum is not attained");
  if (!(m > 0.0) || !std::isfinite(m)) throw InvalidInput("minimize_in_family: mass must be positive");

  MinimizerResult out;
  if (p == 4.0) {
    const double k = std::numbers::sqrt2 * std::numbers::pi;
    out.B_star = 0.0;
    out.c_star = m / k;
    out.H_star = -m * m / (4.0 * k);
    out.mass = m;
    return out;
  }

  // Unit-mass pilot on the B = 0 branch, then the scaling law fixes c_max.
  const double M1 = family_values(p, 0.0, 1.0).mass;
  const double c_max = std::pow(m / M1, (p - 2.0) / (4.0 - 0.5 * p));

  auto B_of_c = [&](double c) {
    if (c >= c_max) return 0.0;
    auto f = [&](double B) { return family_values(p, B, c).mass - m; };
    if (f(0.0) >= 0.0) return 0.0;
    double hi = std::max(1e-3, c * c);
    for (int i = 0; i < 200 && f(hi) < 0.0; ++i) hi *= 4.0;
    if (f(hi) < 0.0) throw NumericalFailure("minimize_in_family: mass constraint not bracketed");
    return solve_bracketed(f, {}, 0.0, hi, 1e-14);
  };
  auto H_of_c = [&](double c) { return family_values(p, B_of_c(c), c).hamiltonian; };

  const auto best = golden_section(H_of_c, 1e-6 * c_max, c_max, 1e-9 * c_max);
  out.c_star = best.x;
  out.B_star = B_of_c(best.x);
  const auto fv = family_values(p, out.B_star, out.c_star);
  out.H_star = fv.hamiltonian;
  out.mass = fv.mass;
  out.iterations = best.iterations;
  if (std::abs(out.mass - m) > 1e-8 * m)
    throw NumericalFailure("minimize_in_family: mass constraint not met at the optimum");
  return out;
}

// ---------------------------------------------------------------------------
// Weinstein functional

double weinstein(std::span<const double> u, std::span<const double> flux, double h, double p) {
  require_grid(u.size(), "weinstein");
  if (flux.size() != u.size()) throw InvalidInput("weinstein: derivative data missing or mismatched");
  const double M = mass(u, h);
  if (!(M > 0.0)) throw InvalidInput("weinstein: zero field");
  const double D = simpson(map_samples(u.size(), [&](std::size_t i) { return flux[i] * flux[i]; }), h);
  if (!(D > 0.0)) throw InvalidInput("weinstein: field has no gradient");
  const double Q = simpson(map_samples(u.size(), [&](std::size_t i) { return std::pow(std::abs(u[i]), p); }), h);
  const double alpha = (p + 4.0) / 3.0;
  const double beta = (p - 2.0) / 3.0;
  return Q / (std::pow(std::sqrt(M), alpha) * std::pow(std::sqrt(D), beta));
}

double weinstein(std::span<const double> u, double h, double p) {
  require_grid(u.size(), "weinstein");
  const auto flux = half_square_derivative(u, h);
  return weinstein(u, flux, h, p);
}

// ---------------------------------------------------------------------------
// Polar representation

PolarFunctionals polar_functionals(std::span<const double> rho, std::span<const double> rho_x,
                                   std::span<const double> current, double h, double p) {
  require_grid(rho.size(), "polar_functionals");
  if (rho_x.size() != rho.size() || current.size() != rho.size())
    throw InvalidInput("polar_functionals: sample arrays differ in length");
  for (double r : rho)
    if (r < 0.0) throw InvalidInput("polar_functionals: negative density");
  PolarFunctionals out{};
  out.mass = simpson(rho, h);
  out.momentum_K = simpson(current, h);
  const double grad = simpson(map_samples(rho.size(), [&](std::size_t i) { return rho_x[i] * rho_x[i]; }), h);
  const double kin = simpson(map_samples(rho.size(), [&](std::size_t i) { return current[i] * current[i]; }), h);
  const double pot = simpson(map_samples(rho.size(), [&](std::size_t i) { return std::pow(rho[i], 0.5 * p); }), h);
  out.hamiltonian = grad / 8.0 + 0.5 * kin - pot / p;
  return out;
}

PolarFunctionals polar_functionals_theta(std::span<const double> rho, std::span<const double> rho_x,
                                         std::span<const double> theta_x, double h, double p) {
  if (theta_x.size() != rho.size()) throw InvalidInput("polar_functionals: sample arrays differ in length");
  std::vector<double> current(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] > 0.0 && !std::isfinite(theta_x[i]))
      throw InvalidInput("polar_functionals: theta_x must be finite where rho > 0");
    current[i] = rho[i] > 0.0 ? rho[i] * theta_x[i] : 0.0;
  }
  return polar_functionals(rho, rho_x, current, h, p);
}

Bump standard_bump() {
  auto raw = [](double y) { return std::abs(y) < 1.0 ? std::exp(-1.0 / (1.0 - y * y)) : 0.0; };
  const double norm = 1.0 / integrate_gl(raw, -1.0, 1.0, 64, 16);
  Bump b;
  b.value = [raw, norm](double y) { return norm * raw(y); };
  b.derivative = [raw, norm](double y) {
    if (std::abs(y) >= 1.0) return 0.0;
    const double q = 1.0 - y * y;
    return norm * raw(y) * (-2.0 * y / (q * q));
  };
  return b;
}

EscapingSequence escaping_sequence(double M0, double K0, double p, double R, double eps,
                                   const Bump& chi, std::size_t n) {
  if (!(R > 0.0) || !(eps > 0.0)) throw InvalidInput("escaping_sequence: R and eps must be positive");
  if (!chi.value || !chi.derivative) throw InvalidInput("escaping_sequence: bump needs value and derivative");
  if (n < 16) throw InvalidInput("escaping_sequence: need at least 16 samples");
  EscapingSequence out;
  out.M0 = M0;
  out.K0 = K0;
  out.R = R;
  out.epsilon = eps;
  out.ground = minimize_in_family(p, M0);

  const auto phi = build_compacton({p, 0.0, out.ground.B_star, out.ground.c_star}, n);
  if (!(10.0 * R - R > phi.half_width))
    throw InvalidInput("escaping_sequence: bump support overlaps the ground state (increase R)");
  {
    const auto flux = phi.fluxes();
    std::vector<double> rho(n), rho_x(n), zero(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      rho[i] = phi.phi[i] * phi.phi[i];
      rho_x[i] = 2.0 * flux[i];
    }
    out.phi = polar_functionals(rho, rho_x, zero, phi.spacing(), p);
  }
  {
    // Bump on its own grid over [10R - R, 10R + R], in the variable y = (x - 10R) / R.
    const double hy = 2.0 / static_cast<double>(n - 1);
    const double hx = R * hy;
    std::vector<double> rho(n), rho_x(n), current(n, K0 / (2.0 * R));
    for (std::size_t i = 0; i < n; ++i) {
      const double y = -1.0 + hy * static_cast<double>(i);
      rho[i] = eps * eps * chi.value(y);
      rho_x[i] = eps * eps * chi.derivative(y) / R;
    }
    out.bump = polar_functionals(rho, rho_x, current, hx, p);
  }
  out.total = {out.phi.mass + out.bump.mass, out.phi.momentum_K + out.bump.momentum_K,
               out.phi.hamiltonian + out.bump.hamiltonian};
  out.energy_excess = out.total.hamiltonian - out.phi.hamiltonian;

  const auto ids = identity_residuals(phi);
  out.report.mass = out.total.mass;
  out.report.hamiltonian = out.total.hamiltonian;
  // The bump phase is never materialised; P counts the real ground state only.
  out.report.momentum_P = momentum_P(phi);
  out.report.momentum_K = out.total.momentum_K;
  out.report.pohozaev_residual = ids.combined;
  out.report.energy_identity_residual = ids.energy;
  return out;
}

}  // namespace compacton

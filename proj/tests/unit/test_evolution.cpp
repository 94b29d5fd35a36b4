#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "compacton/error.hpp"
#include "compacton/evolution.hpp"
#include "compacton/functionals.hpp"
#include "compacton/periodic_grid.hpp"
#include "compacton/profiles.hpp"
#include "oracles.hpp"

using namespace compacton;
using cplx = std::complex<double>;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

// sum a_k cos(k x) + b_k sin(k x) with exact derivatives.
struct Trig {
  std::vector<double> a, b;
  double operator()(double x, int order = 0) const {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double kk = static_cast<double>(k);
      const double f = std::pow(kk, order);
      // d^m cos(kx) = k^m cos(kx + m pi/2)
      s += f * (a[k] * std::cos(kk * x + order * pi / 2) + b[k] * std::sin(kk * x + order * pi / 2));
    }
    return s;
  }
};

const Trig kU{{0.3, 0.0, 0.1, 0.05}, {0.0, 0.2, -0.1, 0.0}};
const Trig kRho{{1.0, 0.2, 0.0, 0.05}, {0.0, 0.1, 0.1, 0.0}};

}  // namespace

TEST_CASE("periodic grid") {
  CHECK_THROWS_AS(PeriodicGrid(1.0, 100), InvalidInput);
  CHECK_THROWS_AS(PeriodicGrid(1.0, 2), InvalidInput);
  const PeriodicGrid g(2 * pi, 64);
  CHECK(g.xs().front() == doctest::Approx(-pi));
  CHECK(g.dx() == doctest::Approx(2 * pi / 64));
  std::vector<double> s(64), c(64, 2.5);
  for (std::size_t i = 0; i < 64; ++i) s[i] = std::sin(3 * g.xs()[i]);
  const auto ds = g.derivative(s);
  for (std::size_t i = 0; i < 64; ++i) CHECK(ds[i] == doctest::Approx(3 * std::cos(3 * g.xs()[i])).epsilon(1e-12).scale(1));
  for (double v : g.derivative(c)) CHECK(std::abs(v) < 1e-13);
  CHECK_THROWS(regularized_derivative(std::vector<double>(100, 0.0), g, 0.0));
}

TEST_CASE("regularized multiplier: k = 10, nu = 1e-4 halves the amplitude") {
  const PeriodicGrid g(2 * pi, 256);
  std::vector<double> s(256);
  for (std::size_t i = 0; i < 256; ++i) s[i] = std::sin(10 * g.xs()[i]);
  const auto d = regularized_derivative(s, g, 1e-4);
  for (std::size_t i = 0; i < 256; ++i) CHECK(d[i] == doctest::Approx(5 * std::cos(10 * g.xs()[i])).epsilon(1e-12).scale(1));
}

TEST_CASE("dkdv_rhs against exact derivatives (nu = 0)") {
  const PeriodicGrid g(2 * pi, 128);
  std::vector<double> u(128);
  for (std::size_t i = 0; i < 128; ++i) u[i] = kU(g.xs()[i]);
  const auto r = dkdv_rhs(u, g, 4.0, 0.0);
  for (std::size_t i = 0; i < 128; ++i) {
    const double x = g.xs()[i];
    const double u0 = kU(x), u1 = kU(x, 1), u2 = kU(x, 2), u3 = kU(x, 3);
    const double gp = u1 * u1 + u0 * u2, gpp = 3 * u1 * u2 + u0 * u3;
    const double ref = -(u1 * gp + u0 * gpp + 3 * u0 * u0 * u1);
    CHECK(r[i] == doctest::Approx(ref).epsilon(1e-10).scale(1));
  }
  // Same field through a nested difference oracle.
  const auto flux = [](double x) {
    const auto uux = [](double y) { return kU(y) * kU(y, 1); };
    return kU(x) * oracle::d8(uux, x) + std::pow(kU(x), 3);
  };
  for (std::size_t i = 0; i < 128; i += 9) CHECK(r[i] == doctest::Approx(-oracle::d8(flux, g.xs()[i])).epsilon(1e-6).scale(1));
  std::vector<double> c(128, 0.7);
  for (double v : dkdv_rhs(c, g)) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("dkdv_rhs on the compacton is the translation -phi'") {
  // The edge kink defeats the unregularized spectral derivative, so compare
  // on the inner half of the support and let the regularization vanish.
  const PeriodicGrid g(40, 2048);
  const auto s = initial_condition(InitialKind::Compacton, {}, g);
  auto interior_error = [&](double nu) {
    const auto r = dkdv_rhs(s.u, g, 4.0, nu);
    double worst = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.xs()[i];
      if (std::abs(x) > 0.5 * pi / sqrt2) continue;
      worst = std::max(worst, std::abs(r[i] - std::sin(x / sqrt2)));  // -phi' = sin(x / sqrt2)
    }
    return worst;
  };
  const double e4 = interior_error(1e-4), e5 = interior_error(1e-5);
  CHECK(e5 < 1e-3);
  CHECK(e5 < 0.1 * e4);
}

TEST_CASE("dnls_rhs") {
  const std::size_t n = 256;
  const PeriodicGrid g(2 * pi, n);
  const double h = g.dx();
  CHECK(oracle::max_abs([&] {
          std::vector<double> out;
          for (auto z : dnls_rhs(std::vector<cplx>(n, 0.0), g)) out.push_back(std::abs(z));
          return out;
        }()) == 0.0);
  // Plane wave: i a^3 (1 - 2k^2) e^{ikx} up to the three-point symbol.
  const double a = 0.7;
  for (int k : {1, 3}) {
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::polar(a, k * g.xs()[i]);
    const auto r = dnls_rhs(v, g);
    const double sym_err = std::abs((std::cos(2 * k * h) - 1) / (h * h) + 2 * k * k) * a * a * a;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx ref = cplx(0, 1) * a * a * a * (1.0 - 2.0 * k * k) * std::polar(1.0, k * g.xs()[i]);
      CHECK(std::abs(r[i] - ref) <= sym_err + 1e-12);
    }
  }
  // Random smooth field against the brute-force stencil.
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = cplx(kU(g.xs()[i]), kRho(g.xs()[i]));
  const auto r = dnls_rhs(v, g);
  for (std::size_t i = 0; i < n; ++i) {
    const auto sq = [&](std::size_t j) { return v[(j + n) % n] * v[(j + n) % n]; };
    const cplx vvx_x = 0.5 * (sq(i + 1) - 2.0 * sq(i) + sq(i - 1)) / (h * h);
    const cplx ref = cplx(0, 1) * (std::norm(v[i]) * v[i] + std::conj(v[i]) * vvx_x);
    CHECK(std::abs(r[i] - ref) < 1e-10);
  }
  // Stationary periodic profile rotates at rate c.
  InitialParams ip;
  ip.B = -0.2;
  const PeriodicGrid gp(sqrt2 * pi, 1024);
  const auto s = initial_condition(InitialKind::Periodic, ip, gp);
  const auto rs = dnls_rhs(s.v, gp);
  for (std::size_t i = 0; i < gp.size(); ++i) CHECK(std::abs(rs[i] - cplx(0, 1) * s.v[i]) < 1e-4);
}

TEST_CASE("hydro_rhs against exact derivatives (nu = 0)") {
  const PeriodicGrid g(2 * pi, 128);
  std::vector<double> rho(128), u(128);
  for (std::size_t i = 0; i < 128; ++i) {
    rho[i] = kRho(g.xs()[i]);
    u[i] = kU(g.xs()[i]);
  }
  const auto [a, b] = hydro_rhs(rho, u, g, 0.0);
  for (std::size_t i = 0; i < 128; ++i) {
    const double x = g.xs()[i];
    CHECK(a[i] == doctest::Approx(-(kRho(x, 1) * kU(x) + kRho(x) * kU(x, 1))).epsilon(1e-10).scale(1));
    CHECK(b[i] == doctest::Approx(-3 * kU(x) * kU(x, 1) + kRho(x) * (kRho(x, 3) + 2 * kRho(x, 1))).epsilon(1e-10).scale(1));
  }
  // Constant state and the stationary cosine.
  const auto [c1, c2] = hydro_rhs(std::vector<double>(128, 2.0), std::vector<double>(128, 0.5), g, 1e-4);
  CHECK(oracle::max_abs(c1) < 1e-12);
  CHECK(oracle::max_abs(c2) < 1e-12);
  const PeriodicGrid gc(4 * sqrt2 * pi, 256);
  std::vector<double> rc(256), zero(256, 0.0);
  for (std::size_t i = 0; i < 256; ++i) rc[i] = 1 + 0.5 * std::cos(sqrt2 * gc.xs()[i]);
  const auto [s1, s2] = hydro_rhs(rc, zero, gc, 0.0);
  CHECK(oracle::max_abs(s1) < 1e-12);
  CHECK(oracle::max_abs(s2) < 1e-9);  // roundoff times k_max^3 from the third derivative
  // Gaussian with u = 1: continuity component is -rho_x.
  InitialParams ip;
  const PeriodicGrid gg(40, 1024);
  const auto s = initial_condition(InitialKind::Gaussian, ip, gg);
  const auto [ga, gb] = hydro_rhs(s.rho, s.u, gg, 0.0);
  (void)gb;
  for (std::size_t i = 0; i < gg.size(); i += 7) {
    const double x = gg.xs()[i];
    CHECK(ga[i] == doctest::Approx(x / 2 * std::exp(-x * x / 4)).epsilon(1e-10).scale(1));
  }
}

TEST_CASE("initial conditions") {
  const PeriodicGrid g(40, 2048);
  const auto a = initial_condition(InitialKind::Compacton, {}, g);
  CHECK(oracle::max_abs(a.u) == doctest::Approx(sqrt2).epsilon(1e-5));
  CHECK(a.u[1024] == doctest::Approx(sqrt2));  // x = 0 is a grid point
  InitialParams off;
  off.x0 = 3.0;
  const auto b = initial_condition(InitialKind::PerturbedCompacton, off, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double y = g.xs()[i] - 3.0;
    const double phi = oracle::p4_phi(0, 1, y);
    CHECK(b.u[i] == doctest::Approx(phi * (1 + 0.01 * y * y * std::pow(phi, 3))).epsilon(1e-12));
  }
  InitialParams per;
  per.B = -0.2;
  const auto c = initial_condition(InitialKind::Periodic, per, PeriodicGrid(sqrt2 * pi, 512));
  double mn = 1e9;
  for (auto z : c.v) mn = std::min(mn, std::abs(z));
  CHECK(mn == doctest::Approx(std::sqrt(1 - std::sqrt(0.2))).epsilon(1e-4));
  InitialParams far;
  far.x0 = 18.5;
  CHECK_THROWS_AS(initial_condition(InitialKind::Compacton, far, g), InvalidInput);
  const auto d = initial_condition(InitialKind::Gaussian, {}, g);
  for (double v : d.u) CHECK(v == 1.0);
}

TEST_CASE("diagnostics") {
  const PeriodicGrid g(40, 2048);
  FieldState z;
  z.kind = Model::DKdV;
  z.u.assign(2048, 0.0);
  const auto d0 = diagnostics(z, g);
  CHECK(d0.mass == 0.0);
  CHECK(d0.hamiltonian == 0.0);
  CHECK(d0.momentum == 0.0);

  const PeriodicGrid fine(40, 65536);
  const auto s = initial_condition(InitialKind::Compacton, {}, fine);
  const auto d = diagnostics(s, fine);
  const auto prof = build_compacton({4, 0, 0, 1}, 4097);
  CHECK(d.mass == doctest::Approx(mass(prof)).epsilon(1e-8));
  CHECK(d.momentum == doctest::Approx(momentum_P(prof)).epsilon(1e-8));
  // The spectral u_x is Gibbs-limited at the support edge.
  CHECK(d.hamiltonian == doctest::Approx(hamiltonian(prof)).epsilon(1e-4));

  // Smooth periodic state: H = int (u u_x)^2 / 2 - u^4 / 4.
  FieldState w;
  w.kind = Model::DKdV;
  const PeriodicGrid gw(2 * pi, 256);
  for (double x : gw.xs()) w.u.push_back(1 + 0.5 * std::sin(x));
  const double H_exact = oracle::adaptive_simpson(
      [](double x) {
        const double u = 1 + 0.5 * std::sin(x), ux = 0.5 * std::cos(x);
        return 0.5 * u * u * ux * ux - std::pow(u, 4) / 4;
      },
      -pi, pi);
  CHECK(diagnostics(w, gw).hamiltonian == doctest::Approx(H_exact).epsilon(1e-11));

  // Hydro: M = int rho, K = int rho theta_x = int u / 2 over the non-vacuum region.
  FieldState h;
  h.kind = Model::Hydro;
  h.rho.resize(2048);
  h.u.resize(2048);
  for (std::size_t i = 0; i < 2048; ++i) {
    const double x = g.xs()[i];
    h.rho[i] = std::exp(-x * x / 4);
    h.u[i] = 1.0;
  }
  const auto dh = diagnostics(h, g);
  CHECK(dh.mass == doctest::Approx(2 * std::sqrt(pi)).epsilon(1e-10));
  double support = 0;
  for (double r : h.rho)
    if (r > kVacuumThreshold) support += g.dx();
  CHECK(dh.momentum == doctest::Approx(0.5 * support).epsilon(5e-3));
}

TEST_CASE("short evolutions") {
  SUBCASE("dkdv compacton moves right") {
    const PeriodicGrid g(40, 1024);
    EvolutionConfig cfg;
    cfg.times = {0.0, 0.2};
    const auto r = evolve(initial_condition(InitialKind::Compacton, {}, g), g, cfg);
    REQUIRE(r.snapshots.size() == 2);
    double m0 = 0, m1 = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      m0 += g.xs()[i] * r.snapshots[0].u[i] * r.snapshots[0].u[i];
      m1 += g.xs()[i] * r.snapshots[1].u[i] * r.snapshots[1].u[i];
    }
    CHECK((m1 - m0) / r.series[0].mass * g.dx() == doctest::Approx(0.2).epsilon(0.05));
  }
  SUBCASE("zero hydro vacuum stays put") {
    const PeriodicGrid g(40, 256);
    FieldState s;
    s.kind = Model::Hydro;
    s.rho.assign(256, 1.0);
    s.u.assign(256, 0.0);
    EvolutionConfig cfg;
    cfg.times = {0.5};
    const auto r = evolve(s, g, cfg);
    CHECK(oracle::max_abs(r.snapshots[0].u) < 1e-12);
    CHECK(r.rho_floor_incidents == 0);
  }
  SUBCASE("bad configuration") {
    const PeriodicGrid g(40, 256);
    EvolutionConfig cfg;
    CHECK_THROWS_AS(evolve(initial_condition(InitialKind::Gaussian, {}, g), g, cfg), InvalidInput);
    cfg.times = {1.0};
    cfg.nu = -1;
    CHECK_THROWS_AS(evolve(initial_condition(InitialKind::Gaussian, {}, g), g, cfg), InvalidInput);
  }
}

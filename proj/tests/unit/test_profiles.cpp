#include <doctest.h>

#include <cmath>
#include <numbers>

#include "compacton/error.hpp"
#include "compacton/profiles.hpp"
#include "oracles.hpp"

using namespace compacton;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

double interior_residual(const CompactonProfile& prof) {
  const auto& m = prof.params;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < prof.size(); ++i) {
    const double r = prof.dphi[i] * prof.dphi[i] - oracle::F(prof.phi[i], m.p, m.A, m.B, m.c);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace

TEST_CASE("first_integral matches direct substitution") {
  CHECK(first_integral(1.0, {4, 0, 0, 1}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(first_integral(sqrt2, {4, 0, 0, 1})) < 1e-15);
  double prev = 0.0;
  for (double s = 1e-1; s > 1e-6; s /= 10) {
    const double f = first_integral(s, {4, 0, 0.25, 1});
    CHECK(f > prev);
    prev = f;
  }
  CHECK_THROWS_AS(first_integral(0.0, {4, 0, 0.25, 1}), InvalidInput);
  CHECK(first_integral(0.0, {4, 0, 0, 1}) == doctest::Approx(1.0));
}

TEST_CASE("stationary_point") {
  CHECK(*stationary_point(0, 1, 4) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*stationary_point(1, 0, 4) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(stationary_point(0, -1, 4).has_value());
}

TEST_CASE("classify") {
  CHECK(classify({4, 0, -0.2, 1}).tag == SolutionKind::Periodic);
  const auto a = classify({4, 0, 0.25, 1});
  CHECK(a.tag == SolutionKind::Compacton);
  CHECK(*a.edge_case == EdgeCase::A_zero_B_pos);
  const auto b = classify({4, 0, 0, 1});
  CHECK(*b.edge_case == EdgeCase::A_B_zero_c_pos);
  CHECK(*classify({4, 1, 0, 1}).edge_case == EdgeCase::B_zero_A_pos);
  CHECK(*classify({4, 0.3, 0.25, 1}).edge_case == EdgeCase::B_pos_A_nonzero);
  CHECK_FALSE(classify({4, 0, -0.2, 1}).edge_case.has_value());
  CHECK_THROWS_AS(classify({2, 0, 0.5, 0}), InvalidInput);
  CHECK_THROWS_AS(classify({4, 0, 0, -1}), InvalidInput);
}

TEST_CASE("support_half_width") {
  CHECK(support_half_width({4, 0, 0, 1}) == doctest::Approx(pi / sqrt2).epsilon(1e-12));
  CHECK(support_half_width({4, 0, 0.25, 0}) == doctest::Approx(pi / (2 * sqrt2)).epsilon(1e-12));
  CHECK(support_half_width({2, 0, 0.5, 0}) == doctest::Approx(1.0).epsilon(1e-12));
  // General p against an independent quadrature of dx = ds / sqrt(F).
  const double p = 3, B = 0.25, c = 1;
  const double top = oracle::peak(p, 0, B, c);
  // s = top - u^2 removes the square-root singularity at the peak.
  // Near u = 0, G(s) ~ -G'(top) u^2, so the integrand tends to 2 top / sqrt(-G'(top)).
  const double dG_top = 2 * c * top - 2 * std::pow(top, p - 1);
  const double limit = 2 * top / std::sqrt(-dG_top);
  const double X = oracle::adaptive_simpson(
      [&](double u) {
        const double s = top - u * u;
        const double g = oracle::G(s, p, 0, B, c);
        return u < 1e-6 || g <= 0 ? limit : 2.0 * u * s / std::sqrt(g);
      },
      0.0, std::sqrt(top), 1e-14);
  CHECK(support_half_width({p, 0, B, c}) == doctest::Approx(X).epsilon(1e-9));
  CHECK_THROWS_AS(support_half_width({4, 0, -0.2, 1}), InvalidInput);
}

TEST_CASE("build_compacton closed forms") {
  const auto a = build_compacton({4, 0, 0, 1}, 2049);
  CHECK(a.closed_form);
  CHECK(a.phi[1024] == doctest::Approx(sqrt2).epsilon(1e-14));
  const auto b = build_compacton({4, 0, 0.25, 1}, 2049);
  CHECK(b.phi[1024] == doctest::Approx(std::sqrt(1 + sqrt2)).epsilon(1e-14));
  for (std::size_t i = 0; i < b.size(); ++i)
    CHECK(b.phi[i] == doctest::Approx(oracle::p4_phi(0.25, 1, b.xs[i])).epsilon(1e-13));
  CHECK(b.phi.front() == 0.0);
  CHECK(b.phi.back() == 0.0);
  const auto c = build_compacton({2, 0, 0.5, 0}, 1025);
  for (std::size_t i = 0; i < c.size(); ++i)
    CHECK(c.phi[i] == doctest::Approx(std::sqrt(std::max(0.0, 1.0 - c.xs[i] * c.xs[i]))).epsilon(1e-12));
  CHECK_THROWS_AS(build_compacton({4, 0, 0, -1}, 64), InvalidInput);
  CHECK_THROWS_AS(build_compacton({4, 0, 0, 1}, 8), InvalidInput);
}

TEST_CASE("profile invariants") {
  for (ModelParams mp : {ModelParams{4, 0, 0, 1}, ModelParams{4, 0, 0.25, 1}, ModelParams{4, 0, 0.25, -1},
                         ModelParams{3, 0, 0.25, 1}, ModelParams{5, 0, 0.1, 0.5}}) {
    CAPTURE(mp.p);
    CAPTURE(mp.c);
    const auto prof = build_compacton(mp, 4096);
    CHECK(interior_residual(prof) < 1e-8);
    const std::size_t n = prof.size();
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(prof.phi[i] - prof.phi[n - 1 - i]) < 1e-12);
    for (std::size_t i = n / 2; i + 1 < n; ++i) CHECK(prof.phi[i + 1] <= prof.phi[i]);
    for (std::size_t i = 1; i + 1 < n; ++i) CHECK(prof.phi[i] > 0.0);
    // (phi phi')^2 -> 2B at the endpoints, extrapolated from the last interior samples.
    const double f1 = prof.flux(n - 2), f2 = prof.flux(n - 3);
    const double edge = 2 * f1 * f1 - f2 * f2;
    CHECK(std::abs(edge - 2 * mp.B) < 1e-3);
    CHECK(std::abs(prof.flux(n - 1) * prof.flux(n - 1) - 2 * mp.B) < 1e-12);
  }
}

TEST_CASE("quadrature builder matches independent shooting") {
  const double p = 3, B = 0.25, c = 1;
  const auto prof = build_compacton_quadrature({p, 0, B, c}, 2049);
  std::vector<double> xs;
  std::vector<double> ref_phi;
  for (std::size_t i = 1024; i < prof.size(); i += 64)
    if (prof.xs[i] < 0.8 * prof.half_width) {
      xs.push_back(prof.xs[i]);
      ref_phi.push_back(prof.phi[i]);
    }
  const auto shot = oracle::shoot_profile(p, 0, B, c, xs);
  for (std::size_t k = 0; k < xs.size(); ++k) CHECK(shot[k] == doctest::Approx(ref_phi[k]).epsilon(1e-8));
}

TEST_CASE("closed form vs quadrature for p = 4") {
  for (double B : {0.0, 0.25, 1.0})
    for (double c : {-1.0, 1.0}) {
      if (B == 0 && c < 0) continue;
      const auto a = build_compacton({4, 0, B, c}, 1025);
      const auto b = build_compacton_quadrature({4, 0, B, c}, 1025);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a.phi[i] - b.phi[i]) < 1e-6);
    }
}

TEST_CASE("build_periodic") {
  const auto per = build_periodic({4, 0, -0.2, 1}, 1024);
  CHECK(per.max_value == doctest::Approx(std::sqrt(1 + std::sqrt(0.2))).epsilon(1e-12));
  CHECK(per.min_value == doctest::Approx(std::sqrt(1 - std::sqrt(0.2))).epsilon(1e-12));
  CHECK(per.period == doctest::Approx(sqrt2 * pi).epsilon(1e-12));
  const auto near = build_periodic({4, 0, -1e-8, 1}, 256);
  CHECK(near.min_value < 1e-3);
  CHECK(near.period == doctest::Approx(2 * pi / sqrt2).epsilon(1e-6));
  CHECK_THROWS_AS(build_periodic({4, 0, 0.25, 1}, 64), InvalidInput);
  // General p: residual of the first integral.
  const auto p3 = build_periodic({3, 0, -0.05, 1}, 512);
  for (std::size_t i = 0; i < p3.xs.size(); ++i) {
    CHECK(p3.phi[i] > 0.0);
    CHECK(std::abs(p3.dphi[i] * p3.dphi[i] - oracle::F(p3.phi[i], 3, 0, -0.05, 1)) < 1e-8);
  }
}

TEST_CASE("edge_expansion") {
  CHECK(edge_expansion({4, 0, 0, 1}, 1)[0].coefficient == doctest::Approx(1.0));
  CHECK(edge_expansion({4, 0, 0.25, 1}, 1)[0].coefficient == doctest::Approx(std::sqrt(2 * std::sqrt(0.5))));
  const auto e = edge_expansion({4, 1, 0, 1}, 2);
  CHECK(e[0].coefficient == doctest::Approx(std::pow(3.0, 2.0 / 3) / std::pow(2.0, 1.0 / 3)));
  CHECK(e[0].exponent == doctest::Approx(2.0 / 3));
  // Two-term expansion against the built profile near the left edge.
  const ModelParams mp{4, 0, 0.25, 1};
  const auto terms = edge_expansion(mp, 2);
  const double X = support_half_width(mp);
  for (double d : {1e-3, 2e-3}) {
    double approx = 0.0;
    for (const auto& t : terms) approx += t.coefficient * std::pow(d, t.exponent);
    CHECK(std::abs(approx - compacton_value(mp, -X + d)) < 5 * std::pow(d, 2.5) + 1e-12);
  }
  CHECK_THROWS_AS(edge_expansion({4, 0, -0.2, 1}, 1), InvalidInput);
}

TEST_CASE("assemble_multi") {
  std::vector<double> grid;
  for (int i = 0; i <= 4000; ++i) grid.push_back(-20 + 0.01 * i);
  const ModelParams mp{4, 0, 0, 1};
  const auto two = assemble_multi({{{1, -10, mp}, {1, 10, mp}}}, grid);
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) m += 0.005 * (two[i] * two[i] + two[i + 1] * two[i + 1]);
  CHECK(m == doctest::Approx(2 * sqrt2 * pi).epsilon(1e-4));
  const auto neg = assemble_multi({{{-1, 0, mp}}}, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(neg[i] == -compacton_value(mp, grid[i]));
  CHECK_THROWS_AS(assemble_multi({{{1, 0, mp}, {1, 1, mp}}}, grid), InvalidInput);
}

TEST_CASE("weak_residual") {
  const TestFunction gauss{[](double x) { return std::exp(-x * x); },
                           [](double x) { return -2 * x * std::exp(-x * x); },
                           [](double x) { return (4 * x * x - 2) * std::exp(-x * x); }};
  CHECK(std::abs(weak_residual(build_compacton({4, 0, 0.25, 1}, 4096), gauss)) < 1e-6);
  CHECK(std::abs(weak_residual(build_compacton({4, 0, 0, 1}, 4096), gauss)) < 1e-6);
  // psi = 1 at the left edge, 0 at the right edge.
  const ModelParams mp{4, 0.3, 0.25, 1};
  const auto prof = build_compacton_quadrature(mp, 8192);
  const double X = prof.half_width;
  const TestFunction ramp{[X](double x) { return 0.5 * (1 - std::sin(pi * x / (2 * X))); },
                          [X](double x) { return -0.25 * pi / X * std::cos(pi * x / (2 * X)); },
                          [X](double x) { return 0.125 * pi * pi / (X * X) * std::sin(pi * x / (2 * X)); }};
  CHECK(weak_residual(prof, ramp) == doctest::Approx(0.3).epsilon(1e-4));
}

TEST_CASE("nls_phase and build_nls_compacton") {
  const auto base = build_compacton({4, 0, 0.25, 1}, 4097);
  const auto ph = nls_phase(base);
  CHECK(ph.theta[2048] == 0.0);
  for (std::size_t i = 1; i + 1 < base.size(); ++i) CHECK(std::abs(ph.theta[i] + ph.theta[base.size() - 1 - i]) < 1e-12);
  CHECK(ph.kind == PhaseAsymptotic::Logarithmic);
  const auto q0 = build_nls_compacton({4, 0, 0.25, 1}, 0.0, 257);
  for (std::size_t i = 0; i < q0.re.size(); ++i) {
    CHECK(q0.im[i] == 0.0);
    CHECK(q0.re[i] == q0.base.phi[i]);
  }
  const auto q = build_nls_compacton({4, 0, 0.25, 1}, 1.0, 1025);
  for (std::size_t i = 0; i < q.re.size(); ++i)
    CHECK(std::hypot(q.re[i], q.im[i]) == doctest::Approx(q.base.phi[i]).epsilon(1e-14));
  // theta' * 2 Phi^2 = -1 in the interior, by centred differences.
  const double h = base.spacing();
  for (std::size_t i = 512; i < 3584; i += 256) {
    const double d = (ph.theta[i + 1] - ph.theta[i - 1]) / (2 * h);
    CHECK(d * 2 * base.phi[i] * base.phi[i] == doctest::Approx(-1.0).epsilon(1e-5));
  }
}

TEST_CASE("scale_params") {
  const ModelParams mp{4, 0, 0.25, 1};
  const auto s1 = scale_params(mp, 1.0);
  CHECK(s1.B == mp.B);
  CHECK(s1.c == mp.c);
  const auto s2 = scale_params(mp, 2.0);
  CHECK(s2.B == doctest::Approx(4.0));
  CHECK(s2.c == doctest::Approx(4.0));
  CHECK(build_compacton(s2, 1025).phi[512] == doctest::Approx(2 * std::sqrt(1 + sqrt2)).epsilon(1e-12));
  for (double lambda : {0.5, 0.8, 1.7}) {
    const auto sp = scale_params(mp, lambda);
    const double mu = std::pow(lambda, mp.p / 2 - 2);
    for (double x : {0.0, 0.3, 0.9})
      CHECK(lambda * compacton_value(mp, mu * x) == doctest::Approx(compacton_value(sp, x)).epsilon(1e-12));
  }
}

// One PASS/FAIL line per acceptance criterion. Each criterion is a
// conjunction of checks; failing checks are listed after the verdict.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bumps.hpp"
#include "compacton/evolution.hpp"
#include "compacton/functionals.hpp"
#include "compacton/linearized_flow.hpp"
#include "compacton/periodic_grid.hpp"
#include "compacton/profiles.hpp"
#include "compacton/spectral.hpp"
#include "oracles.hpp"

using namespace compacton;
using std::numbers::pi;
using std::numbers::sqrt2;
using Clock = std::chrono::steady_clock;

namespace {

class Criterion {
public:
  Criterion(int id, std::string title) : id_(id), title_(std::move(title)), start_(Clock::now()) {}

  void check(bool ok, const std::string& what, double value, double bound) {
    std::ostringstream s;
    s << what << " = " << value << " (bound " << bound << ")";
    (ok ? passed_ : failed_).push_back(s.str());
  }
  void check(bool ok, const std::string& what) { (ok ? passed_ : failed_).push_back(what); }
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  bool report() const {
    const bool ok = failed_.empty();
    std::printf("[%s] %2d %s (%zu/%zu checks, %.1f s)\n", ok ? "PASS" : "FAIL", id_, title_.c_str(), passed_.size(),
                passed_.size() + failed_.size(), elapsed());
    for (const auto& f : failed_) std::printf("         failed: %s\n", f.c_str());
    std::fflush(stdout);
    return ok;
  }

private:
  int id_;
  std::string title_;
  Clock::time_point start_;
  std::vector<std::string> passed_, failed_;
};

std::string label(const ModelParams& m) {
  std::ostringstream s;
  s << "(p=" << m.p << ",B=" << m.B << ",c=" << m.c << ")";
  return s.str();
}

double rel_drift(const std::vector<DiagnosticsRow>& series, double DiagnosticsRow::*field) {
  const double v0 = series.front().*field;
  double worst = 0;
  for (const auto& r : series) worst = std::max(worst, std::abs(r.*field - v0) / std::abs(v0));
  return worst;
}

// ---------------------------------------------------------------------------

bool criterion_1() {
  Criterion cr(1, "profile correctness");
  const ModelParams cases[] = {{4, 0, 0, 1}, {4, 0, 0.25, 1}, {4, 0, 0.25, 0}, {4, 0, 0.25, -1}, {2, 0, 0.5, 0}, {3, 0, 0.25, 1}};
  for (const auto& mp : cases) {
    const auto prof = build_compacton(mp, 4096);
    double worst = 0;
    for (std::size_t i = 1; i + 1 < prof.size(); ++i)
      worst = std::max(worst, std::abs(prof.dphi[i] * prof.dphi[i] - oracle::F(prof.phi[i], mp.p, mp.A, mp.B, mp.c)));
    const double bound = prof.closed_form ? 1e-8 : 1e-6;
    cr.check(worst < bound, "residual " + label(mp), worst, bound);
  }
  cr.check(cr.elapsed() < 1.0, "runtime", cr.elapsed(), 1.0);
  return cr.report();
}

bool criterion_2() {
  Criterion cr(2, "closed form vs quadrature (p = 4)");
  for (auto [B, c] : {std::pair{0.0, 1.0}, {0.25, 1.0}, {0.25, 0.0}, {0.25, -1.0}, {1.0, 2.0}}) {
    const auto prof = build_compacton_quadrature({4, 0, B, c}, 4096);
    double worst = 0;
    for (std::size_t i = 0; i < prof.size(); ++i)
      worst = std::max(worst, std::abs(prof.phi[i] - oracle::p4_phi(B, c, prof.xs[i])));
    cr.check(worst < 1e-6, "max deviation " + label({4, 0, B, c}), worst, 1e-6);
  }
  return cr.report();
}

bool criterion_3() {
  Criterion cr(3, "energy and Pohozaev identities");
  for (ModelParams mp : {ModelParams{4, 0, 0, 1}, ModelParams{4, 0, 0.25, 1}, ModelParams{4, 0, 0.25, 0},
                         ModelParams{4, 0, 0.25, -1}, ModelParams{2, 0, 0.5, 0}}) {
    const auto r = identity_residuals(build_compacton(mp, 4096));
    for (auto [name, v] : {std::pair{"energy", r.energy}, {"pohozaev", r.pohozaev}, {"combined", r.combined}}) {
      const double rel = std::abs(v) / r.scale;
      cr.check(rel < 1e-8, std::string(name) + " residual " + label(mp), rel, 1e-8);
    }
  }
  for (auto [B, c] : {std::pair{0.0, 1.0}, {0.0, 2.0}, {0.25, 1.0}, {0.25, -1.0}, {1.0, 0.5}, {1.0, -1.0}}) {
    const auto prof = build_compacton({4, 0, B, c}, 4096);
    const double M = mass(prof), H = hamiltonian(prof);
    const double rel = std::abs(H + c / 4 * M) / std::abs(M);
    cr.check(rel < 1e-8, "H + (c/4)M " + label({4, 0, B, c}), rel, 1e-8);
  }
  return cr.report();
}

// Brute-force scan of H over (B, c), each point rescaled to the target mass
// along lambda Phi(lambda^(p/2-2) x): M ~ lambda^(4-p/2), H ~ lambda^(p/2+2).
double grid_scan_minimum(double p, double m) {
  double b_lo = 0, b_hi = 1, c_lo = -1, c_hi = 1;
  double best = 1e300, best_b = 0, best_c = 0;
  for (int level = 0; level < 3; ++level) {
    const int N = 200;
    const double db = (b_hi - b_lo) / (N - 1), dc = (c_hi - c_lo) / (N - 1);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const double B = b_lo + i * db, c = c_lo + j * dc;
        if (B < 0 || (B == 0 && c <= 0)) continue;
        FamilyValues fv{};
        try {
          fv = family_values(p, B, c);
        } catch (const std::exception&) {
          continue;
        }
        const double lambda = std::pow(m / fv.mass, 1.0 / (4 - p / 2));
        const double H = fv.hamiltonian * std::pow(lambda, p / 2 + 2);
        if (H < best) {
          best = H;
          best_b = B;
          best_c = c;
        }
      }
    b_lo = std::max(0.0, best_b - 2 * db);
    b_hi = best_b + 2 * db;
    c_lo = best_c - 2 * dc;
    c_hi = best_c + 2 * dc;
  }
  return best;
}

bool criterion_4() {
  Criterion cr(4, "fixed-mass minimization");
  const double k = sqrt2 * pi;
  for (double m : {1.0, k, 7.5}) {
    const auto r = minimize_in_family(4, m);
    cr.check(r.B_star <= 1e-10, "B* (m=" + std::to_string(m) + ")", r.B_star, 1e-10);
    cr.check(std::abs(r.c_star - m / k) <= 1e-12, "|c* - m/(sqrt2 pi)|", std::abs(r.c_star - m / k), 1e-12);
    const double H = -m * m / (4 * k);
    cr.check(std::abs(r.H_star - H) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(H), "H* closed form",
             std::abs(r.H_star - H), 0.0);
  }
  const double scan = grid_scan_minimum(3, 1);
  const double got = minimize_in_family(3, 1).H_star;
  cr.check(std::abs(got - scan) <= 1e-4, "p=3 |H* - grid scan|", std::abs(got - scan), 1e-4);
  for (double p : {3.0, 4.0, 5.0}) {
    const double I1 = minimize_in_family(p, 1).H_star;
    for (double m : {0.5, 3.0}) {
      const double Im = minimize_in_family(p, m).H_star;
      const double rel = std::abs(Im - std::pow(m, (p + 4) / (8 - p)) * I1) / std::abs(Im);
      cr.check(rel <= 1e-6, "scaling law p=" + std::to_string(p), rel, 1e-6);
    }
  }
  return cr.report();
}

bool criterion_5() {
  Criterion cr(5, "spectrum B0c1 via the b-operator");
  const auto s = eig_b(b_transform(12, 4096), 4);
  cr.check(std::abs(s.eigenvalues[0] + 2) <= 1e-3, "|lambda0 + 2|", std::abs(s.eigenvalues[0] + 2), 1e-3);
  cr.check(std::abs(s.eigenvalues[1]) <= 1e-3, "|lambda1|", std::abs(s.eigenvalues[1]), 1e-3);
  for (double l : s.eigenvalues) cr.check(!(l > -1.95 && l < -0.05), "no eigenvalue in (-1.95, -0.05)");
  cr.check(s.continuum_edge && *s.continuum_edge == 0.25, "continuum edge 1/4");
  cr.check(cr.elapsed() < 10, "runtime", cr.elapsed(), 10);
  return cr.report();
}

bool criterion_6() {
  Criterion cr(6, "spectrum B = 1/4 via the Green kernel");
  for (CaseTag t : {CaseTag::B14c1, CaseTag::B14cm1, CaseTag::B14c0}) {
    const double c = case_params(t).c;
    const auto s = eig_green(t, 1024, 5);
    const std::string name = to_string(t);
    if (c != 0) {
      const double e = std::abs(s.eigenvalues[0] + 2 * c);
      cr.check(e <= 1e-3, name + " |lambda0 + 2c|", e, 1e-3);
    }
    if (c == 1) cr.check(s.eigenvalues[1] > 0, name + " lambda1 > 0", s.eigenvalues[1], 0);
    for (std::size_t j = 0; j < s.zero_counts.size() && j <= 4; ++j)
      cr.check(s.zero_counts[j] == static_cast<int>(j), name + " zeros of mode " + std::to_string(j), s.zero_counts[j],
               static_cast<double>(j));
  }
  for (CaseTag t : {CaseTag::B0c1, CaseTag::B14c1, CaseTag::B14c0, CaseTag::B14cm1}) {
    const LinearizedOperator op(t, 4096);
    const double c = case_params(t).c;
    const auto Lphi = apply_L(op, op.phi());
    double worst = 0;
    for (std::size_t i = 0; i < op.size(); ++i) worst = std::max(worst, std::abs(Lphi[i] + 2 * c * op.phi()[i]));
    worst /= oracle::max_abs(op.phi());
    cr.check(worst < 1e-4, to_string(t) + " apply_L(phi) + 2c phi", worst, 1e-4);
  }
  return cr.report();
}

bool criterion_7() {
  Criterion cr(7, "Green inverse and Wronskian constants");
  for (CaseTag t : {CaseTag::B0c1, CaseTag::B14c1, CaseTag::B14c0, CaseTag::B14cm1}) {
    const LinearizedOperator op(t, 16384);
    int k = 0;
    for (const auto& f : testing_support::random_bumps(op, 5, 2024)) {
      const auto Lw = apply_L(op, green_apply(op, f));
      double num = 0;
      for (std::size_t i = 0; i < f.size(); ++i) num = std::max(num, std::abs(Lw[i] - f[i]));
      const double rel = num / oracle::max_abs(f);
      cr.check(rel < 1e-6, to_string(t) + " bump " + std::to_string(k++), rel, 1e-6);
    }
  }
  // Stated constants: 1/2 for B0c1, -+ sqrt2 c / (1 + c^2) for c = +-1 (upper sign with c = 1).
  const auto w0 = homogeneous_solutions(LinearizedOperator(CaseTag::B0c1, 1024)).wronskian_constant;
  cr.check(std::abs(w0 - 0.5) <= 1e-10, "B0c1 Wronskian vs 1/2", w0, 0.5);
  for (auto [t, sign] : {std::pair{CaseTag::B14c1, -1.0}, {CaseTag::B14cm1, 1.0}}) {
    const double c = case_params(t).c;
    const double stated = sign * sqrt2 * c / (1 + c * c);
    const auto w = homogeneous_solutions(LinearizedOperator(t, 1024)).wronskian_constant;
    cr.check(std::abs(w - stated) <= 1e-10, to_string(t) + " Wronskian vs stated " + std::to_string(stated), w, stated);
  }
  return cr.report();
}

bool criterion_8() {
  Criterion cr(8, "linearized semigroup");
  for (CaseTag t : {CaseTag::B0c1, CaseTag::B14c1, CaseTag::B14c0, CaseTag::B14cm1}) {
    const auto start = Clock::now();
    const LinearizedOperator op(t, 512);
    for (unsigned seed : {1u, 2u, 3u}) {
      const auto v0 = random_constrained_data(op, seed);
      FlowOptions opt;
      opt.t_end = 1.0;
      const auto r = evolve_linearized(op, v0, {}, opt);
      const std::string name = to_string(t) + " seed " + std::to_string(seed);
      double step_violation = 0, drift = 0, growth = 0;
      const double e0 = r.samples.front().energy_H;
      for (std::size_t k = 0; k < r.samples.size(); ++k) {
        if (k) step_violation = std::max(step_violation, r.samples[k].energy_H - r.samples[k - 1].energy_H);
        drift = std::max(drift, std::abs(r.samples[k].ortho_phi - r.samples[0].ortho_phi));
        // phi_x is a second constraint only for B0c1
        if (t == CaseTag::B0c1)
          drift = std::max(drift, std::abs(r.samples[k].ortho_phix - r.samples[0].ortho_phix));
        growth = std::max(growth, std::sqrt(std::max(0.0, r.samples[k].energy_H)) - std::sqrt(e0));
      }
      cr.check(step_violation < 1e-10, name + " per-step energy increase", step_violation, 1e-10);
      cr.check(drift < 1e-8, name + " constraint drift", drift, 1e-8);
      cr.check(growth <= 0, name + " norm growth", growth, 0);
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    cr.check(secs < 30, to_string(t) + " runtime", secs, 30);
  }
  return cr.report();
}

// Shift maximising the overlap of u with the compacton shape (matched filter).
double pulse_position(const std::vector<double>& u, const PeriodicGrid& g) {
  auto overlap = [&](double s) {
    double acc = 0;
    for (std::size_t i = 0; i < g.size(); ++i) acc += u[i] * oracle::p4_phi(0, 1, g.xs()[i] - s);
    return acc;
  };
  double best = g.xs()[0], best_v = -1e300;
  for (double s = -5; s <= 5; s += 0.05) {
    const double v = overlap(s);
    if (v > best_v) {
      best_v = v;
      best = s;
    }
  }
  double lo = best - 0.05, hi = best + 0.05;
  for (int it = 0; it < 60; ++it) {
    const double a = lo + (hi - lo) / 3, b = hi - (hi - lo) / 3;
    (overlap(a) < overlap(b) ? lo : hi) = (overlap(a) < overlap(b) ? a : b);
  }
  return 0.5 * (lo + hi);
}

bool criterion_9() {
  Criterion cr(9, "dKdV traveling compacton");
  const PeriodicGrid g(40, 2048);
  const auto u0 = initial_condition(InitialKind::Compacton, {}, g);
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(0.05 * k);
  double mass_drift[2], ham_drift[2];
  int idx = 0;
  for (double nu : {1e-4, 1e-5}) {
    EvolutionConfig cfg;
    cfg.nu = nu;
    cfg.times = times;
    const auto r = evolve(u0, g, cfg);
    mass_drift[idx] = rel_drift(r.series, &DiagnosticsRow::mass);
    ham_drift[idx] = rel_drift(r.series, &DiagnosticsRow::hamiltonian);
    if (idx == 0) {
      const double x0 = pulse_position(r.snapshots.front().u, g);
      double worst = 0;
      for (const auto& s : r.snapshots) worst = std::max(worst, std::abs(pulse_position(s.u, g) - x0 - s.t));
      cr.check(worst <= 2 * g.dx(), "peak displacement error", worst, 2 * g.dx());
      cr.check(mass_drift[0] < 1e-4, "mass drift (nu=1e-4)", mass_drift[0], 1e-4);
      cr.check(ham_drift[0] < 1e-3, "hamiltonian drift (nu=1e-4)", ham_drift[0], 1e-3);
      cr.check(r.wall_seconds < 120, "runtime (nu=1e-4)", r.wall_seconds, 120);
    }
    ++idx;
  }
  cr.check(mass_drift[1] < mass_drift[0], "mass drift shrinks at nu=1e-5", mass_drift[1], mass_drift[0]);
  cr.check(ham_drift[1] < ham_drift[0], "hamiltonian drift shrinks at nu=1e-5", ham_drift[1], ham_drift[0]);
  return cr.report();
}

bool criterion_10() {
  Criterion cr(10, "dNLS periodic stationary state");
  InitialParams ip;
  ip.B = -0.2;
  ip.c = 1;
  const PeriodicGrid g(sqrt2 * pi, 512);
  const auto s0 = initial_condition(InitialKind::Periodic, ip, g);
  EvolutionConfig cfg;
  cfg.times = {0.0, pi, 2 * pi};
  const auto r = evolve(s0, g, cfg);
  const auto& a = r.snapshots.front().v;
  const auto& b = r.snapshots.back().v;
  double dmod = 0, dre = 0, vmax = 0, remax = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    dmod = std::max(dmod, std::abs(std::abs(b[i]) - std::abs(a[i])));
    dre = std::max(dre, std::abs(b[i].real() - a[i].real()));
    vmax = std::max(vmax, std::abs(a[i]));
    remax = std::max(remax, std::abs(a[i].real()));
  }
  cr.check(dmod / vmax < 1e-3, "|v| change at t = 2 pi", dmod / vmax, 1e-3);
  cr.check(dre / remax < 1e-2, "Re v change at t = 2 pi", dre / remax, 1e-2);
  cr.check(r.wall_seconds < 120, "runtime", r.wall_seconds, 120);
  return cr.report();
}

bool criterion_11() {
  Criterion cr(11, "hydrodynamic system");
  {
    const PeriodicGrid g(4 * sqrt2 * pi, 256);
    FieldState s;
    s.kind = Model::Hydro;
    s.rho.resize(g.size());
    s.u.assign(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) s.rho[i] = 1 + 0.5 * std::cos(sqrt2 * g.xs()[i]);
    EvolutionConfig cfg;
    cfg.nu = 0.0;
    cfg.times = {0.25, 0.5, 0.75, 1.0};
    const auto r = evolve(s, g, cfg);
    double worst = 0;
    for (const auto& snap : r.snapshots)
      for (std::size_t i = 0; i < g.size(); ++i)
        worst = std::max({worst, std::abs(snap.rho[i] - s.rho[i]), std::abs(snap.u[i])});
    cr.check(worst < 1e-6, "stationary cosine residual", worst, 1e-6);
  }
  {
    const PeriodicGrid g(40, 1024);
    InitialParams ip;
    const auto s = initial_condition(InitialKind::Gaussian, ip, g);
    EvolutionConfig cfg;
    cfg.times = {1.0};
    const auto r = evolve(s, g, cfg);
    const auto& rho = r.snapshots.back().rho;
    double m = 0, xm0 = 0, xm1 = 0, m0 = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      m += rho[i];
      xm1 += g.xs()[i] * rho[i];
      m0 += s.rho[i];
      xm0 += g.xs()[i] * s.rho[i];
    }
    const double shift = xm1 / m - xm0 / m0;
    std::vector<double> moved(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double z = (g.xs()[i] - shift - ip.x0) / ip.width;
      moved[i] = ip.amplitude * std::exp(-z * z);
    }
    // Pearson correlation.
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      ma += rho[i];
      mb += moved[i];
    }
    ma /= g.size();
    mb /= g.size();
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      sab += (rho[i] - ma) * (moved[i] - mb);
      saa += (rho[i] - ma) * (rho[i] - ma);
      sbb += (moved[i] - mb) * (moved[i] - mb);
    }
    const double corr = sab / std::sqrt(saa * sbb);
    cr.check(corr > 0.99, "translated-profile correlation", corr, 0.99);
  }
  return cr.report();
}

bool criterion_12() {
  Criterion cr(12, "NLS compacton relations");
  for (auto [B, c, v] : {std::tuple{0.25, 1.0, 1.0}, {0.25, -1.0, 2.0}, {0.0, 1.0, 1.0}}) {
    const ModelParams mp{4, 0, B, c};
    const auto q = build_nls_compacton(mp, v, 8193);
    const double X = oracle::p4_half_width(B, c);
    const double eK = std::abs(std::abs(momentum_K(q)) - std::abs(v) * X);
    const double eH = std::abs(hamiltonian(q) - hamiltonian(q.base) - v * v / 4 * X);
    cr.check(eK < 1e-6, "|K| - |v| X " + label(mp), eK, 1e-6);
    cr.check(eH < 1e-6, "H(Q) - H(Phi) - v^2 X / 4 " + label(mp), eH, 1e-6);
  }
  return cr.report();
}

bool criterion_13() {
  Criterion cr(13, "escaping minimizing sequence");
  const double R = 64, eps = std::pow(R, -3.0), M0 = sqrt2 * pi, K0 = 0.1;
  const auto es = escaping_sequence(M0, K0, 4, R, eps);
  cr.check(std::abs(es.total.momentum_K - K0) < 1e-8, "|K - K0|", std::abs(es.total.momentum_K - K0), 1e-8);
  // eps^2 R is about 1e-9 against M0 of order 1: the bump mass is checked on
  // its own, the total to the quadrature tolerance of the ground state mass.
  const double eb = std::abs(es.bump.mass - eps * eps * R) / (eps * eps * R);
  cr.check(eb < 1e-10, "bump mass / (eps^2 R) - 1", eb, 1e-10);
  const double et = std::abs(es.total.mass - M0 - eps * eps * R) / M0;
  cr.check(et < 1e-12, "|M - M0 - eps^2 R| / M0", et, 1e-12);
  cr.check(es.energy_excess < 1e-4, "H(u) - H(phi)", es.energy_excess, 1e-4);
  return cr.report();
}

}  // namespace

int main() {
  const std::function<bool()> all[] = {criterion_1, criterion_2, criterion_3,  criterion_4,  criterion_5,
                                       criterion_6, criterion_7, criterion_8,  criterion_9,  criterion_10,
                                       criterion_11, criterion_12, criterion_13};
  int failed = 0;
  for (const auto& c : all) failed += c() ? 0 : 1;
  std::printf("%d of 13 criteria passed\n", 13 - failed);
  return failed == 0 ? 0 : 1;
}

#include "compacton/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>

#include "compacton/error.hpp"
#include "compacton/functionals.hpp"
#include "compacton/profile_io.hpp"
#include "compacton/profiles.hpp"
#include "compacton/quadrature.hpp"

namespace compacton {

namespace {

using cplx = std::complex<double>;

// Appends the periodic image of the first sample so Simpson sees a closed period.
template <class T>
std::vector<T> closed(std::span<const T> f) {
  std::vector<T> out(f.begin(), f.end());
  out.push_back(f.front());
  return out;
}

std::vector<double> times(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

void require_size(std::size_t got, const PeriodicGrid& grid, const char* what) {
  if (got != grid.size()) throw InvalidInput(std::string(what) + ": grid mismatch");
}

}  // namespace

std::string to_string(Model model) {
  switch (model) {
    case Model::DKdV: return "dkdv";
    case Model::DNLS: return "dnls";
    case Model::Hydro: return "hydro";
  }
  return "?";
}

Model parse_model(const std::string& name) {
  for (Model m : {Model::DKdV, Model::DNLS, Model::Hydro})
    if (to_string(m) == name) return m;
  throw InvalidInput("unknown model '" + name + "'");
}

std::vector<double> dkdv_rhs(std::span<const double> u, const PeriodicGrid& grid, double p, double nu) {
  require_size(u.size(), grid, "dkdv_rhs");
  const auto ux = grid.derivative(u, nu);
  const auto inner = grid.derivative(times(u, ux), nu);
  std::vector<double> flux = times(u, inner);
  for (std::size_t i = 0; i < u.size(); ++i) flux[i] += std::pow(std::abs(u[i]), p - 2.0) * u[i];
  auto out = grid.derivative(flux, nu);
  for (auto& x : out) x = -x;
  return out;
}

std::vector<cplx> dnls_rhs(std::span<const cplx> v, const PeriodicGrid& grid, double p) {
  require_size(v.size(), grid, "dnls_rhs");
  const std::size_t n = v.size();
  const double ih2 = 1.0 / (grid.dx() * grid.dx());
  std::vector<cplx> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx l = v[(j + n - 1) % n], r = v[(j + 1) % n];
    const cplx d2 = (r * r - 2.0 * v[j] * v[j] + l * l) * ih2;
    const cplx nl = std::pow(std::abs(v[j]), p - 2.0) * v[j];
    out[j] = cplx(0.0, 1.0) * (nl + std::conj(v[j]) * 0.5 * d2);
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> hydro_rhs(std::span<const double> rho,
                                                              std::span<const double> u,
                                                              const PeriodicGrid& grid, double nu) {
  require_size(rho.size(), grid, "hydro_rhs");
  require_size(u.size(), grid, "hydro_rhs");
  auto drho_t = grid.derivative(times(rho, u), nu);
  for (auto& x : drho_t) x = -x;
  const auto ux = grid.derivative(u, nu);
  const auto r1 = grid.derivative(rho, nu);
  const auto r2 = grid.derivative(r1, nu);
  const auto r3 = grid.derivative(r2, nu);
  std::vector<double> du_t(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) du_t[i] = -3.0 * u[i] * ux[i] + rho[i] * (r3[i] + 2.0 * r1[i]);
  return {std::move(drho_t), std::move(du_t)};
}

FieldState initial_condition(InitialKind kind, const InitialParams& ip, const PeriodicGrid& grid) {
  FieldState s;
  const auto& xs = grid.xs();
  const std::size_t n = grid.size();
  const double half_box = 0.5 * grid.length();
  switch (kind) {
    case InitialKind::Compacton:
    case InitialKind::PerturbedCompacton: {
      ModelParams mp{ip.p, 0.0, ip.B, ip.c};
      if (kind == InitialKind::PerturbedCompacton) mp = {4.0, 0.0, 0.0, 1.0};
      const double X = support_half_width(mp);
      if (std::abs(ip.x0) + X >= half_box)
        throw InvalidInput("initial_condition: compacton support does not fit in the periodic box");
      s.kind = Model::DKdV;
      s.u.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double y = xs[i] - ip.x0;
        const double phi = compacton_value(mp, y);
        s.u[i] = kind == InitialKind::Compacton ? phi : phi * (1.0 + 0.01 * y * y * phi * phi * phi);
      }
      break;
    }
    case InitialKind::Periodic: {
      const ModelParams mp{ip.p, 0.0, ip.B, ip.c};
      s.kind = Model::DNLS;
      s.v.resize(n);
      for (std::size_t i = 0; i < n; ++i) s.v[i] = periodic_value(mp, xs[i] - ip.x0);
      break;
    }
    case InitialKind::Gaussian: {
      if (!(ip.amplitude > 0.0) || !(ip.width > 0.0))
        throw InvalidInput("initial_condition: Gaussian amplitude and width must be positive");
      s.kind = Model::Hydro;
      s.rho.resize(n);
      s.u.assign(n, ip.drift);
      for (std::size_t i = 0; i < n; ++i) {
        const double z = (xs[i] - ip.x0) / ip.width;
        s.rho[i] = ip.amplitude * std::exp(-z * z);
      }
      break;
    }
  }
  return s;
}

DiagnosticsRow diagnostics(const FieldState& state, const PeriodicGrid& grid, double p, double nu) {
  DiagnosticsRow row;
  row.t = state.t;
  const double h = grid.dx();
  switch (state.kind) {
    case Model::DKdV: {
      require_size(state.u.size(), grid, "diagnostics");
      const auto ux = grid.derivative(state.u, nu);
      const auto flux = times(state.u, ux);
      const auto u = closed<double>(state.u), f = closed<double>(flux);
      row.mass = mass(u, h);
      row.hamiltonian = hamiltonian(u, f, h, p);
      row.momentum = momentum_P(u, h);
      break;
    }
    case Model::DNLS: {
      require_size(state.v.size(), grid, "diagnostics");
      const std::size_t n = state.v.size();
      const auto vx = grid.derivative(std::span<const cplx>(state.v), 0.0);
      std::vector<double> rho(n), rho_x(n), j(n);
      for (std::size_t i = 0; i < n; ++i) {
        rho[i] = std::norm(state.v[i]);
        rho_x[i] = 2.0 * std::real(std::conj(state.v[i]) * vx[i]);
        j[i] = std::imag(std::conj(state.v[i]) * vx[i]);
      }
      const auto pf = polar_functionals(closed<double>(rho), closed<double>(rho_x), closed<double>(j), h, p);
      row.mass = pf.mass;
      row.hamiltonian = pf.hamiltonian;
      row.momentum = pf.momentum_K;
      break;
    }
    case Model::Hydro: {
      require_size(state.rho.size(), grid, "diagnostics");
      require_size(state.u.size(), grid, "diagnostics");
      const std::size_t n = state.rho.size();
      std::vector<double> rho(n), j(n, 0.0);
      double rmax = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        rho[i] = std::max(0.0, state.rho[i]);
        rmax = std::max(rmax, rho[i]);
      }
      // u = 2 rho theta_x, so the current rho theta_x is u/2 away from vacuum
      for (std::size_t i = 0; i < n; ++i)
        if (rho[i] > kVacuumThreshold * rmax) j[i] = 0.5 * state.u[i];
      const auto rho_x = grid.derivative(rho, 0.0);
      const auto pf = polar_functionals(closed<double>(rho), closed<double>(rho_x), closed<double>(j), h, p);
      row.mass = pf.mass;
      row.hamiltonian = pf.hamiltonian;
      row.momentum = pf.momentum_K;
      break;
    }
  }
  return row;
}

EvolutionResult evolve(const FieldState& initial, const PeriodicGrid& grid, const EvolutionConfig& config) {
  if (config.nu < 0.0) throw InvalidInput("evolve: nu must be non-negative");
  if (config.times.empty()) throw InvalidInput("evolve: no output times requested");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = grid.size();
  const Model model = initial.kind;
  IntegratorConfig ic = config.integrator;
  std::atomic<long> incidents{0};

  Eigen::VectorXd y0;
  Rhs rhs;
  switch (model) {
    case Model::DKdV: {
      require_size(initial.u.size(), grid, "evolve");
      y0 = Eigen::Map<const Eigen::VectorXd>(initial.u.data(), static_cast<Eigen::Index>(n));
      rhs = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        auto r = dkdv_rhs(std::span<const double>(y.data(), n), grid, config.p, config.nu);
        if (config.dealias) r = grid.dealias(r);
        dy = Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(n));
      };
      ic.solver = LinearSolver::Krylov;
      break;
    }
    case Model::DNLS: {
      require_size(initial.v.size(), grid, "evolve");
      y0.resize(static_cast<Eigen::Index>(2 * n));
      for (std::size_t i = 0; i < n; ++i) {
        y0[2 * i] = initial.v[i].real();
        y0[2 * i + 1] = initial.v[i].imag();
      }
      rhs = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        std::vector<cplx> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = {y[2 * i], y[2 * i + 1]};
        const auto r = dnls_rhs(v, grid, config.p);
        dy.resize(y.size());
        for (std::size_t i = 0; i < n; ++i) {
          dy[2 * i] = r[i].real();
          dy[2 * i + 1] = r[i].imag();
        }
      };
      ic.solver = LinearSolver::Banded;
      ic.bandwidth = 3;
      break;
    }
    case Model::Hydro: {
      require_size(initial.rho.size(), grid, "evolve");
      require_size(initial.u.size(), grid, "evolve");
      y0.resize(static_cast<Eigen::Index>(2 * n));
      for (std::size_t i = 0; i < n; ++i) {
        y0[i] = initial.rho[i];
        y0[n + i] = initial.u[i];
      }
      rhs = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        std::vector<double> rho(y.data(), y.data() + n);
        bool clipped = false;
        for (auto& r : rho)
          if (r < 0.0) {
            r = 0.0;
            clipped = true;
          }
        if (clipped) ++incidents;
        auto [a, b] = hydro_rhs(rho, std::span<const double>(y.data() + n, n), grid, config.nu);
        if (config.dealias) {
          a = grid.dealias(a);
          b = grid.dealias(b);
        }
        dy.resize(y.size());
        std::copy(a.begin(), a.end(), dy.data());
        std::copy(b.begin(), b.end(), dy.data() + n);
      };
      ic.solver = LinearSolver::Krylov;
      break;
    }
  }

  const Trajectory traj = integrate(rhs, y0, initial.t, config.times, ic);
  EvolutionResult result;
  result.stats = traj.stats;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    FieldState s;
    s.kind = model;
    s.t = traj.times[k];
    const auto& y = traj.states[k];
    switch (model) {
      case Model::DKdV: s.u.assign(y.data(), y.data() + n); break;
      case Model::DNLS:
        s.v.resize(n);
        for (std::size_t i = 0; i < n; ++i) s.v[i] = {y[2 * i], y[2 * i + 1]};
        break;
      case Model::Hydro:
        s.rho.assign(y.data(), y.data() + n);
        for (auto& r : s.rho)
          if (r < 0.0) {
            r = 0.0;
            ++incidents;
          }
        s.u.assign(y.data() + n, y.data() + 2 * n);
        break;
    }
    result.series.push_back(diagnostics(s, grid, config.p, model == Model::DKdV ? config.nu : 0.0));
    result.snapshots.push_back(std::move(s));
  }
  result.rho_floor_incidents = incidents.load();
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

void write_series_csv(const std::string& path, const std::vector<DiagnosticsRow>& series) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
  out << "t,mass,hamiltonian,momentum\n";
  for (const auto& r : series)
    out << format_double(r.t) << ',' << format_double(r.mass) << ',' << format_double(r.hamiltonian) << ','
        << format_double(r.momentum) << '\n';
}

void write_snapshot_csv(const std::string& path, const FieldState& state, const PeriodicGrid& grid) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
  const auto& xs = grid.xs();
  switch (state.kind) {
    case Model::DKdV:
      out << "x,u\n";
      for (std::size_t i = 0; i < xs.size(); ++i) out << format_double(xs[i]) << ',' << format_double(state.u[i]) << '\n';
      break;
    case Model::DNLS:
      out << "x,re,im\n";
      for (std::size_t i = 0; i < xs.size(); ++i)
        out << format_double(xs[i]) << ',' << format_double(state.v[i].real()) << ','
            << format_double(state.v[i].imag()) << '\n';
      break;
    case Model::Hydro:
      out << "x,rho,u\n";
      for (std::size_t i = 0; i < xs.size(); ++i)
        out << format_double(xs[i]) << ',' << format_double(state.rho[i]) << ',' << format_double(state.u[i])
            << '\n';
      break;
  }
}

}  // namespace compacton

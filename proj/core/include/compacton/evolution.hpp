#pragma once

// Nonlinear evolution: regularized pseudospectral dKdV, centred-difference
// dNLS and the hydrodynamic (rho, u) system, all on a periodic box.

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "compacton/integrator.hpp"
#include "compacton/periodic_grid.hpp"

namespace compacton {

enum class Model { DKdV, DNLS, Hydro };
std::string to_string(Model model);
Model parse_model(const std::string& name);

/// -D(u D(u D u) + u^(p-1)) with every D the regularized derivative.
std::vector<double> dkdv_rhs(std::span<const double> u, const PeriodicGrid& grid, double p = 4.0,
                             double nu = 1e-4);

/// i(|v|^(p-2) v + conj(v) (v v_x)_x), with (v v_x)_x = (v^2)_xx / 2 by the
/// three-point periodic stencil.
std::vector<std::complex<double>> dnls_rhs(std::span<const std::complex<double>> v,
                                           const PeriodicGrid& grid, double p = 4.0);

/// (-D(rho u), -3 u D u + rho(D^3 rho + 2 D rho)) with regularized D.
std::pair<std::vector<double>, std::vector<double>> hydro_rhs(std::span<const double> rho,
                                                              std::span<const double> u,
                                                              const PeriodicGrid& grid, double nu = 1e-4);

struct FieldState {
  Model kind = Model::DKdV;
  double t = 0.0;
  std::vector<double> u;                    // dKdV field, or hydro velocity
  std::vector<std::complex<double>> v;      // dNLS field
  std::vector<double> rho;                  // hydro density
};

enum class InitialKind { Compacton, PerturbedCompacton, Periodic, Gaussian };

struct InitialParams {
  double p = 4.0;
  double B = 0.0;
  double c = 1.0;
  double x0 = 0.0;
  double amplitude = 1.0;  // Gaussian peak density
  double width = 2.0;      // Gaussian e-folding half width
  double drift = 1.0;      // constant initial velocity
};

FieldState initial_condition(InitialKind kind, const InitialParams& params, const PeriodicGrid& grid);

struct DiagnosticsRow {
  double t = 0.0;
  double mass = 0.0;
  double hamiltonian = 0.0;
  double momentum = 0.0;  // P = int u for dKdV, K otherwise
};

/// Threshold (relative to max rho) below which the hydro current is set to 0.
inline constexpr double kVacuumThreshold = 1e-8;

/// For dKdV the Hamiltonian flux u u_x uses the regularized derivative with
/// the given nu (the energy of the regularized model); other models use nu = 0.
DiagnosticsRow diagnostics(const FieldState& state, const PeriodicGrid& grid, double p = 4.0,
                           double nu = 0.0);

struct EvolutionConfig {
  double p = 4.0;
  double nu = 1e-4;
  bool dealias = false;
  IntegratorConfig integrator;
  std::vector<double> times;  // output times (ascending, starting at or after the initial time)
};

struct EvolutionResult {
  std::vector<FieldState> snapshots;
  std::vector<DiagnosticsRow> series;
  IntegratorStats stats;
  long rho_floor_incidents = 0;
  double wall_seconds = 0.0;
};

/// Integrates the model matching state.kind. Finite-difference models use the
/// banded Newton solver, spectral ones the Krylov solver.
EvolutionResult evolve(const FieldState& initial, const PeriodicGrid& grid, const EvolutionConfig& config);

void write_series_csv(const std::string& path, const std::vector<DiagnosticsRow>& series);
/// Columns x,u (dKdV), x,re,im (dNLS) or x,rho,u (hydro).
void write_snapshot_csv(const std::string& path, const FieldState& state, const PeriodicGrid& grid);

}  // namespace compacton

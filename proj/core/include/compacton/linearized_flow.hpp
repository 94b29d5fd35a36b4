#pragma once

// v_t = (L v)_x + f on the cell grid of a LinearizedOperator, with v = 0 at
// both walls and L v = 0 at the right wall.

#include <functional>
#include <string>
#include <vector>

#include "compacton/spectral.hpp"

namespace compacton {

struct FlowSample {
  double t = 0.0;
  double energy_H = 0.0;      // E[v] = <L v, v>
  double flux_upsilon = 0.0;  // L v at the left wall
  double ortho_phi = 0.0;     // <v, phi>
  double ortho_phix = 0.0;    // <v, phi_x>
};

struct FlowOptions {
  double t_end = 1.0;
  double dt = 0.0;               // 0 selects 1e-3 times the interval length
  double constraint_tol = 1e-8;  // relative tolerance on the initial constraints
  std::size_t record_every = 1;
};

struct FlowResult {
  std::vector<FlowSample> samples;
  std::vector<double> v_final;
  std::size_t steps = 0;
  double max_energy_increase = 0.0;  // largest per-step increase of E
};

using Forcing = std::function<std::vector<double>(double t)>;

/// Removes the constrained directions (phi, plus phi_x for B0c1) from v in L^2.
std::vector<double> project_constraints(const LinearizedOperator& op, std::vector<double> v);

/// sum_k a_k sin(k pi (x + X) / 2X) / k for k = 1..modes with a_k standard
/// normal from a fixed-seed generator, then projected onto the constraints.
std::vector<double> random_constrained_data(const LinearizedOperator& op, unsigned seed, int modes = 6);

/// Crank-Nicolson on the semi-discrete system. Constraint forces keep <v, phi>
/// (and <v, phi_x> for B0c1) fixed; with f = 0 the discrete energy satisfies
/// E(t_{n+1}) - E(t_n) = -dt (Lv_0^2 + Lv_{N-1}^2) at the midpoint.
FlowResult evolve_linearized(const LinearizedOperator& op, const std::vector<double>& v0,
                             const Forcing& forcing, const FlowOptions& options);

void write_trajectory_csv(const std::string& path, const FlowResult& result);

}  // namespace compacton

#pragma once

// One-step TR-BDF2 with an embedded third-order error estimate and dense
// (cubic Hermite) output.

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "compacton/error.hpp"

namespace compacton {

using Rhs = std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt)>;

enum class LinearSolver {
  Banded,  // finite-difference Jacobian by cyclic colouring, sparse LU
  Krylov,  // matrix-free GMRES on Jacobian-vector products
};

struct IntegratorConfig {
  double rtol = 1e-6;
  double atol = 1e-9;
  double initial_step = 0.0;  // 0 selects a step from the initial slope
  double max_step = 0.0;      // 0 means unbounded
  LinearSolver solver = LinearSolver::Krylov;
  int bandwidth = 1;          // index half-bandwidth (cyclic) for LinearSolver::Banded
  int gmres_restart = 40;
  int max_steps = 1000000;
};

struct IntegratorStats {
  int accepted = 0;
  int rejected = 0;
  int rhs_evaluations = 0;
  int jacobians = 0;
  int linear_iterations = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  IntegratorStats stats;
};

/// Raised on step-size underflow or a non-finite right-hand side; carries the
/// last accepted state.
class IntegrationFailure : public NumericalFailure {
public:
  IntegrationFailure(const std::string& what, double t, Eigen::VectorXd y)
      : NumericalFailure(what), t_last(t), y_last(std::move(y)) {}
  double t_last;
  Eigen::VectorXd y_last;
};

/// Integrates y' = f(t, y) from t0 and returns the state at each requested
/// output time (ascending, >= t0).
Trajectory integrate(const Rhs& rhs, const Eigen::VectorXd& y0, double t0,
                     const std::vector<double>& output_times, const IntegratorConfig& config);

}  // namespace compacton

#include <doctest.h>

#include <cmath>

#include "compacton/integrator.hpp"

using namespace compacton;

namespace {

// v' = i v as a real 2-vector.
double rotation_error(double rtol, LinearSolver solver) {
  const Rhs rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy.resize(2);
    dy[0] = -y[1];
    dy[1] = y[0];
  };
  IntegratorConfig cfg;
  cfg.rtol = rtol;
  cfg.atol = 1e-14;
  cfg.solver = solver;
  Eigen::VectorXd y0(2);
  y0 << 1, 0;
  const auto tr = integrate(rhs, y0, 0.0, {1.0}, cfg);
  return std::hypot(tr.states.back()[0] - std::cos(1.0), tr.states.back()[1] - std::sin(1.0));
}

}  // namespace

TEST_CASE("linear test problem") {
  for (LinearSolver s : {LinearSolver::Krylov, LinearSolver::Banded}) {
    const double e1 = rotation_error(1e-6, s);
    CHECK(e1 < 10 * 1e-6);
    const double e2 = rotation_error(0.5e-6, s);
    CHECK(e1 / e2 >= 1.5);
  }
}

TEST_CASE("zero field stays zero and output times are honoured") {
  const Rhs rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) { dy = -y.array().cube().matrix(); };
  const Eigen::VectorXd y0 = Eigen::VectorXd::Zero(4);
  const auto tr = integrate(rhs, y0, 0.0, {0.0, 0.5, 1.0}, {});
  REQUIRE(tr.times.size() == 3);
  CHECK(tr.times[1] == 0.5);
  for (const auto& y : tr.states) CHECK(y.norm() == 0.0);
}

TEST_CASE("stiff decay") {
  // y' = -1000 (y - cos t), smooth solution tracks cos t.
  const Rhs rhs = [](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy.resize(1);
    dy[0] = -1000.0 * (y[0] - std::cos(t));
  };
  Eigen::VectorXd y0(1);
  y0 << 1.0;
  const auto tr = integrate(rhs, y0, 0.0, {2.0}, {});
  const double exact = (1e6 * std::cos(2.0) + 1e3 * std::sin(2.0)) / (1e6 + 1);
  CHECK(tr.states.back()[0] == doctest::Approx(exact).epsilon(1e-4));
  CHECK(tr.stats.accepted < 500);
}

TEST_CASE("failures carry the last state") {
  const Rhs blowup = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) { dy = y.array().square().matrix(); };
  Eigen::VectorXd y0(1);
  y0 << 1.0;
  try {
    integrate(blowup, y0, 0.0, {2.0}, {});
    FAIL("expected failure");
  } catch (const IntegrationFailure& e) {
    CHECK(e.t_last < 1.0);
    CHECK(e.t_last > 0.9);
    CHECK(e.y_last.size() == 1);
  }
  const Rhs nan_rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy = Eigen::VectorXd::Constant(y.size(), std::nan(""));
  };
  CHECK_THROWS_AS(integrate(nan_rhs, y0, 0.0, {1.0}, {}), IntegrationFailure);
}

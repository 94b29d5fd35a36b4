#include "compacton/linearized_flow.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "compacton/error.hpp"
#include "compacton/profile_io.hpp"

namespace compacton {

namespace {

std::vector<std::vector<double>> constraint_vectors(const LinearizedOperator& op) {
  std::vector<std::vector<double>> c{op.phi()};
  if (op.case_tag() == CaseTag::B0c1) c.push_back(op.phi_x());
  return c;
}

Eigen::MatrixXd dense_A(const LinearizedOperator& op) {
  const auto n = static_cast<Eigen::Index>(op.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, i) = op.sym_diag()[i];
    if (i + 1 < n) A(i, i + 1) = A(i + 1, i) = op.sym_off()[i];
  }
  return A;
}

// Centred face averages; the left wall face carries z_0, the right wall face 0.
Eigen::MatrixXd apply_D(const Eigen::MatrixXd& Z, double h) {
  const Eigen::Index n = Z.rows();
  Eigen::MatrixXd out(n, Z.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto left = i == 0 ? Z.row(0) : (0.5 * (Z.row(i - 1) + Z.row(i))).eval();
    const auto right = i + 1 == n ? Eigen::RowVectorXd::Zero(Z.cols()).eval()
                                  : (0.5 * (Z.row(i) + Z.row(i + 1))).eval();
    out.row(i) = (right - left) / h;
  }
  return out;
}

FlowSample sample(const LinearizedOperator& op, double t, const Eigen::VectorXd& v,
                  const Eigen::MatrixXd& A) {
  const double h = op.spacing();
  const Eigen::VectorXd z = A * v;
  FlowSample s;
  s.t = t;
  s.energy_H = h * v.dot(z);
  s.flux_upsilon = z[0];
  const Eigen::Map<const Eigen::VectorXd> phi(op.phi().data(), v.size());
  const Eigen::Map<const Eigen::VectorXd> phix(op.phi_x().data(), v.size());
  s.ortho_phi = h * v.dot(phi);
  s.ortho_phix = h * v.dot(phix);
  return s;
}

}  // namespace

std::vector<double> project_constraints(const LinearizedOperator& op, std::vector<double> v) {
  if (v.size() != op.size()) throw InvalidInput("project_constraints: grid mismatch");
  const auto cs = constraint_vectors(op);
  const auto n = static_cast<Eigen::Index>(op.size());
  Eigen::MatrixXd C(n, static_cast<Eigen::Index>(cs.size()));
  for (std::size_t k = 0; k < cs.size(); ++k)
    C.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Eigen::VectorXd>(cs[k].data(), n);
  Eigen::Map<Eigen::VectorXd> vm(v.data(), n);
  const Eigen::VectorXd coef = (C.transpose() * C).ldlt().solve(C.transpose() * vm);
  vm -= C * coef;
  return v;
}

std::vector<double> random_constrained_data(const LinearizedOperator& op, unsigned seed, int modes) {
  if (modes < 1) throw InvalidInput("random_constrained_data: need at least one mode");
  std::mt19937 gen(seed);
  std::normal_distribution<double> normal;
  std::vector<double> a(static_cast<std::size_t>(modes));
  for (auto& ak : a) ak = normal(gen);
  const double X = op.x_r();
  std::vector<double> v(op.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (int k = 1; k <= modes; ++k)
      v[i] += a[static_cast<std::size_t>(k - 1)] * std::sin(k * std::numbers::pi * (op.xs()[i] + X) / (2.0 * X)) / k;
  return project_constraints(op, std::move(v));
}

FlowResult evolve_linearized(const LinearizedOperator& op, const std::vector<double>& v0,
                             const Forcing& forcing, const FlowOptions& options) {
  const auto n = static_cast<Eigen::Index>(op.size());
  if (static_cast<Eigen::Index>(v0.size()) != n) throw InvalidInput("evolve_linearized: grid mismatch");
  if (!(options.t_end >= 0.0)) throw InvalidInput("evolve_linearized: t_end must be non-negative");
  const double h = op.spacing();
  const double dt_nominal = options.dt > 0.0 ? options.dt : 1e-3 * 2.0 * op.x_r();

  const auto cs = constraint_vectors(op);
  const auto m = static_cast<Eigen::Index>(cs.size());
  Eigen::MatrixXd C(n, m);
  for (Eigen::Index k = 0; k < m; ++k) C.col(k) = Eigen::Map<const Eigen::VectorXd>(cs[k].data(), n);
  const Eigen::Map<const Eigen::VectorXd> v0m(v0.data(), n);
  const double v0_norm = v0m.norm();
  for (Eigen::Index k = 0; k < m; ++k) {
    const double overlap = std::abs(C.col(k).dot(v0m));
    if (overlap > options.constraint_tol * C.col(k).norm() * v0_norm)
      throw InvalidInput("evolve_linearized: initial data violates constraint " + std::to_string(k));
  }

  // Orthonormal basis Q of the constraint complement; v = Q a.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(C);
  const Eigen::MatrixXd Qfull = qr.householderQ();
  const Eigen::MatrixXd Q = Qfull.rightCols(n - m);
  const Eigen::MatrixXd A = dense_A(op);
  const Eigen::MatrixXd AQ = A * Q;
  // Galerkin in the energy pairing: K a_t = S a + (AQ)^T f. In the
  // coordinates b = Lambda^{1/2} U^T a (K = U Lambda U^T) the energy is h |b|^2.
  Eigen::MatrixXd K = Q.transpose() * AQ;
  K = 0.5 * (K + K.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K);
  if (eig.info() != Eigen::Success) throw NumericalFailure("evolve_linearized: eigensolver failed");
  if (eig.eigenvalues()[0] <= 0.0)
    throw NumericalFailure("evolve_linearized: energy is not coercive on the constraint space");
  const Eigen::MatrixXd W = eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();
  const Eigen::MatrixXd QW = Q * W;
  const Eigen::MatrixXd AQW = AQ * W;
  const Eigen::MatrixXd T = AQW.transpose() * apply_D(AQW, h);
  const double steps_real = std::ceil(options.t_end / dt_nominal - 1e-9);
  const std::size_t steps = options.t_end > 0.0 ? static_cast<std::size_t>(std::max(1.0, steps_real)) : 0;
  const double dt = steps > 0 ? options.t_end / static_cast<double>(steps) : 0.0;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n - m, n - m);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lhs(I - 0.5 * dt * T);
  const Eigen::MatrixXd rhs_op = I + 0.5 * dt * T;

  auto force = [&](double t) -> Eigen::VectorXd {
    if (!forcing) return Eigen::VectorXd::Zero(n - m);
    const std::vector<double> f = forcing(t);
    if (static_cast<Eigen::Index>(f.size()) != n) throw InvalidInput("evolve_linearized: forcing size mismatch");
    return AQW.transpose() * Eigen::Map<const Eigen::VectorXd>(f.data(), n);
  };

  Eigen::VectorXd b = eig.eigenvalues().cwiseSqrt().asDiagonal() * (eig.eigenvectors().transpose() * (Q.transpose() * v0m));
  Eigen::VectorXd v = QW * b;
  FlowResult result;
  result.samples.push_back(sample(op, 0.0, v, A));
  double energy = result.samples.back().energy_H;
  Eigen::VectorXd f_old = force(0.0);
  const std::size_t every = std::max<std::size_t>(1, options.record_every);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Eigen::VectorXd f_new = force(t);
    b = lhs.solve(rhs_op * b + 0.5 * dt * (f_old + f_new));
    f_old = f_new;
    v = QW * b;
    const FlowSample s = sample(op, t, v, A);
    if (!std::isfinite(s.energy_H)) throw NumericalFailure("evolve_linearized: non-finite state");
    result.max_energy_increase = std::max(result.max_energy_increase, s.energy_H - energy);
    energy = s.energy_H;
    if (k % every == 0 || k == steps) result.samples.push_back(s);
  }
  result.steps = steps;
  result.v_final.assign(v.data(), v.data() + n);
  return result;
}

void write_trajectory_csv(const std::string& path, const FlowResult& result) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
  out << "t,energy_H,flux_upsilon,ortho_phi,ortho_phix\n";
  for (const auto& s : result.samples) {
    out << format_double(s.t) << ',' << format_double(s.energy_H) << ',' << format_double(s.flux_upsilon)
        << ',' << format_double(s.ortho_phi) << ',' << format_double(s.ortho_phix) << '\n';
  }
}

}  // namespace compacton

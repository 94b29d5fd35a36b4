#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "compacton/error.hpp"
#include "compacton/quadrature.hpp"
#include "compacton/spectral.hpp"
#include "compacton/tridiagonal.hpp"

namespace compacton {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

struct Mesh {
  std::vector<double> x, w;
};

// Composite Gauss rule on [-1, 1] mapped by x = X sign(s)(1 - (1 - |s|)^2),
// which clusters nodes quadratically toward both walls.
Mesh graded_mesh(double X, int panels, int order = 16) {
  if (panels < 2 || panels % 2 != 0) throw InvalidInput("graded mesh needs an even panel count >= 2");
  const GaussRule& g = gauss_legendre(order);
  Mesh m;
  m.x.reserve(static_cast<std::size_t>(panels * order));
  m.w.reserve(m.x.capacity());
  const double ds = 2.0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = -1.0 + p * ds;
    for (int k = 0; k < order; ++k) {
      const double s = a + 0.5 * ds * (g.nodes[k] + 1.0);
      const double r = 1.0 - std::abs(s);
      m.x.push_back(X * std::copysign(1.0 - r * r, s));
      m.w.push_back(0.5 * ds * g.weights[k] * 2.0 * X * r);
    }
  }
  return m;
}

void fix_sign(std::vector<double>& v) {
  std::size_t arg = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  if (v[arg] < 0.0)
    for (auto& x : v) x = -x;
}

struct RkState {
  double x, G;
};

RkState rk4_step(RkState y, double dt, const CaseProfile& prof) {
  auto rhs = [&](const RkState& s) { return RkState{-prof.phi(s.x), prof.phi_x(s.x)}; };
  const RkState k1 = rhs(y);
  const RkState k2 = rhs({y.x + 0.5 * dt * k1.x, y.G + 0.5 * dt * k1.G});
  const RkState k3 = rhs({y.x + 0.5 * dt * k2.x, y.G + 0.5 * dt * k2.G});
  const RkState k4 = rhs({y.x + dt * k3.x, y.G + dt * k3.G});
  return {y.x + dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
          y.G + dt / 6.0 * (k1.G + 2.0 * k2.G + 2.0 * k3.G + k4.G)};
}

RkState advance(RkState y, double dt, int substeps, const CaseProfile& prof) {
  const double step = dt / substeps;
  for (int i = 0; i < substeps; ++i) y = rk4_step(y, step, prof);
  return y;
}

Tridiagonal b_matrix(const BOperator& b) {
  const std::size_t n = b.ts.size();
  const double h = b.spacing();
  Tridiagonal t;
  t.diag.resize(n);
  t.off.assign(n - 1, -1.0 / (h * h));
  for (std::size_t i = 0; i < n; ++i) t.diag[i] = 2.0 / (h * h) + b.constant_term + b.coupling * b.V[i];
  return t;
}

void fill_zero_counts(Spectrum& s) {
  s.zero_counts.clear();
  for (const auto& f : s.eigenfunctions) s.zero_counts.push_back(count_zeros(f));
}

}  // namespace

BOperator b_transform(double T, std::size_t n) {
  if (!(T > 0.0)) throw InvalidInput("b_transform: T must be positive");
  if (n < 8) throw InvalidInput("b_transform: need at least 8 nodes");
  const CaseProfile prof = case_profile(CaseTag::B0c1);
  BOperator b;
  b.T = T;
  b.ts.resize(n);
  b.x_of_t.resize(n);
  b.V.resize(n);
  b.g.resize(n);
  const double h = 2.0 * T / static_cast<double>(n + 1);
  for (std::size_t i = 0; i < n; ++i) b.ts[i] = -T + static_cast<double>(i + 1) * h;

  // march t >= 0 and mirror: x(-t) = -x(t), G(-t) = G(t)
  constexpr int kSub = 8;
  const std::size_t first = n / 2;  // index of the first node with t >= 0
  RkState y{0.0, 0.0};
  double t = 0.0;
  for (std::size_t i = first; i < n; ++i) {
    const double target = (n % 2 == 1 && i == first) ? 0.0 : std::abs(b.ts[i]);
    if (target > t) y = advance(y, target - t, kSub, prof);
    t = target;
    b.x_of_t[i] = y.x;
    b.g[i] = std::exp(-0.5 * y.G);
    b.x_of_t[n - 1 - i] = -y.x;
    b.g[n - 1 - i] = b.g[i];
  }
  const RkState end = advance(y, T - t, kSub, prof);
  for (std::size_t i = 0; i < n; ++i) b.V[i] = -0.5 * prof.rho(b.x_of_t[i]);

  const double v_end = 0.5 * prof.rho(end.x);
  if (v_end > kBTruncationTolerance)
    throw InvalidInput("b_transform: T too small, |V(T)| = " + std::to_string(v_end));
  for (std::size_t i = 1; i < n; ++i)
    if (!(b.x_of_t[i] < b.x_of_t[i - 1])) throw NumericalFailure("b_transform: x(t) not decreasing");
  return b;
}

BOperator b_transform(const LinearizedOperator& op, double T, std::size_t n) {
  if (op.case_tag() != CaseTag::B0c1) throw InvalidInput("b_transform: requires case B0c1");
  return b_transform(T, n);
}

Spectrum eig_b(const BOperator& bop, int k) {
  if (k < 1) throw InvalidInput("eig_b: k must be positive");
  const std::size_t n = bop.ts.size();
  if (static_cast<std::size_t>(k) > n) throw InvalidInput("eig_b: k exceeds the grid size");
  const BOperator fine = b_transform(bop.T, 2 * n + 1);
  const Tridiagonal coarse_m = b_matrix(bop), fine_m = b_matrix(fine);

  Spectrum s;
  s.case_name = "B0c1";
  s.continuum_edge = 0.25;
  s.abscissae = bop.ts;
  s.grid_n = n;
  s.grid_extent = bop.T;
  s.grid_label = "T";
  for (int j = 0; j < k; ++j) {
    const double lc = tridiagonal_eigenvalue(coarse_m, j);
    const double lf = tridiagonal_eigenvalue(fine_m, j);
    const double lambda = (4.0 * lf - lc) / 3.0;
    s.eigenvalues.push_back(lambda);
    auto v = tridiagonal_eigenvector(coarse_m, lc);
    fix_sign(v);
    s.eigenfunctions.push_back(std::move(v));
    s.continuum_artifact.push_back(lambda >= 0.25 - 1e-12);
  }
  fill_zero_counts(s);
  return s;
}

Spectrum eig_direct(const LinearizedOperator& op, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > op.size()) throw InvalidInput("eig_direct: bad k");
  Tridiagonal t{op.sym_diag(), op.sym_off()};
  Spectrum s;
  s.case_name = to_string(op.case_tag());
  if (op.case_tag() == CaseTag::B0c1) s.continuum_edge = 0.25;
  s.abscissae = op.xs();
  s.grid_n = op.size();
  s.grid_extent = op.x_r();
  s.grid_label = "x_r";
  for (int j = 0; j < k; ++j) {
    const double lambda = tridiagonal_eigenvalue(t, j);
    s.eigenvalues.push_back(lambda);
    auto v = tridiagonal_eigenvector(t, lambda);
    fix_sign(v);
    s.eigenfunctions.push_back(std::move(v));
    s.continuum_artifact.push_back(s.continuum_edge && lambda >= *s.continuum_edge);
  }
  fill_zero_counts(s);
  return s;
}

Spectrum eig_green(CaseTag tag, std::size_t n_nodes, int k) {
  if (tag == CaseTag::B0c1) throw InvalidInput("eig_green: requires a B = 1/4 case");
  if (k < 1) throw InvalidInput("eig_green: k must be positive");
  const CaseProfile prof = case_profile(tag);
  const double X = prof.x_r;
  int panels = static_cast<int>((n_nodes + 15) / 16);
  panels += panels % 2;
  const Mesh mesh = graded_mesh(X, std::max(panels, 2));
  const std::size_t n = mesh.x.size();

  Eigen::VectorXd sw(n), phi(n);
  for (std::size_t i = 0; i < n; ++i) {
    sw[i] = std::sqrt(mesh.w[i]);
    phi[i] = prof.phi(mesh.x[i]);
  }
  Eigen::MatrixXd S(n, n);
  const bool neutral = tag == CaseTag::B14c0;
  if (!neutral) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        S(i, j) = S(j, i) = sw[i] * green_kernel(tag, mesh.x[i], mesh.x[j]) * sw[j];
  } else {
    // Volterra kernel of the particular solution, then projection onto phi-perp
    Eigen::VectorXd y1(n), y2(n);
    for (std::size_t i = 0; i < n; ++i) {
      y1[i] = std::cos(kSqrt2 * mesh.x[i]);
      y2[i] = std::sin(kSqrt2 * mesh.x[i]) / kSqrt2;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        S(i, j) = j < i ? -sw[i] * (y1[j] * y2[i] - y1[i] * y2[j]) / (phi[i] * phi[j]) * sw[j] : 0.0;
    Eigen::VectorXd u = sw.cwiseProduct(phi);
    u.normalize();
    const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - u * u.transpose();
    S = P * S * P;
    S = 0.5 * (S + S.transpose()).eval();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eig_green: eigensolver failed");

  struct Mode {
    double lambda;
    std::vector<double> f;
  };
  std::vector<Mode> modes;
  const double lower = -2.0 * (prof.params.c + prof.Z) - 1.0;
  std::ptrdiff_t skip = -1;
  if (neutral) {
    Eigen::VectorXd u = sw.cwiseProduct(phi);
    u.normalize();
    (solver.eigenvectors().transpose() * u).cwiseAbs().maxCoeff(&skip);
    std::vector<double> f(phi.data(), phi.data() + n);
    modes.push_back({0.0, std::move(f)});
  }
  for (std::ptrdiff_t m = 0; m < static_cast<std::ptrdiff_t>(n); ++m) {
    if (m == skip) continue;
    const double mu = solver.eigenvalues()[m];
    if (mu == 0.0) continue;
    const double lambda = 1.0 / mu;
    if (lambda < lower) continue;  // spurious: L is bounded below by -2 max phi^2
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = solver.eigenvectors()(static_cast<Eigen::Index>(i), m) / sw[i];
    modes.push_back({lambda, std::move(f)});
  }
  std::sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) { return a.lambda < b.lambda; });
  if (modes.size() < static_cast<std::size_t>(k)) throw NumericalFailure("eig_green: too few modes");

  Spectrum s;
  s.case_name = to_string(tag);
  s.abscissae = mesh.x;
  s.grid_n = n;
  s.grid_extent = X;
  s.grid_label = "x_r";
  for (int j = 0; j < k; ++j) {
    s.eigenvalues.push_back(modes[j].lambda);
    fix_sign(modes[j].f);
    s.eigenfunctions.push_back(std::move(modes[j].f));
    s.continuum_artifact.push_back(false);
  }
  fill_zero_counts(s);
  return s;
}

std::vector<double> hs_norm_bound(CaseTag tag, int levels, int base_panels) {
  if (tag != CaseTag::B14c1 && tag != CaseTag::B14cm1)
    throw InvalidInput("hs_norm_bound: defined for B14c1 and B14cm1");
  const CaseProfile prof = case_profile(tag);
  const double X = prof.x_r;
  const double W = std::sin(2.0 * kSqrt2 * X) / kSqrt2;
  std::vector<double> out;
  int panels = base_panels;
  for (int l = 0; l < levels; ++l, panels *= 4) {
    const Mesh m = graded_mesh(X, panels);
    const std::size_t n = m.x.size();
    std::vector<double> qm(n), qp(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double p = prof.phi(m.x[i]);
      qm[i] = std::sin(kSqrt2 * (m.x[i] + X)) / (kSqrt2 * p);
      qp[i] = std::sin(kSqrt2 * (m.x[i] - X)) / (kSqrt2 * p);
    }
    // nodes are sorted, so K(x_i, y_j) = -q+(x_i) q-(y_j)/W for j < i
    std::vector<double> below(n + 1, 0.0), above(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) below[j + 1] = below[j] + m.w[j] * qm[j] * qm[j];
    for (std::size_t j = n; j-- > 0;) above[j] = above[j + 1] + m.w[j] * qp[j] * qp[j];
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = (qp[i] * qp[i] * below[i] + qm[i] * qm[i] * above[i]) / (W * W);
      sup = std::max(sup, s);
    }
    out.push_back(sup);
  }
  return out;
}

}  // namespace compacton

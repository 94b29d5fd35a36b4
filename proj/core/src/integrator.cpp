#include "compacton/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace compacton {

namespace {

constexpr double kGamma = 2.0 - std::numbers::sqrt2;
constexpr double kD = kGamma / 2.0;
constexpr double kW = (1.0 - kD) / 2.0;
// Local error target as a fraction of (rtol, atol). Global error of the
// second-order pair then stays near rtol over O(1) intervals.
constexpr double kLocalFraction = 0.1;
const double kSqrtEps = std::sqrt(std::numeric_limits<double>::epsilon());

double wrms(const Eigen::VectorXd& v, const Eigen::VectorXd& scale) {
  if (v.size() == 0) return 0.0;
  return std::sqrt((v.array() / scale.array()).square().mean());
}

class CountingRhs {
public:
  CountingRhs(const Rhs& f, IntegratorStats& stats) : f_(f), stats_(stats) {}
  Eigen::VectorXd operator()(double t, const Eigen::VectorXd& y) const {
    Eigen::VectorXd out(y.size());
    f_(t, y, out);
    ++stats_.rhs_evaluations;
    return out;
  }

private:
  const Rhs& f_;
  IntegratorStats& stats_;
};

// Solves (I - hd J) x = b with J frozen at (t_J, y_J).
class NewtonSystem {
public:
  virtual ~NewtonSystem() = default;
  virtual void set_point(double t, const Eigen::VectorXd& y, const Eigen::VectorXd& fy) = 0;
  virtual void set_shift(double hd) = 0;
  virtual Eigen::VectorXd solve(const Eigen::VectorXd& b) = 0;
};

class BandedSystem final : public NewtonSystem {
public:
  BandedSystem(const CountingRhs& f, int bandwidth, IntegratorStats& stats)
      : f_(f), bw_(bandwidth), stats_(stats) {}

  void set_point(double t, const Eigen::VectorXd& y, const Eigen::VectorXd& fy) override {
    const Eigen::Index n = y.size();
    // smallest colour count >= 2 bw + 1 that tiles the cyclic index set
    Eigen::Index q = 2 * bw_ + 1;
    while (q < n && n % q != 0) ++q;
    q = std::min(q, n);
    const double ymax = y.cwiseAbs().maxCoeff();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n * (2 * bw_ + 1)));
    for (Eigen::Index c = 0; c < q; ++c) {
      Eigen::VectorXd yp = y;
      Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
      for (Eigen::Index j = c; j < n; j += q) {
        delta[j] = kSqrtEps * std::max({std::abs(y[j]), 1e-3 * ymax, 1e-8});
        yp[j] += delta[j];
      }
      const Eigen::VectorXd fp = f_(t, yp);
      for (Eigen::Index j = c; j < n; j += q) {
        for (Eigen::Index off = -bw_; off <= bw_; ++off) {
          if (q == n && off != 0 && std::abs(off) > n / 2) continue;
          const Eigen::Index i = ((j + off) % n + n) % n;
          if (off != 0 && i == j) continue;
          trip.emplace_back(i, j, (fp[i] - fy[i]) / delta[j]);
        }
      }
    }
    J_.resize(n, n);
    J_.setFromTriplets(trip.begin(), trip.end(), [](double a, double) { return a; });
    ++stats_.jacobians;
    shift_ = -1.0;
  }

  void set_shift(double hd) override {
    if (hd == shift_) return;
    Eigen::SparseMatrix<double> I(J_.rows(), J_.cols());
    I.setIdentity();
    M_ = I - hd * J_;
    M_.makeCompressed();
    lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    lu_->compute(M_);
    if (lu_->info() != Eigen::Success) throw NumericalFailure("integrator: singular Newton matrix");
    shift_ = hd;
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) override { return lu_->solve(b); }

private:
  const CountingRhs& f_;
  Eigen::Index bw_;
  IntegratorStats& stats_;
  Eigen::SparseMatrix<double> J_, M_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
  double shift_ = -1.0;
};

class KrylovSystem final : public NewtonSystem {
public:
  KrylovSystem(const CountingRhs& f, int restart, IntegratorStats& stats)
      : f_(f), restart_(restart), stats_(stats) {}

  void set_point(double t, const Eigen::VectorXd& y, const Eigen::VectorXd& fy) override {
    t_ = t;
    y_ = y;
    fy_ = fy;
  }
  void set_shift(double hd) override { hd_ = hd; }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) override {
    const double bnorm = b.norm();
    if (bnorm == 0.0) return Eigen::VectorXd::Zero(b.size());
    return gmres(b, 1e-6 * bnorm);
  }

private:
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
    const double vn = v.norm();
    if (vn == 0.0) return Eigen::VectorXd::Zero(v.size());
    const double eps = kSqrtEps * (1.0 + y_.norm()) / vn;
    const Eigen::VectorXd jv = (f_(t_, y_ + eps * v) - fy_) / eps;
    return v - hd_ * jv;
  }

  Eigen::VectorXd gmres(const Eigen::VectorXd& b, double tol) {
    const Eigen::Index n = b.size();
    const int m = static_cast<int>(std::min<Eigen::Index>(restart_, n));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd r = b;
    double beta = r.norm();
    for (int cycle = 0; cycle < 20 && beta > tol; ++cycle) {
      Eigen::MatrixXd V(n, m + 1);
      Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
      Eigen::VectorXd cs(m), sn(m), g = Eigen::VectorXd::Zero(m + 1);
      V.col(0) = r / beta;
      g[0] = beta;
      int k = 0;
      for (int j = 0; j < m; ++j) {
        Eigen::VectorXd w = apply(V.col(j));
        ++stats_.linear_iterations;
        for (int i = 0; i <= j; ++i) {
          H(i, j) = V.col(i).dot(w);
          w -= H(i, j) * V.col(i);
        }
        H(j + 1, j) = w.norm();
        if (H(j + 1, j) > 0.0) V.col(j + 1) = w / H(j + 1, j);
        for (int i = 0; i < j; ++i) {
          const double a = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
          H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
          H(i, j) = a;
        }
        const double rho = std::hypot(H(j, j), H(j + 1, j));
        cs[j] = H(j, j) / rho;
        sn[j] = H(j + 1, j) / rho;
        H(j, j) = rho;
        H(j + 1, j) = 0.0;
        g[j + 1] = -sn[j] * g[j];
        g[j] *= cs[j];
        k = j + 1;
        if (std::abs(g[j + 1]) <= tol || H(j, j) == 0.0) break;
      }
      const Eigen::VectorXd yk =
          H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
      x += V.leftCols(k) * yk;
      r = b - apply(x);
      beta = r.norm();
    }
    return x;
  }

  const CountingRhs& f_;
  int restart_;
  IntegratorStats& stats_;
  double t_ = 0.0, hd_ = 0.0;
  Eigen::VectorXd y_, fy_;
};

// Simplified Newton for z - hd f(t, z) = rhs.
bool newton(const CountingRhs& f, NewtonSystem& sys, double t, double hd, const Eigen::VectorXd& rhs,
            Eigen::VectorXd& z, const Eigen::VectorXd& scale) {
  double prev = 0.0;
  for (int it = 0; it < 8; ++it) {
    const Eigen::VectorXd fz = f(t, z);
    if (!fz.allFinite()) return false;
    const Eigen::VectorXd delta = sys.solve(rhs - (z - hd * fz));
    if (!delta.allFinite()) return false;
    z += delta;
    const double dn = wrms(delta, scale);
    if (dn <= 1e-3) return true;
    if (it > 0) {
      const double theta = dn / prev;
      if (theta >= 0.9) return false;
      if (theta / (1.0 - theta) * dn <= 0.03) return true;
    }
    prev = dn;
  }
  return false;
}

}  // namespace

Trajectory integrate(const Rhs& rhs, const Eigen::VectorXd& y0, double t0,
                     const std::vector<double>& output_times, const IntegratorConfig& config) {
  if (!(config.rtol > 0.0) || !(config.atol > 0.0)) throw InvalidInput("integrate: rtol and atol must be positive");
  if (!std::is_sorted(output_times.begin(), output_times.end()) ||
      (!output_times.empty() && output_times.front() < t0))
    throw InvalidInput("integrate: output times must be ascending and >= t0");
  if (!y0.allFinite()) throw InvalidInput("integrate: non-finite initial state");

  Trajectory traj;
  const CountingRhs f(rhs, traj.stats);
  std::unique_ptr<NewtonSystem> sys;
  if (config.solver == LinearSolver::Banded)
    sys = std::make_unique<BandedSystem>(f, config.bandwidth, traj.stats);
  else
    sys = std::make_unique<KrylovSystem>(f, config.gmres_restart, traj.stats);

  double t = t0;
  Eigen::VectorXd y = y0;
  Eigen::VectorXd fy = f(t, y);
  if (!fy.allFinite()) throw IntegrationFailure("integrate: non-finite right-hand side", t, y);

  std::size_t next_out = 0;
  while (next_out < output_times.size() && output_times[next_out] <= t) {
    traj.times.push_back(output_times[next_out++]);
    traj.states.push_back(y);
  }
  if (next_out == output_times.size()) return traj;
  const double t_end = output_times.back();

  auto scale_of = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (config.atol + config.rtol * a.cwiseAbs().cwiseMax(b.cwiseAbs()).array()).matrix().eval();
  };

  double h = config.initial_step;
  if (!(h > 0.0)) {
    const Eigen::VectorXd sc = scale_of(y, y);
    const double d0 = wrms(y, sc), d1 = wrms(fy, sc);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  }
  if (config.max_step > 0.0) h = std::min(h, config.max_step);

  bool last_rejected = false;
  while (t < t_end) {
    if (traj.stats.accepted + traj.stats.rejected >= config.max_steps)
      throw IntegrationFailure("integrate: step budget exhausted", t, y);
    h = std::min(h, t_end - t);
    if (config.max_step > 0.0) h = std::min(h, config.max_step);
    if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
      throw IntegrationFailure("integrate: step size underflow", t, y);

    const double hd = h * kD;
    sys->set_point(t, y, fy);
    sys->set_shift(hd);
    const Eigen::VectorXd sc_n = scale_of(y, y);

    // trapezoidal stage to t + gamma h
    Eigen::VectorXd zg = y + kGamma * h * fy;
    const Eigen::VectorXd rhs1 = y + hd * fy;
    bool ok = newton(f, *sys, t + kGamma * h, hd, rhs1, zg, sc_n);
    Eigen::VectorXd fg, z1, f1;
    if (ok) {
      fg = f(t + kGamma * h, zg);
      // BDF2 stage to t + h
      const Eigen::VectorXd rhs2 = y + (kW / kD) * (zg - y);
      z1 = y + (zg - y) / kGamma;
      ok = fg.allFinite() && newton(f, *sys, t + h, hd, rhs2, z1, sc_n);
    }
    if (ok) {
      f1 = f(t + h, z1);
      ok = f1.allFinite();
    }
    if (!ok) {
      ++traj.stats.rejected;
      h *= 0.25;
      last_rejected = true;
      continue;
    }

    const Eigen::VectorXd est = h * ((4.0 * kW - 1.0) / 3.0 * fy - fg / 3.0 + (2.0 * kD / 3.0) * f1);
    const Eigen::VectorXd err = sys->solve(est);
    const double en = wrms(err, scale_of(y, z1)) / kLocalFraction;
    if (!std::isfinite(en) || en > 1.0) {
      ++traj.stats.rejected;
      h *= std::isfinite(en) ? std::clamp(0.9 * std::cbrt(1.0 / en), 0.2, 0.9) : 0.25;
      last_rejected = true;
      continue;
    }

    // cubic Hermite dense output on (t, t + h]
    const double t_new = (t_end - (t + h) <= 1e-12 * std::max(1.0, std::abs(t_end))) ? t_end : t + h;
    while (next_out < output_times.size() && output_times[next_out] <= t_new) {
      const double s = (output_times[next_out] - t) / h;
      const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
      const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
      traj.times.push_back(output_times[next_out++]);
      traj.states.push_back(h00 * y + h10 * h * fy + h01 * z1 + h11 * h * f1);
    }
    t = t_new;
    y = z1;
    fy = f1;
    ++traj.stats.accepted;
    double factor = en > 0.0 ? 0.9 * std::cbrt(1.0 / en) : 5.0;
    factor = std::clamp(factor, 0.2, last_rejected ? 1.0 : 5.0);
    h *= factor;
    last_rejected = false;
  }
  return traj;
}

}  // namespace compacton

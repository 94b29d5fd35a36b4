#include "compacton/periodic_grid.hpp"

#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "compacton/error.hpp"

namespace compacton {

namespace {
// The FFTW planner is not re-entrant; execution with the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct PeriodicGrid::Plans {
  fftw_plan r2c = nullptr, c2r = nullptr, fwd = nullptr, bwd = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    for (fftw_plan p : {r2c, c2r, fwd, bwd})
      if (p) fftw_destroy_plan(p);
  }
};

PeriodicGrid::PeriodicGrid(double length, std::size_t n) : length_(length), n_(n) {
  if (!(length > 0.0)) throw InvalidInput("PeriodicGrid: length must be positive");
  if (n < 4 || !std::has_single_bit(n)) throw InvalidInput("PeriodicGrid: n must be a power of two >= 4");
  xs_.resize(n);
  for (std::size_t j = 0; j < n; ++j) xs_[j] = -0.5 * length + static_cast<double>(j) * dx();
  k_.resize(n / 2 + 1);
  for (std::size_t j = 0; j <= n / 2; ++j) k_[j] = 2.0 * std::numbers::pi * static_cast<double>(j) / length;

  plans_ = std::make_unique<Plans>();
  std::vector<double> r(n);
  std::vector<std::complex<double>> c(n), c2(n);
  auto* fc = reinterpret_cast<fftw_complex*>(c.data());
  auto* fc2 = reinterpret_cast<fftw_complex*>(c2.data());
  const int ni = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  plans_->r2c = fftw_plan_dft_r2c_1d(ni, r.data(), fc, flags);
  plans_->c2r = fftw_plan_dft_c2r_1d(ni, fc, r.data(), flags);
  plans_->fwd = fftw_plan_dft_1d(ni, fc, fc2, FFTW_FORWARD, flags);
  plans_->bwd = fftw_plan_dft_1d(ni, fc, fc2, FFTW_BACKWARD, flags);
  if (!plans_->r2c || !plans_->c2r || !plans_->fwd || !plans_->bwd)
    throw NumericalFailure("PeriodicGrid: FFT planning failed");
}

PeriodicGrid::~PeriodicGrid() = default;

std::vector<double> PeriodicGrid::derivative(std::span<const double> f, double nu) const {
  if (f.size() != n_) throw InvalidInput("derivative: grid mismatch");
  if (nu < 0.0) throw InvalidInput("derivative: nu must be non-negative");
  std::vector<double> in(f.begin(), f.end()), out(n_);
  std::vector<std::complex<double>> spec(n_ / 2 + 1);
  fftw_execute_dft_r2c(plans_->r2c, in.data(), reinterpret_cast<fftw_complex*>(spec.data()));
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const double k = k_[j];
    spec[j] *= std::complex<double>(0.0, k / (1.0 + nu * k * k * k * k) * scale);
  }
  spec.back() = 0.0;
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(spec.data()), out.data());
  return out;
}

std::vector<std::complex<double>> PeriodicGrid::derivative(std::span<const std::complex<double>> f,
                                                           double nu) const {
  if (f.size() != n_) throw InvalidInput("derivative: grid mismatch");
  if (nu < 0.0) throw InvalidInput("derivative: nu must be non-negative");
  std::vector<std::complex<double>> in(f.begin(), f.end()), spec(n_), out(n_);
  fftw_execute_dft(plans_->fwd, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(spec.data()));
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    const double k = j <= n_ / 2 ? k_[j] : -k_[n_ - j];
    spec[j] *= std::complex<double>(0.0, k / (1.0 + nu * k * k * k * k) * scale);
  }
  spec[n_ / 2] = 0.0;
  fftw_execute_dft(plans_->bwd, reinterpret_cast<fftw_complex*>(spec.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> PeriodicGrid::dealias(std::span<const double> f) const {
  if (f.size() != n_) throw InvalidInput("dealias: grid mismatch");
  std::vector<double> in(f.begin(), f.end()), out(n_);
  std::vector<std::complex<double>> spec(n_ / 2 + 1);
  fftw_execute_dft_r2c(plans_->r2c, in.data(), reinterpret_cast<fftw_complex*>(spec.data()));
  const double cutoff = 2.0 / 3.0 * k_.back();
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t j = 0; j < spec.size(); ++j) spec[j] *= k_[j] > cutoff ? 0.0 : scale;
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(spec.data()), out.data());
  return out;
}

std::vector<double> regularized_derivative(std::span<const double> f, const PeriodicGrid& grid, double nu) {
  return grid.derivative(f, nu);
}

}  // namespace compacton

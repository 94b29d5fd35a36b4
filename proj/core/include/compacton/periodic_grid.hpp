#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace compacton {

/// Uniform periodic grid on [-L/2, L/2) with a power-of-two sample count.
class PeriodicGrid {
public:
  PeriodicGrid(double length, std::size_t n);
  ~PeriodicGrid();
  PeriodicGrid(const PeriodicGrid&) = delete;
  PeriodicGrid& operator=(const PeriodicGrid&) = delete;

  double length() const { return length_; }
  std::size_t size() const { return n_; }
  double dx() const { return length_ / static_cast<double>(n_); }
  const std::vector<double>& xs() const { return xs_; }
  /// Wavenumbers of the half spectrum (size n/2 + 1); the Nyquist entry is kept.
  const std::vector<double>& wavenumbers() const { return k_; }

  /// Fourier multiplier i k/(1 + nu k^4); the Nyquist mode is dropped.
  std::vector<double> derivative(std::span<const double> f, double nu = 0.0) const;
  std::vector<std::complex<double>> derivative(std::span<const std::complex<double>> f,
                                               double nu = 0.0) const;
  /// Zeroes modes with |k| above 2/3 of the Nyquist wavenumber.
  std::vector<double> dealias(std::span<const double> f) const;

private:
  struct Plans;
  double length_;
  std::size_t n_;
  std::vector<double> xs_, k_;
  std::unique_ptr<Plans> plans_;
};

/// Real-field regularized derivative; rejects non-power-of-two sample counts.
std::vector<double> regularized_derivative(std::span<const double> f, const PeriodicGrid& grid, double nu);

}  // namespace compacton

#pragma once

// Conserved functionals, profile identities and the fixed-mass family
// minimisation.
//
//   M(u) = int |u|^2,   H(u) = 1/2 int |u u_x|^2 - 1/p int |u|^p,
//   P(u) = int u,       K(u) = Im int conj(u) u_x.

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "compacton/profiles.hpp"

namespace compacton {

struct FunctionalReport {
  double mass = 0.0;
  double hamiltonian = 0.0;
  double momentum_P = 0.0;
  double momentum_K = 0.0;
  double pohozaev_residual = 0.0;
  double energy_identity_residual = 0.0;
};

std::string to_json(const FunctionalReport& report);

// Sampled fields on a uniform grid with spacing h.
double mass(std::span<const double> u, double h);
double mass(std::span<const std::complex<double>> u, double h);
/// H from samples of u and of the flux u u_x.
double hamiltonian(std::span<const double> u, std::span<const double> flux, double h, double p);
/// H with u u_x = (u^2 / 2)_x by second-order differences.
double hamiltonian(std::span<const double> u, double h, double p);
/// H of a complex field, derivative by centred differences.
double hamiltonian(std::span<const std::complex<double>> u, double h, double p);
double momentum_P(std::span<const double> u, double h);
/// Im int conj(u) u_x with centred differences (zero extension past the ends).
double momentum_K(std::span<const double> u, double h);
double momentum_K(std::span<const std::complex<double>> u, double h);

double mass(const CompactonProfile& profile);
double hamiltonian(const CompactonProfile& profile);
double momentum_P(const CompactonProfile& profile);

/// Exact polar forms on Q = Phi e^{i v theta}, using Phi^2 theta' = -1/2.
double mass(const NlsProfile& q);
double hamiltonian(const NlsProfile& q);
double momentum_K(const NlsProfile& q);

struct IdentityResiduals {
  /// c int Phi^2 + 2 int (Phi Phi')^2 - int Phi^p
  double energy;
  /// -c int Phi^2 + int (Phi Phi')^2 + (2/p) int Phi^p - 4 B X
  double pohozaev;
  /// H - [c (p-8)/(2p+8) M + (p-4)/(p+4) 2 B X]
  double combined;
  /// Magnitude of the largest term, for relative comparisons.
  double scale;
};

IdentityResiduals identity_residuals(const CompactonProfile& profile);
double pohozaev_residual(const CompactonProfile& profile);
FunctionalReport functional_report(const CompactonProfile& profile);

/// M, dispersion int (phi phi')^2 and potential int phi^p of Phi_{B,c},
/// by quadrature in the profile value (no sampling grid).
struct FamilyValues {
  double mass;
  double hamiltonian;
  double half_width;
};
FamilyValues family_values(double p, double B, double c);

struct MinimizerResult {
  double B_star = 0.0;
  double c_star = 0.0;
  double H_star = 0.0;
  double mass = 0.0;
  int iterations = 0;
};

std::string to_json(const MinimizerResult& result);

/// min H(Phi_{B,c}) subject to M(Phi_{B,c}) = m over B >= 0.
MinimizerResult minimize_in_family(double p, double m);

/// ||u||_p^p / (||u||_2^alpha ||u u_x||_2^beta), alpha = (p+4)/3, beta = (p-2)/3.
double weinstein(std::span<const double> u, std::span<const double> flux, double h, double p);
double weinstein(std::span<const double> u, double h, double p);

struct PolarFunctionals {
  double mass;
  double momentum_K;
  double hamiltonian;
};

/// Polar form with rho, rho_x and the current j = rho theta_x:
/// M = int rho, K = int j, H = 1/8 int rho_x^2 + 1/2 int j^2 - 1/p int rho^(p/2).
PolarFunctionals polar_functionals(std::span<const double> rho, std::span<const double> rho_x,
                                   std::span<const double> current, double h, double p);
/// Same with theta_x samples in place of the current.
PolarFunctionals polar_functionals_theta(std::span<const double> rho,
                                         std::span<const double> rho_x,
                                         std::span<const double> theta_x, double h, double p);

/// Smooth bump supported in (-1, 1).
struct Bump {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};
/// C exp(-1 / (1 - y^2)) normalised to unit integral.
Bump standard_bump();

struct EscapingSequence {
  double M0 = 0.0;
  double K0 = 0.0;
  double R = 0.0;
  double epsilon = 0.0;
  MinimizerResult ground;      // parameters of phi
  PolarFunctionals phi;        // functionals of the ground state alone
  PolarFunctionals bump;       // functionals of the escaping bump alone
  PolarFunctionals total;
  FunctionalReport report;
  /// H(u) - H(phi)
  double energy_excess = 0.0;
};

/// u = phi + eps sqrt(chi_R) e^{i zeta} centred at 10R, in polar variables.
EscapingSequence escaping_sequence(double M0, double K0, double p, double R, double eps,
                                   const Bump& chi = standard_bump(), std::size_t n = 4097);

}  // namespace compacton

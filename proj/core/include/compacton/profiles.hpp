#pragma once

// Traveling-wave profiles of the degenerate KdV/NLS family.
//
// A profile solves (phi')^2 = F(phi) with
//   F(s) = 2B/s^2 + 2A/s + c - (2/p) s^(p-2),
// equivalently G(s) = s^2 F(s) = 2B + 2A s + c s^2 - (2/p) s^p >= 0.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace compacton {

struct ModelParams {
  double p = 4.0;
  double A = 0.0;
  double B = 0.0;
  double c = 1.0;
};

enum class SolutionKind { Periodic, Front, Compacton };

/// Which edge expansion applies at the support endpoint of a compacton.
enum class EdgeCase { B_pos_A_nonzero, B_zero_A_pos, A_zero_B_pos, A_B_zero_c_pos };

struct SolutionClass {
  SolutionKind tag;
  std::optional<EdgeCase> edge_case;  // set iff tag == Compacton
};

std::string to_string(SolutionKind kind);
std::string to_string(EdgeCase edge);

/// F_{A,B,c}(phi). Throws InvalidInput at phi = 0 unless A = B = 0.
double first_integral(double phi, const ModelParams& params);

/// Positive root z of A + c z = z^(p-2), or nullopt when none exists.
std::optional<double> stationary_point(double A, double c, double p);

/// Phase-plane classification of the positive solution branch.
SolutionClass classify(const ModelParams& params);

/// Half width x_{B,c} of the compacton support (A = 0 branch).
double support_half_width(const ModelParams& params);

struct CompactonProfile {
  ModelParams params;
  double half_width = 0.0;
  std::vector<double> xs;    // symmetric uniform grid on [-half_width, half_width]
  std::vector<double> phi;   // zero at both endpoints
  std::vector<double> dphi;  // +-inf at the endpoints when B > 0
  bool closed_form = false;

  std::size_t size() const { return xs.size(); }
  double spacing() const { return xs[1] - xs[0]; }
  /// phi * phi' at sample i, using the finite limit -sign(x) sqrt(2B) at the endpoints.
  double flux(std::size_t i) const;
  std::vector<double> fluxes() const;
};

/// Builds Phi_{B,c} on n samples. Closed forms for p = 2 and p = 4,
/// quadrature inversion of x(phi) otherwise.
CompactonProfile build_compacton(const ModelParams& params, std::size_t n);

/// Same as build_compacton but always uses the quadrature construction
/// (also accepts A != 0, for the weak-defect diagnostic).
CompactonProfile build_compacton_quadrature(const ModelParams& params, std::size_t n);

/// Phi_{B,c}(x) at an arbitrary abscissa, zero outside the support.
double compacton_value(const ModelParams& params, double x);

struct PeriodicProfile {
  ModelParams params;
  double period = 0.0;
  std::vector<double> xs;  // one period, maximum at x = 0
  std::vector<double> phi;
  std::vector<double> dphi;
  double min_value = 0.0;
  double max_value = 0.0;
  bool closed_form = false;
};

PeriodicProfile build_periodic(const ModelParams& params, std::size_t n);

/// Value of the periodic profile (maximum at 0) at arbitrary x.
double periodic_value(const ModelParams& params, double x);

/// One term coefficient * x^exponent of phi(-X + x) as x -> 0+.
struct EdgeTerm {
  double exponent;
  double coefficient;
};

/// Leading `order` terms (at most two) of the endpoint expansion.
std::vector<EdgeTerm> edge_expansion(const ModelParams& params, int order);

struct MultiComponent {
  int sign = 1;  // +1 or -1
  double shift = 0.0;
  ModelParams params;
};

struct MultiCompacton {
  std::vector<MultiComponent> components;
};

/// sum_i sign_i Phi_{B_i,c}(x - shift_i) on the given abscissae.
/// Throws InvalidInput naming the first pair of overlapping supports.
std::vector<double> assemble_multi(const MultiCompacton& spec, std::span<const double> grid);

/// Smooth test function with its first two derivatives.
struct TestFunction {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

/// Distributional residual of -c phi' + (phi (phi phi')' + phi^(p-1))' = 0
/// tested against psi: -int (-c phi + phi (phi phi')' + phi^(p-1)) psi' dx
/// with the middle term integrated by parts. Zero for A = 0; equal to
/// A (psi(-X) - psi(X)) for A != 0.
double weak_residual(const CompactonProfile& profile, const TestFunction& psi);

enum class PhaseAsymptotic { InverseDistance, Logarithmic };

struct PhaseSamples {
  std::vector<double> theta;  // -+inf at the endpoints
  /// theta(X + xi) ~ coefficient / xi (InverseDistance) or
  /// coefficient * log|xi| (Logarithmic) as xi -> 0-.
  PhaseAsymptotic kind;
  double coefficient;
};

/// theta with theta(0) = 0 and theta' = -1 / (2 Phi^2) on the support.
PhaseSamples nls_phase(const CompactonProfile& base);

struct NlsProfile {
  CompactonProfile base;
  double v = 0.0;
  std::vector<double> theta;
  std::vector<double> re;
  std::vector<double> im;
};

NlsProfile build_nls_compacton(const ModelParams& params, double v, std::size_t n);

/// Parameters of lambda Phi(lambda^(p/2 - 2) x).
ModelParams scale_params(const ModelParams& params, double lambda);

/// Quadrature machinery for the compacton branch adjacent to phi = 0.
///
/// Near the peak the profile is parametrised by u = sqrt(phi_max - phi),
/// near the edge by t = sqrt(phi); in both variables dx is a smooth
/// multiple of the differential.
class CompactonQuadrature {
public:
  explicit CompactonQuadrature(const ModelParams& params);

  const ModelParams& params() const { return params_; }
  double peak() const { return peak_; }
  double half_width() const { return half_width_; }
  double u_mid() const { return u_mid_; }
  double t_mid() const { return t_mid_; }
  double x_mid() const { return x_mid_; }

  /// G(s) = s^2 F(s) and its derivative.
  double G(double s) const;
  double dG(double s) const;
  /// dx/du on the peak side, s = peak - u^2.
  double top_jacobian(double u) const;
  /// -dx/dt on the edge side, s = t^2.
  double bottom_jacobian(double t) const;
  /// x as a function of u (peak side) and X - x as a function of t (edge side).
  double x_of_u(double u) const;
  double edge_distance_of_t(double t) const;

  struct Point {
    double s;      // profile value
    double F;      // F(s), accurate near the peak
    bool top;      // which chart produced the point
    double coord;  // u when top, t otherwise
  };
  /// Profile value at |x| (zero outside the support).
  Point locate(double x) const;
  double phi_of_x(double x) const { return locate(x).s; }

  /// Functionals of the full even profile:
  /// mass = int phi^2, dispersion = int (phi phi')^2, potential = int phi^p.
  struct Integrals {
    double mass;
    double dispersion;
    double potential;
  };
  Integrals integrals() const;

  /// F at the peak-side chart coordinate u, free of cancellation near the peak.
  double F_at_u(double u) const;

  /// Integral over the edge chart [t0, t1] with grading toward t = 0 when needed.
  double integrate_bottom(const std::function<double(double)>& f, double t0, double t1) const;

private:
  ModelParams params_;
  double peak_ = 0.0;
  double half_width_ = 0.0;
  double u_mid_ = 0.0;
  double t_mid_ = 0.0;
  double x_mid_ = 0.0;
  double edge_mid_ = 0.0;
  double taylor_[4] = {0.0, 0.0, 0.0, 0.0};
  bool graded_ = false;
};

}  // namespace compacton

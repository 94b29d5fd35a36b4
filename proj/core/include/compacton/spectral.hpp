#pragma once

// The linearised operator L = -phi (d^2/dx^2 + 2) phi about the p = 4
// compactons Phi_{0,1} and Phi_{1/4,c}, c in {1, 0, -1}.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "compacton/profiles.hpp"

namespace compacton {

enum class CaseTag { B0c1, B14c1, B14c0, B14cm1 };

std::string to_string(CaseTag tag);
/// Accepts "B0c1", "B14c1", "B14c0", "B14cm1".
CaseTag parse_case(const std::string& name);
ModelParams case_params(CaseTag tag);

/// Closed-form profile data for the p = 4 cases.
struct CaseProfile {
  ModelParams params;
  double x_r;  // half width of the support
  double Z;    // sqrt(4B + c^2)
  double rho(double x) const;    // phi^2
  double drho(double x) const;   // (phi^2)'
  double d2rho(double x) const;  // (phi^2)''
  double phi(double x) const;
  double phi_x(double x) const;
};
CaseProfile case_profile(CaseTag tag);

/// L on a cell-centred grid of n cells covering (-x_r, x_r).
class LinearizedOperator {
public:
  LinearizedOperator(CaseTag tag, std::size_t n);

  CaseTag case_tag() const { return tag_; }
  const CaseProfile& profile() const { return profile_; }
  double x_r() const { return profile_.x_r; }
  std::size_t size() const { return xs_.size(); }
  double spacing() const { return h_; }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& phi() const { return phi_; }
  const std::vector<double>& phi_x() const { return phi_x_; }

  /// Quadrature weights (fourth order, cell-centred) for inner products.
  const std::vector<double>& weights() const { return weights_; }
  double inner(std::span<const double> a, std::span<const double> b) const;

  /// Symmetric tridiagonal matrix of w -> -phi D^2 (phi w) - 2 phi^2 w with
  /// phi w = 0 imposed by odd reflection at both walls.
  const std::vector<double>& sym_diag() const { return diag_; }
  const std::vector<double>& sym_off() const { return off_; }
  std::vector<double> apply_sym(std::span<const double> w) const;

private:
  CaseTag tag_;
  CaseProfile profile_;
  double h_;
  std::vector<double> xs_, phi_, phi_x_, weights_, diag_, off_;
};

/// -phi ((phi w)'' + 2 phi w) with (phi w)'' by centred differences; the
/// ghost values use phi w = 0 at the walls with second-order extrapolation.
std::vector<double> apply_L(const LinearizedOperator& op, std::span<const double> w);

/// ||(phi w)_x||^2 - 2 ||phi w||^2 (face differences, phi w = 0 at the walls).
double energy_form(const LinearizedOperator& op, std::span<const double> w);

/// A pair of solutions of L q = 0 and their modified Wronskian
/// W[a, b] = (phi a)(phi b)_x - (phi b)(phi a)_x, except for B0c1 where the
/// ordering (phi a)_x (phi b) - (phi b)_x (phi a) is used.
struct GreenKernel {
  CaseTag case_tag;
  CaseProfile profile;
  std::string name_a;
  std::string name_b;
  std::vector<double> q_a;  // samples on the operator grid
  std::vector<double> q_b;
  double wronskian_constant;  // value for the stated pair
  /// Wronskian evaluated from the closed forms at x.
  double wronskian_at(double x) const;
  /// q_a, q_b and their derivatives at arbitrary interior x.
  double eval_a(double x) const;
  double eval_b(double x) const;
  double eval_a_x(double x) const;
  double eval_b_x(double x) const;
};

GreenKernel homogeneous_solutions(const LinearizedOperator& op);

/// L^{-1} f by variation of parameters. B0c1 requires <f, phi> = <f, phi_x> = 0
/// (solution taken orthogonal to phi_x), B14c0 requires <f, phi> = 0
/// (solution orthogonal to phi).
std::vector<double> green_apply(const LinearizedOperator& op, std::span<const double> f);

/// Green kernel K(x, y) of L^{-1} for the B = 1/4 cases with c = +-1.
double green_kernel(CaseTag tag, double x, double y);

/// sup_x int |K(x, y)|^2 dy on Nystrom meshes refined by 4x per level.
std::vector<double> hs_norm_bound(CaseTag tag, int levels, int base_panels = 8);

struct Spectrum {
  std::string case_name;
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenfunctions;
  std::vector<double> abscissae;  // where the eigenfunctions are sampled
  std::optional<double> continuum_edge;
  std::vector<int> zero_counts;
  std::vector<bool> continuum_artifact;  // eigenvalue at or above the continuum edge
  std::size_t grid_n = 0;
  double grid_extent = 0.0;  // T for the b-operator, x_r otherwise
  std::string grid_label;    // "T" or "x_r"
};

std::string to_json(const Spectrum& spectrum);

/// L_b = -d^2/dt^2 + 1/4 + (15/4) V(t) on [-T, T] for the B0c1 case.
struct BOperator {
  double T = 0.0;
  std::vector<double> ts;      // interior nodes, Dirichlet at +-T
  std::vector<double> x_of_t;  // x(t), dx/dt = -phi(x), x(0) = 0
  std::vector<double> V;       // phi(x(t)) phi_xx(x(t)) = -phi^2 / 2
  std::vector<double> g;       // exp(-1/2 int_0^t phi_x(x(s)) ds)
  double constant_term = 0.25;
  double coupling = 3.75;
  double spacing() const { return 2.0 * T / static_cast<double>(ts.size() + 1); }
};

/// Threshold on |V(+-T)| below which the truncation is accepted.
inline constexpr double kBTruncationTolerance = 1e-9;

BOperator b_transform(double T, std::size_t n);
BOperator b_transform(const LinearizedOperator& op, double T, std::size_t n);

/// Lowest k eigenvalues of L_b, Richardson-extrapolated from n and 2n + 1 nodes.
Spectrum eig_b(const BOperator& bop, int k);

/// Nystrom eigenvalues of L from its Green kernel on a graded Gauss mesh
/// (B = 1/4 cases). For c = 0 the kernel acts on phi-perp and the exact
/// ground state lambda = 0 is prepended.
Spectrum eig_green(CaseTag tag, std::size_t n_nodes, int k);

/// Direct eigenvalues of the symmetric discretisation (cross-check).
Spectrum eig_direct(const LinearizedOperator& op, int k);

/// Roots (alpha_plus, alpha_minus) of alpha^2 + alpha + lambda = 0.
std::pair<std::complex<double>, std::complex<double>> frobenius_exponents(std::complex<double> lambda);

/// Sign changes, ignoring samples below 1e-9 of the maximum amplitude.
int count_zeros(std::span<const double> samples);

}  // namespace compacton

#include "compacton/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "compacton/error.hpp"
#include "compacton/quadrature.hpp"

namespace compacton {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

// phi * q for the stored homogeneous pair: both solve Y'' + 2Y = 0.
struct Trig {
  double a = 0.0, b = 0.0;  // Y = a cos(sqrt2 x) + b sin(sqrt2 x)
  double value(double x) const { return a * std::cos(kSqrt2 * x) + b * std::sin(kSqrt2 * x); }
  double deriv(double x) const {
    return kSqrt2 * (-a * std::sin(kSqrt2 * x) + b * std::cos(kSqrt2 * x));
  }
};

// sin(sqrt2 (x - s)) / sqrt2 as a Trig in x.
Trig shifted_sine(double s) {
  return {-std::sin(kSqrt2 * s) / kSqrt2, std::cos(kSqrt2 * s) / kSqrt2};
}

std::pair<Trig, Trig> products(CaseTag tag, const CaseProfile& prof) {
  switch (tag) {
    case CaseTag::B0c1:
      // phi q1 = phi phi_x = -sin(sqrt2 x)/sqrt2, phi q2 = phi^2 - 1 = cos(sqrt2 x)
      return {Trig{0.0, -1.0 / kSqrt2}, Trig{1.0, 0.0}};
    case CaseTag::B14c0:
      return {Trig{1.0, 0.0}, Trig{0.0, 1.0 / kSqrt2}};
    case CaseTag::B14c1:
    case CaseTag::B14cm1:
      return {shifted_sine(-prof.x_r), shifted_sine(prof.x_r)};
  }
  return {};
}

double relative_overlap(const LinearizedOperator& op, std::span<const double> f,
                        std::span<const double> g) {
  const double ff = op.inner(f, f), gg = op.inner(g, g);
  if (ff == 0.0 || gg == 0.0) return 0.0;
  return std::abs(op.inner(f, g)) / std::sqrt(ff * gg);
}

void remove_component(const LinearizedOperator& op, std::vector<double>& w,
                      std::span<const double> dir) {
  const double a = op.inner(w, dir) / op.inner(dir, dir);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= a * dir[i];
}

}  // namespace

std::string to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::B0c1: return "B0c1";
    case CaseTag::B14c1: return "B14c1";
    case CaseTag::B14c0: return "B14c0";
    case CaseTag::B14cm1: return "B14cm1";
  }
  return "?";
}

CaseTag parse_case(const std::string& name) {
  for (CaseTag t : {CaseTag::B0c1, CaseTag::B14c1, CaseTag::B14c0, CaseTag::B14cm1})
    if (to_string(t) == name) return t;
  throw InvalidInput("unknown case '" + name + "' (expected B0c1, B14c1, B14c0 or B14cm1)");
}

ModelParams case_params(CaseTag tag) {
  switch (tag) {
    case CaseTag::B0c1: return {4.0, 0.0, 0.0, 1.0};
    case CaseTag::B14c1: return {4.0, 0.0, 0.25, 1.0};
    case CaseTag::B14c0: return {4.0, 0.0, 0.25, 0.0};
    case CaseTag::B14cm1: return {4.0, 0.0, 0.25, -1.0};
  }
  return {};
}

// phi^2 = c + Z cos(sqrt2 x)
double CaseProfile::rho(double x) const {
  return std::max(0.0, params.c + Z * std::cos(kSqrt2 * x));
}
double CaseProfile::drho(double x) const { return -kSqrt2 * Z * std::sin(kSqrt2 * x); }
double CaseProfile::d2rho(double x) const { return -2.0 * Z * std::cos(kSqrt2 * x); }
double CaseProfile::phi(double x) const { return std::sqrt(rho(x)); }
double CaseProfile::phi_x(double x) const { return drho(x) / (2.0 * phi(x)); }

CaseProfile case_profile(CaseTag tag) {
  CaseProfile prof;
  prof.params = case_params(tag);
  const double c = prof.params.c;
  prof.Z = std::sqrt(4.0 * prof.params.B + c * c);
  prof.x_r = std::acos(-c / prof.Z) / kSqrt2;
  return prof;
}

LinearizedOperator::LinearizedOperator(CaseTag tag, std::size_t n)
    : tag_(tag), profile_(case_profile(tag)) {
  if (n < 8) throw InvalidInput("LinearizedOperator: need at least 8 cells");
  const double X = profile_.x_r;
  h_ = 2.0 * X / static_cast<double>(n);
  xs_.resize(n);
  phi_.resize(n);
  phi_x_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs_[i] = -X + (static_cast<double>(i) + 0.5) * h_;
    // keep the grid exactly symmetric
    if (2 * i + 1 >= n) xs_[i] = -xs_[n - 1 - i];
    phi_[i] = profile_.phi(xs_[i]);
    phi_x_[i] = profile_.phi_x(xs_[i]);
  }
  weights_ = cell_quadrature_weights(n, h_);

  const double ih2 = 1.0 / (h_ * h_);
  diag_.resize(n);
  off_.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double wall = (i == 0 || i + 1 == n) ? 3.0 : 2.0;
    diag_[i] = phi_[i] * phi_[i] * (wall * ih2 - 2.0);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) off_[i] = -phi_[i] * phi_[i + 1] * ih2;
}

double LinearizedOperator::inner(std::span<const double> a, std::span<const double> b) const {
  if (a.size() != size() || b.size() != size()) throw InvalidInput("inner: grid mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += weights_[i] * a[i] * b[i];
  return s;
}

std::vector<double> LinearizedOperator::apply_sym(std::span<const double> w) const {
  if (w.size() != size()) throw InvalidInput("apply_sym: grid mismatch");
  const std::size_t n = w.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag_[i] * w[i];
    if (i > 0) s += off_[i - 1] * w[i - 1];
    if (i + 1 < n) s += off_[i] * w[i + 1];
    out[i] = s;
  }
  return out;
}

std::vector<double> apply_L(const LinearizedOperator& op, std::span<const double> w) {
  const std::size_t n = op.size();
  if (w.size() != n) throw InvalidInput("apply_L: grid mismatch");
  const auto& phi = op.phi();
  std::vector<double> psi(n);
  for (std::size_t i = 0; i < n; ++i) psi[i] = phi[i] * w[i];
  const double h = op.spacing();
  // quadratic through the wall value 0 and the two nearest cells
  const double ghost_l = (-6.0 * psi[0] + psi[1]) / 3.0;
  const double ghost_r = (-6.0 * psi[n - 1] + psi[n - 2]) / 3.0;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i == 0 ? ghost_l : psi[i - 1];
    const double right = i + 1 == n ? ghost_r : psi[i + 1];
    const double d2 = (right - 2.0 * psi[i] + left) / (h * h);
    out[i] = -phi[i] * (d2 + 2.0 * psi[i]);
  }
  return out;
}

double energy_form(const LinearizedOperator& op, std::span<const double> w) {
  const std::size_t n = op.size();
  if (w.size() != n) throw InvalidInput("energy_form: grid mismatch");
  const auto& phi = op.phi();
  const double h = op.spacing();
  double grad = 0.0, mass = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double psi = phi[i] * w[i];
    if (i > 0) grad += (psi - prev) * (psi - prev);
    mass += psi * psi;
    prev = psi;
  }
  const double first = phi[0] * w[0], last = phi[n - 1] * w[n - 1];
  grad += 2.0 * (first * first + last * last);
  return grad / h - 2.0 * h * mass;
}

double GreenKernel::eval_a(double x) const {
  return products(case_tag, profile).first.value(x) / profile.phi(x);
}
double GreenKernel::eval_b(double x) const {
  return products(case_tag, profile).second.value(x) / profile.phi(x);
}
double GreenKernel::eval_a_x(double x) const {
  const Trig y = products(case_tag, profile).first;
  const double p = profile.phi(x);
  return (y.deriv(x) * p - y.value(x) * profile.phi_x(x)) / (p * p);
}
double GreenKernel::eval_b_x(double x) const {
  const Trig y = products(case_tag, profile).second;
  const double p = profile.phi(x);
  return (y.deriv(x) * p - y.value(x) * profile.phi_x(x)) / (p * p);
}

double GreenKernel::wronskian_at(double x) const {
  const double p = profile.phi(x), px = profile.phi_x(x);
  const double qa = eval_a(x), qb = eval_b(x);
  const double ya = p * qa, yb = p * qb;
  const double ya_x = px * qa + p * eval_a_x(x);
  const double yb_x = px * qb + p * eval_b_x(x);
  if (case_tag == CaseTag::B0c1) return ya_x * yb - yb_x * ya;
  return ya * yb_x - yb * ya_x;
}

GreenKernel homogeneous_solutions(const LinearizedOperator& op) {
  GreenKernel k;
  k.case_tag = op.case_tag();
  k.profile = op.profile();
  switch (k.case_tag) {
    case CaseTag::B0c1: k.name_a = "q1"; k.name_b = "q2"; break;
    case CaseTag::B14c0: k.name_a = "phi"; k.name_b = "q_star"; break;
    default: k.name_a = "q_minus"; k.name_b = "q_plus"; break;
  }
  k.q_a.resize(op.size());
  k.q_b.resize(op.size());
  for (std::size_t i = 0; i < op.size(); ++i) {
    k.q_a[i] = k.eval_a(op.xs()[i]);
    k.q_b[i] = k.eval_b(op.xs()[i]);
  }
  switch (k.case_tag) {
    case CaseTag::B0c1: k.wronskian_constant = -1.0; break;
    case CaseTag::B14c0: k.wronskian_constant = 1.0; break;
    default: k.wronskian_constant = std::sin(2.0 * kSqrt2 * k.profile.x_r) / kSqrt2; break;
  }
  return k;
}

std::vector<double> green_apply(const LinearizedOperator& op, std::span<const double> f) {
  const std::size_t n = op.size();
  if (f.size() != n) throw InvalidInput("green_apply: grid mismatch");
  const CaseTag tag = op.case_tag();
  constexpr double kOrthoTol = 1e-8;
  if (tag == CaseTag::B0c1 || tag == CaseTag::B14c0) {
    if (relative_overlap(op, f, op.phi()) > kOrthoTol)
      throw InvalidInput("green_apply: f is not orthogonal to phi");
  }
  if (tag == CaseTag::B0c1 && relative_overlap(op, f, op.phi_x()) > kOrthoTol)
    throw InvalidInput("green_apply: f is not orthogonal to phi_x");

  // phi w = psi with psi'' + 2 psi = -f / phi and psi(-x_r) = psi'(-x_r) = 0
  const auto& xs = op.xs();
  const auto& phi = op.phi();
  std::vector<double> c1(n), s1(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = -f[i] / phi[i];
    c1[i] = std::cos(kSqrt2 * xs[i]) * g;
    s1[i] = std::sin(kSqrt2 * xs[i]) / kSqrt2 * g;
  }
  const auto I1 = cumulative_cell_integral(c1, op.spacing());
  const auto I2 = cumulative_cell_integral(s1, op.spacing());
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double psi = std::sin(kSqrt2 * xs[i]) / kSqrt2 * I1[i] - std::cos(kSqrt2 * xs[i]) * I2[i];
    w[i] = psi / phi[i];
  }
  if (tag == CaseTag::B14c1 || tag == CaseTag::B14cm1) {
    const double X = op.x_r();
    const double end = std::sin(kSqrt2 * X) / kSqrt2 * I1[n] - std::cos(kSqrt2 * X) * I2[n];
    const double beta = -end / std::sin(2.0 * kSqrt2 * X);
    for (std::size_t i = 0; i < n; ++i) w[i] += beta * std::sin(kSqrt2 * (xs[i] + X)) / phi[i];
  } else if (tag == CaseTag::B14c0) {
    remove_component(op, w, phi);
  } else {
    remove_component(op, w, op.phi_x());
  }
  return w;
}

double green_kernel(CaseTag tag, double x, double y) {
  if (tag != CaseTag::B14c1 && tag != CaseTag::B14cm1)
    throw InvalidInput("green_kernel: defined for B14c1 and B14cm1");
  const CaseProfile prof = case_profile(tag);
  const double X = prof.x_r;
  const double W = std::sin(2.0 * kSqrt2 * X) / kSqrt2;
  const double lo = std::min(x, y), hi = std::max(x, y);
  const double q_minus = std::sin(kSqrt2 * (lo + X)) / (kSqrt2 * prof.phi(lo));
  const double q_plus = std::sin(kSqrt2 * (hi - X)) / (kSqrt2 * prof.phi(hi));
  return -q_plus * q_minus / W;
}

std::pair<std::complex<double>, std::complex<double>> frobenius_exponents(std::complex<double> lambda) {
  const std::complex<double> root = std::sqrt(1.0 - 4.0 * lambda);
  return {(-1.0 + root) / 2.0, (-1.0 - root) / 2.0};
}

int count_zeros(std::span<const double> samples) {
  double amp = 0.0;
  for (double s : samples) amp = std::max(amp, std::abs(s));
  if (amp == 0.0) return 0;
  const double floor = 1e-9 * amp;
  int count = 0, sign = 0;
  for (double s : samples) {
    if (std::abs(s) <= floor) continue;
    const int sg = s > 0 ? 1 : -1;
    if (sign != 0 && sg != sign) ++count;
    sign = sg;
  }
  return count;
}

std::string to_json(const Spectrum& s) {
  nlohmann::json j;
  j["case"] = s.case_name;
  j["eigenvalues"] = s.eigenvalues;
  j["continuum_edge"] = s.continuum_edge ? nlohmann::json(*s.continuum_edge) : nlohmann::json(nullptr);
  j["zero_counts"] = s.zero_counts;
  j["continuum_artifact"] = s.continuum_artifact;
  j["grid"] = {{"n", s.grid_n}, {s.grid_label.empty() ? "x_r" : s.grid_label, s.grid_extent}};
  return j.dump(2);
}

}  // namespace compacton

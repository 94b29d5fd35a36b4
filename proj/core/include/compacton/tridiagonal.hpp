#pragma once

// Symmetric tridiagonal eigenproblems: Sturm-sequence bisection for the
// eigenvalues, inverse iteration for the eigenvectors.

#include <span>
#include <vector>

namespace compacton {

struct Tridiagonal {
  std::vector<double> diag;  // size n
  std::vector<double> off;   // size n - 1
};

/// Number of eigenvalues strictly below x.
int sturm_count(const Tridiagonal& t, double x);

/// k-th smallest eigenvalue (k = 0, 1, ...), absolute tolerance `tol`.
double tridiagonal_eigenvalue(const Tridiagonal& t, int k, double tol = 1e-13);

/// Unit eigenvector for an (accurately computed) eigenvalue.
std::vector<double> tridiagonal_eigenvector(const Tridiagonal& t, double lambda);

/// Solves (T - shift) x = b by Gaussian elimination with partial pivoting.
std::vector<double> tridiagonal_solve(const Tridiagonal& t, double shift, std::span<const double> b);

}  // namespace compacton

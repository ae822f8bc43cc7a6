#pragma once

#include <vector>

#include "dwdirac/errors.hpp"

// Symmetric tridiagonal eigensolver: Sturm-sequence bisection for eigenvalues,
// shifted inverse iteration for eigenvectors. Internals run in long double so that
// eigenvalues ~1e-12 below a ~1e6 diagonal scale survive (the discrete Witten
// Laplacians at h ~ 1e-3 put them exactly there).

namespace dwdirac {

struct Tridiag {
    std::vector<long double> diag;
    std::vector<long double> off; // off[i] couples i and i+1

    int size() const { return static_cast<int>(diag.size()); }
};

struct EigResult {
    std::vector<double> values;               // ascending
    std::vector<std::vector<double>> vectors; // unit l2 norm in the grid dot product
};

// Number of eigenvalues strictly below x.
int sturm_count(const Tridiag& T, long double x);

// The k smallest eigenvalues with eigenvectors. Bisection runs until the bracket is
// below max(tol, a few ulps); each eigenvector must reach residual <= 10*tol*||T||
// or eigenvector_failure is thrown.
EigResult eig_low(const Tridiag& T, int k, double tol);

// All eigenvalues in (lo, hi], same guarantees; refuses to return more than max_count.
EigResult eig_in_range(const Tridiag& T, double lo, double hi, double tol,
                       int max_count = 64);

} // namespace dwdirac

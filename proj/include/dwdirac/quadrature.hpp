#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "dwdirac/errors.hpp"

// Globally adaptive Gauss-Kronrod 15(7) quadrature on finite intervals.
// Improper integrals are handled by the callers, which truncate at a point where
// the integrand's exponential envelope is below the tolerance.

namespace dwdirac {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
    bool converged = false;
};

struct ComplexQuadratureResult {
    std::complex<double> value{0.0, 0.0};
    double error_estimate = 0.0;
    int evaluations = 0;
    bool converged = false;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    int max_intervals = 4000;
};

// Single panel, non-adaptive. Error estimate is |K15 - G7|.
QuadratureResult gk15_panel(const std::function<double(double)>& f, double a, double b);

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opt = {});

// Adaptive on each subinterval [pts[k], pts[k+1]]; pts must be sorted.
QuadratureResult integrate_split(const std::function<double(double)>& f,
                                 const std::vector<double>& pts,
                                 const QuadratureOptions& opt = {});

ComplexQuadratureResult integrate_complex(const std::function<std::complex<double>(double)>& f,
                                          const std::vector<double>& pts,
                                          const QuadratureOptions& opt = {});

// Throwing wrappers (tolerance_not_met on non-convergence).
double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& opt = {});
double integrate_split_or_throw(const std::function<double(double)>& f,
                                const std::vector<double>& pts,
                                const QuadratureOptions& opt = {});
std::complex<double> integrate_complex_or_throw(const std::function<std::complex<double>(double)>& f,
                                                const std::vector<double>& pts,
                                                const QuadratureOptions& opt = {});

} // namespace dwdirac

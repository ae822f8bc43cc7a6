#pragma once

#include <utility>
#include <vector>

#include "dwdirac/errors.hpp"

// Log-linear decay fits for error-vs-parameter series: error ~ C * exp(slope * x).

namespace dwdirac {

struct DecayFit {
    std::vector<std::pair<double, double>> samples; // (x, error), error > 0
    double slope = 0.0;                             // d ln(error) / dx
    double intercept = 0.0;                         // ln C
    double max_log_residual = 0.0;                  // worst |ln error - (intercept + slope x)|
};

// Least squares of ln(error) against x. Needs at least three samples with distinct
// abscissae; every error must be strictly positive.
DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& samples);

} // namespace dwdirac

#pragma once

// Monte Carlo check of the basic energy estimate: trial functions orthogonal to the
// span of the shifted wall modes satisfy ||D f|| >= (kappa_inf + K)/2 * ||f|| once the
// walls are far enough apart. Trials are random Gaussian wave packets with random
// constant spinors, Gram-Schmidt-projected off the modes on the grid.

#include <cstdint>
#include <functional>

#include "dwdirac/grid.hpp"
#include "dwdirac/mass_profile.hpp"
#include "dwdirac/wall_modes.hpp"

namespace dwdirac {

struct EnergyEstimateOptions {
    double K = 0.5; // claimed gap fraction; the pass threshold is (kappa_inf + K)/2
    int trials = 100;
    std::uint64_t seed = 12345;
    bool orthogonalize = true; // project trials off the shifted kernel modes
    double h = 2e-3;           // grid spacing; the box is derived from the profile
};

struct EnergyEstimateReport {
    double min_ratio = 0.0;
    double mean_ratio = 0.0;
    double threshold = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
    bool pass = false;
};

// ||D_h f|| / ||f|| with D_h the centered-difference discretization of the operator
// (zero padding outside the box).
double discrete_dirac_ratio(const MassProfile& profile, const Grid& grid,
                            const std::function<Spinor2(double)>& f);

EnergyEstimateReport energy_estimate_check(const MassProfile& profile,
                                           const EnergyEstimateOptions& options = {});

} // namespace dwdirac

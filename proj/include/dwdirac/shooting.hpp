#pragma once

// Shooting eigensolver for i*sigma3*d/dx + kappa(x)*sigma1, independent of the
// Witten-Laplacian route.
//
// A gap state decays like exp(-mu|x|) with mu = sqrt(kappa(+-inf)^2 - E^2), so we
// integrate the decaying solution u from the far left and w from the far right and
// match at x = 0. The system is traceless, hence the Wronskian
// W(E) = u1*w2 - u2*w1 is x-independent and vanishes exactly at eigenvalues.
// The antiunitary map (sigma1, conj) commutes with the operator and fixes both
// boundary rays up to a phase, which forces W onto a line in the complex plane:
// purely imaginary when kappa(-inf)*kappa(+inf) > 0, purely real otherwise. The
// scalar mismatch below is that nontrivial component, so eigenvalues can be
// bracketed by sign changes of an honest real function.
//
// Pieces where kappa is exactly constant (mollifier plateaus, sgn profiles, far
// tails) are propagated in closed form via exp(t*M); only the wall cores and bump
// support need RK4 steps. For sgn profiles the whole transfer matrix is exact, the
// first-order system never sees the distributional kappa'.

#include <string>
#include <vector>

#include "dwdirac/errors.hpp"
#include "dwdirac/mass_profile.hpp"

namespace dwdirac {

struct ShootingOptions {
    double window = 0.0; // report |E| < window; 0 -> 0.9 * kappa_inf
    double x_pad = 30.0; // integration starts x_pad / kappa_inf past the outermost wall
    double step = 5e-4;  // RK4 step on non-flat pieces, scaled by 1 / max(1, kappa_inf)
    double root_tol = 1e-15;   // absolute tolerance on E, scaled by kappa_inf
    std::vector<double> hints; // expected eigenvalues, seed extra scan points
    int scan_per_decade = 12;  // density of the logarithmic scan toward E = 0
    int max_roots = 64;
};

struct ShootingResult {
    std::vector<double> energies; // ascending
    double window = 0.0;
    std::vector<std::string> warnings;
};

// The real component of the Wronskian that can vanish (Im W or Re W, see above).
// Overall scale is arbitrary (solutions are renormalized while integrating); only
// zeros and signs are meaningful.
double shooting_mismatch(const MassProfile& profile, double E,
                         const ShootingOptions& options = {});

// All eigenvalues in (-window, window): sign-change scan plus Brent refinement.
ShootingResult shooting_oracle(const MassProfile& profile, const ShootingOptions& options = {});

} // namespace dwdirac

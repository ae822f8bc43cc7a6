#pragma once

#include <complex>
#include <string>
#include <vector>

#include "dwdirac/grid.hpp"
#include "dwdirac/mass_profile.hpp"
#include "dwdirac/tridiag.hpp"

// Gap spectrum of D = i*sigma3*d/dx + kappa*sigma1 through its square: rotating by
// U = (1/sqrt2)[[1, i],[1, -i]] turns D into an off-diagonal pair (A = i d/dx + i kappa,
// B = A*), so D^2 is diagonal with the Witten Laplacians
//   H+ = A B = -d^2/dx^2 + kappa^2 + kappa'   (acting on beta1 = (a1 + i a2)/sqrt2)
//   H- = B A = -d^2/dx^2 + kappa^2 - kappa'   (acting on beta2 = (a1 - i a2)/sqrt2).
// Every E != 0 in the gap shows up as E^2 in both factors with eigenfunctions tied by
// A; a kernel state lives in exactly one factor. The solver exploits this pairing to
// classify states and to reconstruct Dirac spinors from the scalar eigenfunctions.

namespace dwdirac {

struct WittenPair {
    Tridiag h_plus;
    Tridiag h_minus;
    Grid grid; // h_plus/h_minus act on the N-2 interior nodes (Dirichlet)
};

WittenPair build_witten_pair(const MassProfile& profile, const Grid& grid);

struct SolverOptions {
    double window = 0.0;    // report |E| <= window; 0 means 0.9*kappa_inf
    double tol = 1e-13;     // eigenvalue bisection tolerance
    double resid_tol = 0.0; // first-order residual warning level; 0 means 500*h^2*kinf^3
    bool richardson = true; // h and h/2 solves, lambda = (4*lam(h/2) - lam(h))/3
    int max_states = 64;
};

struct GapState {
    double E = 0.0;
    std::vector<std::complex<double>> up, down; // on all N grid nodes, ||psi||_h = 1
    double lambda_plus = -1.0;  // window eigenvalue of H+ behind this state (-1: none)
    double lambda_minus = -1.0; // same for H-
    double residual = 0.0;      // ||(D_h - E) psi||_h against the first-order operator
    bool zero_mode = false;     // unpaired kernel state, E set to 0 exactly
};

struct DiracSpectrum {
    std::vector<GapState> states; // ascending in E
    double window = 0.0;
    Grid grid;
    std::vector<std::string> warnings;
};

DiracSpectrum dirac_spectrum_in_gap(const MassProfile& profile, const Grid& grid,
                                    const SolverOptions& options = {});

} // namespace dwdirac

#pragma once

// Reduction of the gap eigenvalue problem onto the span of the shifted wall modes.
//
// With alpha*_j the shifted modes (right to left), the n x n reduced matrix is
//   M(delta, E) = A - E G - R(E),
//   A_ij = <alpha*_i, D alpha*_j>,  G_ij = <alpha*_i, alpha*_j>,
//   R_ij(E) = <P D alpha*_i, (D - E)|_perp^{-1} P D alpha*_j>,
// where P projects off span{alpha*_k}. E is a gap eigenvalue iff det M(delta, E) = 0,
// and M differs from the explicit tridiagonal leading part M0(delta) - E by
// O(exp(-4*kappa_inf*delta)) uniformly on compact subwindows of the gap.
//
// A and G come from adaptive quadrature of the analytic modes. R(E) is computed on a
// uniform grid: D alpha*_j is sampled, projected, and the restricted resolvent is
// applied by solving a bordered (KKT) system iteratively, with a complex-shifted
// pentadiagonal LU as the preconditioner and the exact KKT residual driving the
// updates. The border carries the grid modes and their sawtooth images
// (-1)^i * sigma1: the centered first-order discretization commutes with that map,
// so each near-zero mode has a spurious high-frequency twin that must be deflated
// along with it.

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dwdirac/grid.hpp"
#include "dwdirac/mass_profile.hpp"
#include "dwdirac/wall_modes.hpp"

namespace dwdirac {

// M0(delta): zero diagonal, super-diagonal -i*a, sub-diagonal +i*a, with the
// splitting scale a = 2*gamma^2*exp(-2*K(delta)) of the base wall.
Eigen::MatrixXcd leading_matrix(int n, double delta, const MassProfile& base_wall);

struct LeadingPairs {
    double a = 0.0;             // off-diagonal magnitude of M0
    std::vector<double> values; // 2a cos(k pi/(n+1)), ascending
    Eigen::MatrixXcd vectors;   // unit columns matching values
};

// Closed-form eigenpairs of M0 (a diagonal phase similarity maps M0 to the standard
// symmetric tridiagonal with constant off-diagonal a).
LeadingPairs leading_eigenpairs(int n, double delta, const MassProfile& base_wall);

// Leading-order gap eigenvalues. odd_kappa=true uses the odd-wall closed forms for
// any n; odd_kappa=false is available for n = 2 only, where the splitting becomes
// +-2*gamma^2*exp(-(K(delta) + K(-delta))).
std::vector<double> asymptotic_eigenvalues(int n, double delta, const MassProfile& base_wall,
                                           bool odd_kappa);

struct ApproximateEigenfunctions {
    LeadingPairs pairs;
    std::vector<ModeCombination> functions; // sum_j b^j alpha*_j, one per eigenvalue
};
ApproximateEigenfunctions approximate_eigenfunctions(int n, double delta,
                                                     const MassProfile& base_wall);

struct ReductionOptions {
    double h = 2e-3;          // resolvent grid spacing
    double pad = 14.0;        // box half-width is outermost center + pad/kappa_inf
    double window = 0.0;      // gap window K for det scans; 0 -> 0.9*kappa_inf
    double solve_tol = 1e-11; // relative residual accepted for the bordered solve
    double root_tol = 1e-18;  // absolute det-root tolerance, scaled by kappa_inf
    int scan_per_decade = 3;  // log-scan density toward E = 0
    int max_iterations = 200; // cap on preconditioned residual iterations per solve
};

struct ReducedMatrix {
    int n = 0;
    double delta = 0.0; // half-spacing for uniformly glued walls, 0 otherwise
    double E = 0.0;
    Eigen::MatrixXcd A, G, R;
    double window = 0.0;
    double hermiticity_defect = 0.0; // max |R - R^H| entry before symmetrization

    Eigen::MatrixXcd M() const { return A - E * G - R; }
};

// det of the Hermitized M (real by construction).
double reduced_det(const ReducedMatrix& m);

struct Corrector {
    Eigen::VectorXcd b;
    std::vector<std::complex<double>> eta_up, eta_down;
    Grid grid{0.0, 0};
    double norm = 0.0;         // grid L2 norm of eta
    double ortho_defect = 0.0; // max_j |<alpha*_j, eta>|
};

// Owns the glued profile, its modes, and the resolvent grid; ReducedMatrix
// snapshots at different E are independent, so evaluations may run concurrently
// from the caller's side on separate contexts.
class ReductionContext {
  public:
    explicit ReductionContext(const MassProfile& profile, ReductionOptions options = {});

    int n() const { return static_cast<int>(modes_.size()); }
    const MassProfile& profile() const { return profile_; }
    const Grid& grid() const { return grid_; }
    double window() const { return window_; }
    const ReductionOptions& options() const { return options_; }
    const std::vector<AnalyticMode>& modes() const { return modes_; }

    ReducedMatrix assemble(double E) const;

    // eta = -sum_j b_j (D - E)|_perp^{-1} P D alpha*_j
    Corrector corrector(const Eigen::VectorXcd& b, double E) const;

    // ||(D_h - E) psi_b|| and ||(D_h - E)(psi_b + eta)|| for psi_b = sum_j b_j alpha*_j:
    // how much the corrector improves the eigenfunction residual.
    std::pair<double, double> corrected_residuals(const Eigen::VectorXcd& b, double E) const;

  private:
    struct Solves;
    Solves solve_all(double E) const;

    MassProfile profile_;
    ReductionOptions options_;
    Grid grid_{0.0, 0};
    double window_ = 0.0;
    std::vector<AnalyticMode> modes_;
    Eigen::MatrixXcd a_, g_;                     // quadrature matrices
    std::vector<double> kappa_;                  // kappa on the grid
    Eigen::MatrixXcd mode_vals_;                 // 2N x n raw mode samples
    Eigen::MatrixXcd basis_;                     // 2N x 2n orthonormal border columns
    Eigen::MatrixXcd rhs_;                       // 2N x n projected D alpha*_j samples
};

struct RootReport {
    std::vector<double> roots; // ascending
    std::vector<std::string> warnings;
};

// All roots of det M(delta, .) in (-window, window).
RootReport det_roots(const ReductionContext& ctx, double window = 0.0);

Corrector reconstruct_corrector(const ReductionContext& ctx, const Eigen::VectorXcd& b,
                                double E);

} // namespace dwdirac

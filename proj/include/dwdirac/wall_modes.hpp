#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "dwdirac/mass_profile.hpp"

// Exact and near-zero modes of D = i*sigma3*d/dx + kappa(x)*sigma1 built from wall
// kernels: a rising wall at c carries the L^2 kernel element gamma*(1, i)^T*exp(-K(x-c)),
// a falling wall the conjugate direction (1, -i)^T.

namespace dwdirac {

using complexd = std::complex<double>;

struct Spinor2 {
    complexd up{0.0, 0.0};
    complexd down{0.0, 0.0};
};

class AnalyticMode {
  public:
    AnalyticMode(int sign, double center, double gamma,
                 std::shared_ptr<const Antiderivative> K);

    int sign() const { return sign_; }
    double center() const { return center_; }
    double gamma() const { return gamma_; }
    const Antiderivative& antiderivative_used() const { return *K_; }

    double envelope(double x) const { return std::exp(-(*K_)(x - center_)); }
    Spinor2 operator()(double x) const;

  private:
    int sign_;
    double center_;
    double gamma_; // shared normalization 1/(sqrt(2)*||exp(-K)||)
    std::shared_ptr<const Antiderivative> K_;
};

// Normalized kernel element of a single wall (sign = -1 for the flipped wall -kappa).
AnalyticMode zero_mode(const MassProfile& wall, int sign = +1);

// One translated kernel candidate per wall of a glued profile, ordered right to left
// (descending centers), all sharing the base wall's normalization.
std::vector<AnalyticMode> shifted_modes(const MassProfile& glued);

// Exact normalized kernel gamma*(1, i)^T*exp(-K(x)) of the full profile, including any
// bump. Exists iff kappa has opposite signs at -inf/+inf (odd wall count); otherwise
// throws no_exact_zero_mode.
AnalyticMode exact_zero_mode(const MassProfile& profile);

// (D mode)(x) for the full profile's kappa; vanishes identically when the mode's
// antiderivative belongs to the profile itself.
Spinor2 dirac_apply(const MassProfile& profile, const AnalyticMode& mode, double x);

// ||D mode||_{L^2}, the defect of a translated single-wall kernel inside the glued
// profile. Decays like exp(-kappa_inf * distance to the nearest other wall), i.e.
// exp(-2*kappa_inf*delta) at half-spacing delta.
double residual_norm(const MassProfile& profile, const AnalyticMode& mode);

// Finite combination sum_j coeff[j]*modes[j], e.g. a reduced-space eigenvector.
struct ModeCombination {
    std::vector<complexd> coeff;
    std::vector<AnalyticMode> modes;
    Spinor2 operator()(double x) const;
};

} // namespace dwdirac

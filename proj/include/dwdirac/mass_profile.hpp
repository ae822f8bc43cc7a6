#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "dwdirac/errors.hpp"
#include "dwdirac/quadrature.hpp"

// Mass functions kappa for the 1D Dirac operator D = i*sigma3*d/dx + kappa(x)*sigma1.
// A single wall is a monotone transition -kappa_inf -> +kappa_inf centered at 0;
// glued profiles place n translated copies with alternating orientation, the
// rightmost wall always rising (kappa(+inf) = +kappa_inf).

namespace dwdirac {

enum class WallKind { mollifier, tanh_wall, sgn, custom };

struct Wall {
    double center;
    int sign; // +1 rising through the wall, -1 falling
};

struct Bump {
    double amplitude;
    double center;
    double width; // support [center - width, center + width]
};

class MassProfile {
  public:
    double kappa(double x) const;
    double kappa_prime(double x) const;

    double kappa_inf() const { return kappa_inf_; }
    WallKind kind() const { return kind_; }
    const std::vector<Wall>& walls() const { return walls_; }
    double core_half_width() const { return core_half_width_; }
    bool single_wall() const { return walls_.size() == 1; }
    std::optional<double> half_spacing() const { return half_spacing_; }
    const std::optional<Bump>& bump() const { return bump_; }

    // The single wall a glued profile was built from (the profile itself if single).
    const MassProfile& base_wall() const { return base_ ? *base_ : *this; }

    // Adds a compactly supported smooth bump amplitude*exp(1 - 1/(1-u^2)), u=(x-center)/width.
    MassProfile with_bump(double amplitude, double center, double width) const;

    friend MassProfile make_single_wall(WallKind kind, double kappa_inf);
    friend MassProfile make_custom_wall(std::vector<double> sample_x, std::vector<double> sample_kappa,
                                        double kappa_inf, double core_half_width);
    friend MassProfile glue_walls_at(const MassProfile& base, const std::vector<double>& centers);
    friend class Antiderivative;

  private:
    MassProfile() = default;
    double shape(double y) const;       // single-wall transition, sign +1, centered at 0
    double shape_prime(double y) const;
    int region_of(double x) const;

    WallKind kind_ = WallKind::mollifier;
    double kappa_inf_ = 1.0;
    double core_half_width_ = 1.0;
    std::vector<Wall> walls_;
    std::vector<double> midpoints_; // region boundaries between consecutive walls
    std::optional<double> half_spacing_;
    std::optional<Bump> bump_;
    std::shared_ptr<const MassProfile> base_;
    std::vector<double> custom_x_, custom_k_; // custom kind samples
};

MassProfile make_single_wall(WallKind kind, double kappa_inf);

// Single wall from samples of the transition; outside the sampled range the profile
// is +/-kappa_inf. Samples must straddle zero and end at the asymptotic values.
MassProfile make_custom_wall(std::vector<double> sample_x, std::vector<double> sample_kappa,
                             double kappa_inf, double core_half_width);

// n walls at centers -(n-1)*delta, -(n-3)*delta, ..., (n-1)*delta (spacing 2*delta).
MassProfile glue_walls(const MassProfile& base, int n, double half_spacing);

// Arbitrary strictly increasing centers (no closed-form asymptotics downstream).
MassProfile glue_walls_at(const MassProfile& base, const std::vector<double>& centers);

// Kinks and support edges of kappa (wall centers, core edges, region midpoints, bump
// edges) clipped to [a, b], sorted, with a and b appended. Integrators and steppers
// split on these so each piece is smooth.
std::vector<double> profile_breakpoints(const MassProfile& profile, double a, double b);

// K(x) = int_0^x kappa(y) dy. Closed forms for tanh (kappa_inf*log cosh) and sgn
// (kappa_inf*|x|); cached panel quadrature for the mollifier core; exact integral of
// the interpolant for custom walls. Glued profiles use per-region translates of the
// base antiderivative with continuity offsets.
class Antiderivative {
  public:
    explicit Antiderivative(const MassProfile& profile, double tol = 1e-10);

    double operator()(double x) const;
    double tol() const { return tol_; }
    const MassProfile& profile() const { return profile_; }

    // K(x) ~ kappa_inf*(|x| - c0) outside the core of a compact single wall.
    double flat_tail_offset() const { return c0_; }

  private:
    double base_k(double y) const; // antiderivative of the base wall shape
    double bump_term(double x) const;

    MassProfile profile_;
    double tol_;
    double c0_ = 0.0;
    std::vector<double> core_prefix_;   // mollifier: prefix integrals on [0,1] panels
    int core_panels_ = 0;
    std::vector<double> offsets_;       // glued: per-region continuity offsets
    std::vector<double> bump_prefix_;   // bump: prefix integrals on [-1,1] panels
    int bump_panels_ = 0;
    double bump_total_ = 0.0;
    std::vector<double> custom_prefix_; // custom: cumulative integral at sample points
};

Antiderivative antiderivative(const MassProfile& profile, double tol = 1e-10);

} // namespace dwdirac

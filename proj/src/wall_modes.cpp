#include "dwdirac/wall_modes.hpp"

#include <algorithm>
#include <cmath>

#include "dwdirac/quadrature.hpp"

namespace dwdirac {

namespace {

double truncation_radius(const MassProfile& p) {
    const double core = std::isfinite(p.core_half_width()) ? p.core_half_width() : 0.0;
    return 40.0 / p.kappa_inf() + std::max(1.0, core);
}

QuadratureOptions mode_integral_options() {
    QuadratureOptions opt;
    opt.abs_tol = 1e-300; // pure relative control: these integrals can be ~exp(-4*kinf*delta)
    opt.rel_tol = 1e-12;
    opt.max_intervals = 8000;
    return opt;
}

double kernel_gamma(const Antiderivative& K) {
    const MassProfile& p = K.profile();
    const double T = truncation_radius(p);
    const double lo = p.walls().front().center - T;
    const double hi = p.walls().back().center + T;
    auto opt = mode_integral_options();
    opt.rel_tol = 1e-13;
    const double norm2 = integrate_split_or_throw(
        [&](double x) {
            const double e = std::exp(-K(x));
            return e * e;
        },
        profile_breakpoints(p, lo, hi), opt);
    return 1.0 / std::sqrt(2.0 * norm2);
}

} // namespace

AnalyticMode::AnalyticMode(int sign, double center, double gamma,
                           std::shared_ptr<const Antiderivative> K)
    : sign_(sign), center_(center), gamma_(gamma), K_(std::move(K)) {}

Spinor2 AnalyticMode::operator()(double x) const {
    const double v = gamma_ * envelope(x);
    return {complexd(v, 0.0), complexd(0.0, sign_ * v)};
}

AnalyticMode zero_mode(const MassProfile& wall, int sign) {
    if (!wall.single_wall())
        throw invalid_parameter("zero_mode takes a single wall; use shifted_modes for glued profiles");
    if (sign != +1 && sign != -1) throw invalid_parameter("wall orientation must be +1 or -1");
    auto K = std::make_shared<const Antiderivative>(wall);
    const double g = kernel_gamma(*K);
    return AnalyticMode(sign, wall.walls()[0].center, g, std::move(K));
}

std::vector<AnalyticMode> shifted_modes(const MassProfile& glued) {
    auto K = std::make_shared<const Antiderivative>(glued.base_wall());
    const double g = kernel_gamma(*K);
    std::vector<AnalyticMode> out;
    out.reserve(glued.walls().size());
    for (auto it = glued.walls().rbegin(); it != glued.walls().rend(); ++it)
        out.emplace_back(it->sign, it->center, g, K);
    return out;
}

AnalyticMode exact_zero_mode(const MassProfile& profile) {
    if (profile.walls().front().sign != +1)
        throw no_exact_zero_mode("kappa has the same sign at both infinities (even wall count)");
    auto K = std::make_shared<const Antiderivative>(profile);
    const double g = kernel_gamma(*K);
    return AnalyticMode(+1, 0.0, g, std::move(K));
}

Spinor2 dirac_apply(const MassProfile& profile, const AnalyticMode& mode, double x) {
    const MassProfile& mp = mode.antiderivative_used().profile();
    const double s = mode.sign();
    const double f = mode.gamma() * mode.envelope(x) *
                     (profile.kappa(x) - s * mp.kappa(x - mode.center()));
    return {complexd(0.0, s * f), complexd(f, 0.0)};
}

double residual_norm(const MassProfile& profile, const AnalyticMode& mode) {
    const MassProfile& mp = mode.antiderivative_used().profile();
    const double s = mode.sign();
    const double c = mode.center();
    const double T = truncation_radius(profile);
    const double lo = std::min(profile.walls().front().center, c) - T;
    const double hi = std::max(profile.walls().back().center, c) + T;

    auto pts = profile_breakpoints(profile, lo, hi);
    if (std::isfinite(mp.core_half_width())) {
        // the translated mode wall has its own kinks
        for (double e : {c - mp.core_half_width(), c, c + mp.core_half_width()})
            if (e > lo && e < hi) pts.push_back(e);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    }

    const double I = integrate_split_or_throw(
        [&](double x) {
            const double d = profile.kappa(x) - s * mp.kappa(x - c);
            const double e = mode.envelope(x);
            return d * d * e * e;
        },
        pts, mode_integral_options());
    return mode.gamma() * std::sqrt(2.0 * I);
}

Spinor2 ModeCombination::operator()(double x) const {
    Spinor2 v;
    for (size_t j = 0; j < modes.size(); ++j) {
        const Spinor2 m = modes[j](x);
        v.up += coeff[j] * m.up;
        v.down += coeff[j] * m.down;
    }
    return v;
}

} // namespace dwdirac

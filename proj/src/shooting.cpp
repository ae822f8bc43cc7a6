#include "dwdirac/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>

#include "dwdirac/roots.hpp"

namespace dwdirac {

namespace {

using complexd = std::complex<double>;

struct Vec2 {
    complexd a, b;
};

// y' = M(x) y, M = [[-iE, i kappa], [-i kappa, iE]]
inline Vec2 apply_m(double kap, double E, const Vec2& y) {
    return {complexd(0.0, -E) * y.a + complexd(0.0, kap) * y.b,
            complexd(0.0, -kap) * y.a + complexd(0.0, E) * y.b};
}

// positive real rescaling keeps W on its line in the complex plane
inline void renorm(Vec2& y) {
    const double m = std::max(std::abs(y.a), std::abs(y.b));
    if (m > 0.0) {
        y.a /= m;
        y.b /= m;
    }
}

// M^2 = (kappa^2 - E^2) I, so exp(t M) = cosh(mu t) + sinh(mu t)/mu * M exactly
void flat_step(double kap, double E, double t, Vec2& y) {
    const double mu = std::sqrt(std::max(kap * kap - E * E, 0.0));
    const int chunks = std::max(1, static_cast<int>(std::ceil(std::abs(mu * t) / 200.0)));
    const double dt = t / chunks;
    const double ch = std::cosh(mu * dt);
    const double sh = mu > 0.0 ? std::sinh(mu * dt) / mu : dt;
    for (int k = 0; k < chunks; ++k) {
        const Vec2 my = apply_m(kap, E, y);
        y = {ch * y.a + sh * my.a, ch * y.b + sh * my.b};
        renorm(y);
    }
}

void rk4_piece(const MassProfile& p, double E, double x0, double x1, double hmax, Vec2& y) {
    const double len = x1 - x0;
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(len) / hmax)));
    const double h = len / n;
    for (int i = 0; i < n; ++i) {
        const double x = x0 + i * h;
        const double ka = p.kappa(x);
        const double km = p.kappa(x + 0.5 * h);
        const double kb = p.kappa(x + h);
        const Vec2 f1 = apply_m(ka, E, y);
        const Vec2 f2 = apply_m(km, E, {y.a + 0.5 * h * f1.a, y.b + 0.5 * h * f1.b});
        const Vec2 f3 = apply_m(km, E, {y.a + 0.5 * h * f2.a, y.b + 0.5 * h * f2.b});
        const Vec2 f4 = apply_m(kb, E, {y.a + h * f3.a, y.b + h * f3.b});
        y.a += h / 6.0 * (f1.a + 2.0 * (f2.a + f3.a) + f4.a);
        y.b += h / 6.0 * (f1.b + 2.0 * (f2.b + f3.b) + f4.b);
        renorm(y);
    }
}

// radius around a wall center outside of which kappa is treated as constant
double flat_radius(const MassProfile& p) {
    switch (p.kind()) {
        case WallKind::mollifier:
        case WallKind::custom:
            return p.core_half_width();
        case WallKind::sgn:
            return 0.0;
        case WallKind::tanh_wall:
            return 20.0 / p.kappa_inf(); // 1 - tanh(20) ~ 1e-17
    }
    return p.core_half_width();
}

bool piece_is_flat(const MassProfile& p, double xm, double r) {
    if (p.kind() == WallKind::custom) return false; // sample extent is not exposed
    if (p.bump()) {
        if (std::abs(xm - p.bump()->center) < p.bump()->width) return false;
    }
    for (const auto& w : p.walls())
        if (std::abs(xm - w.center) < r) return false;
    return true;
}

// propagate y from x_from to x_to (either direction), splitting at kappa's kinks
void propagate(const MassProfile& p, double E, double x_from, double x_to, double hmax,
               Vec2& y) {
    const double lo = std::min(x_from, x_to), hi = std::max(x_from, x_to);
    auto pts = profile_breakpoints(p, lo, hi);
    const double r = flat_radius(p);
    if (p.kind() == WallKind::tanh_wall) {
        for (const auto& w : p.walls())
            for (double e : {w.center - r, w.center + r})
                if (e > lo && e < hi) pts.push_back(e);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    }
    if (x_from > x_to) std::reverse(pts.begin(), pts.end());
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        const double xm = 0.5 * (pts[i] + pts[i + 1]);
        if (piece_is_flat(p, xm, r))
            flat_step(p.kappa(xm), E, pts[i + 1] - pts[i], y);
        else
            rk4_piece(p, E, pts[i], pts[i + 1], hmax, y);
    }
}

struct Domain {
    double X;       // integrate on [-X, X]
    double m_left;  // kappa(-X)
    double m_right; // kappa(+X)
    bool use_imag;  // matching component: Im W if the asymptotic signs agree, else Re W
};

Domain shooting_domain(const MassProfile& p, const ShootingOptions& opt) {
    if (!(opt.x_pad > 0.0) || !(opt.step > 0.0))
        throw invalid_parameter("x_pad and step must be positive");
    const double kinf = p.kappa_inf();
    double reach =
        std::max(std::abs(p.walls().front().center), std::abs(p.walls().back().center));
    if (p.bump()) reach = std::max(reach, std::abs(p.bump()->center) + p.bump()->width);

    Domain d;
    d.X = reach + opt.x_pad / kinf;
    // custom samples may extend past the declared core: push out until kappa settles
    const double probe = 10.0 / kinf;
    for (int i = 0; i < 64; ++i) {
        if (std::abs(p.kappa(-d.X - probe) - p.kappa(-d.X)) <= 1e-12 * kinf &&
            std::abs(p.kappa(d.X + probe) - p.kappa(d.X)) <= 1e-12 * kinf)
            break;
        d.X += probe;
    }
    d.m_left = p.kappa(-d.X);
    d.m_right = p.kappa(d.X);
    if (std::abs(std::abs(d.m_left) - std::abs(d.m_right)) > 1e-9 * kinf)
        throw not_implemented("shooting needs equal asymptotic masses on both sides");
    d.use_imag = d.m_left * d.m_right > 0.0;
    return d;
}

complexd wronskian(const MassProfile& p, double E, const Domain& d, double hmax) {
    const double muL = std::sqrt(d.m_left * d.m_left - E * E);
    const double muR = std::sqrt(d.m_right * d.m_right - E * E);
    Vec2 u{complexd(0.0, d.m_left), complexd(muL, E)};  // decays toward -inf
    Vec2 w{complexd(0.0, d.m_right), complexd(-muR, E)}; // decays toward +inf
    renorm(u);
    renorm(w);
    propagate(p, E, -d.X, 0.0, hmax, u);
    propagate(p, E, d.X, 0.0, hmax, w);
    const complexd det = u.a * w.b - u.b * w.a;
    if (!std::isfinite(det.real()) || !std::isfinite(det.imag()))
        throw integration_failure("shooting: propagation overflowed despite renormalization");
    return det;
}

double mismatch_at(const MassProfile& p, double E, const Domain& d, double hmax) {
    const complexd w = wronskian(p, E, d, hmax);
    return d.use_imag ? w.imag() : w.real();
}

} // namespace

double shooting_mismatch(const MassProfile& profile, double E, const ShootingOptions& options) {
    const Domain d = shooting_domain(profile, options);
    if (std::abs(E) >= std::min(std::abs(d.m_left), std::abs(d.m_right)))
        throw invalid_parameter("energy lies outside the spectral gap");
    const double hmax = options.step / std::max(1.0, profile.kappa_inf());
    return mismatch_at(profile, E, d, hmax);
}

ShootingResult shooting_oracle(const MassProfile& profile, const ShootingOptions& options) {
    const double kinf = profile.kappa_inf();
    if (options.window < 0.0)
        throw invalid_window("window must be positive (or 0 for the default)");
    const double W = options.window == 0.0 ? 0.9 * kinf : options.window;
    if (W >= kinf) throw invalid_window("window must lie inside the gap (-kappa_inf, kappa_inf)");
    if (options.max_roots < 1) throw invalid_parameter("max_roots must be at least 1");

    const Domain d = shooting_domain(profile, options);
    const double hmax = options.step / std::max(1.0, kinf);
    const double Wq = std::min(W, 0.999 * std::min(std::abs(d.m_left), std::abs(d.m_right)));

    // scan grid: coarse linear sweep, log-spaced points toward 0 (near-degenerate
    // splittings shrink like exp(-2*kappa_inf*delta)), local clusters around hints
    std::vector<double> es;
    const int n_lin = 20 * static_cast<int>(profile.walls().size());
    for (int i = 0; i <= n_lin; ++i) es.push_back(-Wq + 2.0 * Wq * i / n_lin);
    const int per_dec = std::max(2, options.scan_per_decade);
    for (int k = 1; k <= 13 * per_dec; ++k) {
        const double v = Wq * std::pow(10.0, -static_cast<double>(k) / per_dec);
        es.push_back(v);
        es.push_back(-v);
    }
    es.push_back(0.0);
    for (double hint : options.hints) {
        if (!std::isfinite(hint)) throw invalid_parameter("hints must be finite");
        for (double f : {0.75, 0.9, 1.0, 1.1, 1.25}) {
            const double v = hint * f;
            if (std::abs(v) < Wq) es.push_back(v);
        }
    }
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end(),
                         [&](double x, double y) { return std::abs(x - y) < 1e-15 * kinf; }),
             es.end());

    std::vector<double> ms(es.size());
    for (size_t i = 0; i < es.size(); ++i) ms[i] = mismatch_at(profile, es[i], d, hmax);

    ShootingResult out;
    out.window = W;
    auto f = [&](double E) { return mismatch_at(profile, E, d, hmax); };
    const double xtol = options.root_tol * kinf;
    // below this the renormalized Wronskian is numerical noise and signs mean nothing
    const double noise_floor = 1e-13;
    bool noisy = false;
    std::vector<double> roots;
    for (size_t i = 0; i + 1 < es.size(); ++i) {
        if (ms[i] == 0.0) {
            roots.push_back(es[i]);
            continue;
        }
        if (ms[i] * ms[i + 1] >= 0.0) continue;
        if (std::abs(ms[i]) < noise_floor && std::abs(ms[i + 1]) < noise_floor) {
            noisy = true;
            continue;
        }
        roots.push_back(brent_root(f, es[i], es[i + 1], ms[i], ms[i + 1], xtol));
    }
    if (noisy)
        out.warnings.push_back(
            "matching function is below the noise floor near some sign changes; "
            "close-to-degenerate levels there are not resolvable in double precision");

    std::sort(roots.begin(), roots.end());
    const double merge_tol = std::max(4.0 * xtol, 1e-12 * kinf);
    for (double r : roots) {
        if (!out.energies.empty() && r - out.energies.back() < merge_tol) continue;
        if (std::abs(r) > W) continue;
        out.energies.push_back(r);
    }
    if (out.energies.size() > static_cast<size_t>(options.max_roots))
        throw invalid_window("window contains more eigenvalues than max_roots");
    for (double r : out.energies)
        if (Wq - std::abs(r) < 0.02 * Wq) {
            out.warnings.push_back("eigenvalue close to the window edge; levels just outside "
                                   "may be missing");
            break;
        }
    return out;
}

} // namespace dwdirac

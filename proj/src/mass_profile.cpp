#include "dwdirac/mass_profile.hpp"

#include <algorithm>
#include <cmath>

namespace dwdirac {

namespace {

double nu(double xi) { return xi > 0.0 ? std::exp(-1.0 / xi) : 0.0; }
double nu_prime(double xi) { return xi > 0.0 ? std::exp(-1.0 / xi) / (xi * xi) : 0.0; }

double bump_shape(double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

double bump_shape_prime(double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    const double d = 1.0 - u * u;
    return bump_shape(u) * (-2.0 * u / (d * d));
}

double stable_log_cosh(double y) {
    const double a = std::abs(y);
    if (a < 20.0) return std::log(std::cosh(y));
    return a - M_LN2 + std::log1p(std::exp(-2.0 * a));
}

void check_kappa_inf(double kappa_inf) {
    if (!(kappa_inf > 0.0) || !std::isfinite(kappa_inf))
        throw invalid_parameter("kappa_inf must be positive and finite");
}

} // namespace

double MassProfile::shape(double y) const {
    switch (kind_) {
        case WallKind::mollifier: {
            if (y >= 1.0) return kappa_inf_;
            if (y <= -1.0) return -kappa_inf_;
            const double t = 0.5 * (y + 1.0);
            const double a = nu(t), b = nu(1.0 - t);
            return kappa_inf_ * (2.0 * a / (a + b) - 1.0);
        }
        case WallKind::tanh_wall:
            return kappa_inf_ * std::tanh(y);
        case WallKind::sgn:
            return y > 0.0 ? kappa_inf_ : (y < 0.0 ? -kappa_inf_ : 0.0);
        case WallKind::custom: {
            if (y <= custom_x_.front()) return -kappa_inf_;
            if (y >= custom_x_.back()) return kappa_inf_;
            auto it = std::upper_bound(custom_x_.begin(), custom_x_.end(), y);
            size_t i = static_cast<size_t>(it - custom_x_.begin());
            const double t = (y - custom_x_[i - 1]) / (custom_x_[i] - custom_x_[i - 1]);
            return custom_k_[i - 1] + t * (custom_k_[i] - custom_k_[i - 1]);
        }
    }
    return 0.0;
}

double MassProfile::shape_prime(double y) const {
    switch (kind_) {
        case WallKind::mollifier: {
            if (std::abs(y) >= 1.0) return 0.0;
            const double t = 0.5 * (y + 1.0);
            const double a = nu(t), b = nu(1.0 - t);
            const double da = nu_prime(t), db = nu_prime(1.0 - t);
            const double s = a + b;
            return kappa_inf_ * (da * b + a * db) / (s * s);
        }
        case WallKind::tanh_wall: {
            const double c = std::cosh(std::min(std::abs(y), 350.0));
            return kappa_inf_ / (c * c);
        }
        case WallKind::sgn:
            return 0.0;
        case WallKind::custom: {
            if (y <= custom_x_.front() || y >= custom_x_.back()) return 0.0;
            auto it = std::upper_bound(custom_x_.begin(), custom_x_.end(), y);
            size_t i = static_cast<size_t>(it - custom_x_.begin());
            return (custom_k_[i] - custom_k_[i - 1]) / (custom_x_[i] - custom_x_[i - 1]);
        }
    }
    return 0.0;
}

int MassProfile::region_of(double x) const {
    if (midpoints_.empty()) return 0;
    return static_cast<int>(std::upper_bound(midpoints_.begin(), midpoints_.end(), x) -
                            midpoints_.begin());
}

double MassProfile::kappa(double x) const {
    const int r = region_of(x);
    double v = walls_[r].sign * shape(x - walls_[r].center);
    if (bump_) v += bump_->amplitude * bump_shape((x - bump_->center) / bump_->width);
    return v;
}

double MassProfile::kappa_prime(double x) const {
    const int r = region_of(x);
    double v = walls_[r].sign * shape_prime(x - walls_[r].center);
    if (bump_)
        v += bump_->amplitude / bump_->width * bump_shape_prime((x - bump_->center) / bump_->width);
    return v;
}

MassProfile MassProfile::with_bump(double amplitude, double center, double width) const {
    if (!(width > 0.0) || !std::isfinite(amplitude) || !std::isfinite(center))
        throw invalid_parameter("bump needs finite amplitude/center and positive width");
    if (bump_) throw invalid_parameter("profile already carries a bump");
    MassProfile out = *this;
    out.bump_ = Bump{amplitude, center, width};
    return out;
}

MassProfile make_single_wall(WallKind kind, double kappa_inf) {
    check_kappa_inf(kappa_inf);
    if (kind == WallKind::custom)
        throw invalid_parameter("custom walls are built with make_custom_wall");
    MassProfile p;
    p.kind_ = kind;
    p.kappa_inf_ = kappa_inf;
    p.core_half_width_ =
        kind == WallKind::tanh_wall ? std::numeric_limits<double>::infinity()
                                    : (kind == WallKind::sgn ? 0.0 : 1.0);
    p.walls_ = {{0.0, +1}};
    return p;
}

MassProfile make_custom_wall(std::vector<double> sample_x, std::vector<double> sample_kappa,
                             double kappa_inf, double core_half_width) {
    check_kappa_inf(kappa_inf);
    if (sample_x.size() != sample_kappa.size() || sample_x.size() < 2)
        throw invalid_parameter("custom wall needs >= 2 matching samples");
    for (size_t i = 1; i < sample_x.size(); ++i)
        if (!(sample_x[i] > sample_x[i - 1]))
            throw invalid_parameter("custom wall samples must be strictly increasing in x");
    if (!(sample_kappa.front() < 0.0) || !(sample_kappa.back() > 0.0))
        throw invalid_parameter("custom wall must rise from negative to positive values");
    if (!(core_half_width > 0.0) || !std::isfinite(core_half_width))
        throw invalid_parameter("custom wall needs finite positive core_half_width");
    MassProfile p;
    p.kind_ = WallKind::custom;
    p.kappa_inf_ = kappa_inf;
    p.core_half_width_ = core_half_width;
    p.walls_ = {{0.0, +1}};
    p.custom_x_ = std::move(sample_x);
    p.custom_k_ = std::move(sample_kappa);
    return p;
}

MassProfile glue_walls_at(const MassProfile& base, const std::vector<double>& centers) {
    if (!base.single_wall() || base.walls()[0].sign != +1 || base.walls()[0].center != 0.0)
        throw invalid_parameter("glue needs a single rising wall centered at 0");
    if (base.bump()) throw invalid_parameter("glue the walls first, then add the bump");
    const int n = static_cast<int>(centers.size());
    if (n < 1) throw invalid_parameter("need at least one wall");
    if (n == 1 && centers[0] == 0.0) return base;

    const bool compact = std::isfinite(base.core_half_width());
    for (int j = 1; j < n; ++j) {
        if (!(centers[j] > centers[j - 1]))
            throw invalid_parameter("wall centers must be strictly increasing");
        const double half_gap = 0.5 * (centers[j] - centers[j - 1]);
        if (compact && (half_gap <= 1.0 || half_gap <= base.core_half_width()))
            throw spacing_too_small("wall half-spacing must exceed max(1, core half-width)");
        if (!compact && !(half_gap > 0.0))
            throw invalid_parameter("wall spacing must be positive");
    }

    MassProfile p;
    p.kind_ = base.kind();
    p.kappa_inf_ = base.kappa_inf();
    p.core_half_width_ = base.core_half_width();
    p.custom_x_ = base.custom_x_;
    p.custom_k_ = base.custom_k_;
    p.base_ = std::make_shared<MassProfile>(base);
    for (int j = 0; j < n; ++j)
        p.walls_.push_back({centers[j], (n - 1 - j) % 2 == 0 ? +1 : -1});
    for (int j = 0; j + 1 < n; ++j)
        p.midpoints_.push_back(0.5 * (centers[j] + centers[j + 1]));
    if (n >= 2) {
        const double gap = centers[1] - centers[0];
        bool uniform = true;
        for (int j = 1; j + 1 < n; ++j)
            if (std::abs((centers[j + 1] - centers[j]) - gap) > 1e-12 * std::max(1.0, gap))
                uniform = false;
        if (uniform) p.half_spacing_ = 0.5 * gap;
    }
    return p;
}

std::vector<double> profile_breakpoints(const MassProfile& p, double a, double b) {
    std::vector<double> pts;
    const bool compact = std::isfinite(p.core_half_width());
    for (const auto& w : p.walls()) {
        pts.push_back(w.center);
        if (compact) {
            pts.push_back(w.center - p.core_half_width());
            pts.push_back(w.center + p.core_half_width());
        }
    }
    for (size_t j = 0; j + 1 < p.walls().size(); ++j)
        pts.push_back(0.5 * (p.walls()[j].center + p.walls()[j + 1].center));
    if (p.bump()) {
        pts.push_back(p.bump()->center - p.bump()->width);
        pts.push_back(p.bump()->center);
        pts.push_back(p.bump()->center + p.bump()->width);
    }
    std::vector<double> out{a};
    std::sort(pts.begin(), pts.end());
    for (double x : pts)
        if (x > a && x < b && x - out.back() > 1e-12) out.push_back(x);
    out.push_back(b);
    return out;
}

MassProfile glue_walls(const MassProfile& base, int n, double half_spacing) {
    if (n < 1) throw invalid_parameter("need at least one wall");
    if (!std::isfinite(half_spacing)) throw invalid_parameter("half_spacing must be finite");
    if (n == 1) return base;
    std::vector<double> centers;
    for (int j = 1; j <= n; ++j) centers.push_back((2.0 * j - n - 1) * half_spacing);
    return glue_walls_at(base, centers);
}

// ---- Antiderivative ----

namespace {
constexpr int kCorePanels = 64;
constexpr int kBumpPanels = 32;
} // namespace

Antiderivative::Antiderivative(const MassProfile& profile, double tol)
    : profile_(profile), tol_(tol) {
    switch (profile_.kind()) {
        case WallKind::mollifier: {
            core_panels_ = kCorePanels;
            core_prefix_.assign(core_panels_ + 1, 0.0);
            auto f = [this](double y) { return profile_.shape(y); };
            for (int k = 0; k < core_panels_; ++k) {
                const double a = static_cast<double>(k) / core_panels_;
                const double b = static_cast<double>(k + 1) / core_panels_;
                core_prefix_[k + 1] = core_prefix_[k] + gk15_panel(f, a, b).value;
            }
            c0_ = 1.0 - core_prefix_[core_panels_] / profile_.kappa_inf();
            break;
        }
        case WallKind::tanh_wall:
            c0_ = M_LN2;
            break;
        case WallKind::sgn:
            c0_ = 0.0;
            break;
        case WallKind::custom: {
            const auto& xs = profile_.custom_x_;
            const auto& ks = profile_.custom_k_;
            custom_prefix_.assign(xs.size(), 0.0);
            for (size_t i = 1; i < xs.size(); ++i)
                custom_prefix_[i] = custom_prefix_[i - 1] +
                                    0.5 * (ks[i] + ks[i - 1]) * (xs[i] - xs[i - 1]);
            // shift so the cumulative vanishes at y = 0
            double cum0;
            if (xs.front() >= 0.0)
                cum0 = -profile_.kappa_inf() * xs.front(); // not expected; walls straddle 0
            else {
                auto it = std::upper_bound(xs.begin(), xs.end(), 0.0);
                size_t i = static_cast<size_t>(it - xs.begin());
                const double t = (0.0 - xs[i - 1]) / (xs[i] - xs[i - 1]);
                const double km = ks[i - 1] + t * (ks[i] - ks[i - 1]);
                cum0 = custom_prefix_[i - 1] + 0.5 * (ks[i - 1] + km) * (0.0 - xs[i - 1]);
            }
            for (auto& v : custom_prefix_) v -= cum0;
            c0_ = xs.back() - (custom_prefix_.back()) / profile_.kappa_inf();
            break;
        }
    }

    if (profile_.bump()) {
        bump_panels_ = kBumpPanels;
        bump_prefix_.assign(bump_panels_ + 1, 0.0);
        for (int k = 0; k < bump_panels_; ++k) {
            const double a = -1.0 + 2.0 * k / bump_panels_;
            const double b = -1.0 + 2.0 * (k + 1) / bump_panels_;
            bump_prefix_[k + 1] = bump_prefix_[k] + gk15_panel(bump_shape, a, b).value;
        }
        bump_total_ = bump_prefix_[bump_panels_];
    }

    // glued profiles: per-region offsets making K continuous with K(0) = 0
    const auto& walls = profile_.walls_;
    const auto& mids = profile_.midpoints_;
    offsets_.assign(walls.size(), 0.0);
    const int r0 = profile_.region_of(0.0);
    offsets_[r0] = -walls[r0].sign * base_k(-walls[r0].center);
    for (int r = r0 + 1; r < static_cast<int>(walls.size()); ++r) {
        const double m = mids[r - 1];
        offsets_[r] = walls[r - 1].sign * base_k(m - walls[r - 1].center) + offsets_[r - 1] -
                      walls[r].sign * base_k(m - walls[r].center);
    }
    for (int r = r0 - 1; r >= 0; --r) {
        const double m = mids[r];
        offsets_[r] = walls[r + 1].sign * base_k(m - walls[r + 1].center) + offsets_[r + 1] -
                      walls[r].sign * base_k(m - walls[r].center);
    }
}

double Antiderivative::base_k(double y) const {
    const double kinf = profile_.kappa_inf();
    switch (profile_.kind()) {
        case WallKind::tanh_wall:
            return kinf * stable_log_cosh(y);
        case WallKind::sgn:
            return kinf * std::abs(y);
        case WallKind::mollifier: {
            const double a = std::abs(y);
            if (a >= 1.0) return kinf * (a - c0_);
            const int k = std::min(static_cast<int>(a * core_panels_), core_panels_ - 1);
            const double lo = static_cast<double>(k) / core_panels_;
            auto f = [this](double t) { return profile_.shape(t); };
            return core_prefix_[k] + gk15_panel(f, lo, a).value;
        }
        case WallKind::custom: {
            const auto& xs = profile_.custom_x_;
            const auto& ks = profile_.custom_k_;
            if (y >= xs.back()) return custom_prefix_.back() + kinf * (y - xs.back());
            if (y <= xs.front()) return custom_prefix_.front() - kinf * (y - xs.front());
            auto it = std::upper_bound(xs.begin(), xs.end(), y);
            size_t i = static_cast<size_t>(it - xs.begin());
            const double t = (y - xs[i - 1]) / (xs[i] - xs[i - 1]);
            const double ky = ks[i - 1] + t * (ks[i] - ks[i - 1]);
            return custom_prefix_[i - 1] + 0.5 * (ks[i - 1] + ky) * (y - xs[i - 1]);
        }
    }
    return 0.0;
}

double Antiderivative::bump_term(double x) const {
    const auto& b = *profile_.bump();
    const double u = (x - b.center) / b.width;
    if (u <= -1.0) return 0.0;
    if (u >= 1.0) return b.amplitude * b.width * bump_total_;
    const int k = std::min(static_cast<int>((u + 1.0) * 0.5 * bump_panels_), bump_panels_ - 1);
    const double lo = -1.0 + 2.0 * k / bump_panels_;
    return b.amplitude * b.width * (bump_prefix_[k] + gk15_panel(bump_shape, lo, u).value);
}

double Antiderivative::operator()(double x) const {
    const int r = profile_.region_of(x);
    double v = profile_.walls_[r].sign * base_k(x - profile_.walls_[r].center) + offsets_[r];
    if (profile_.bump()) v += bump_term(x) - bump_term(0.0);
    return v;
}

Antiderivative antiderivative(const MassProfile& profile, double tol) {
    return Antiderivative(profile, tol);
}

} // namespace dwdirac

#include "dwdirac/reduction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dwdirac/quadrature.hpp"
#include "dwdirac/roots.hpp"

namespace dwdirac {

namespace {

const complexd kI{0.0, 1.0};

// Same preconditions as gluing the profile itself, so the closed-form helpers and
// the assembled contexts reject the same geometries.
void check_reduction_geometry(int n, double delta, const MassProfile& base_wall) {
    glue_walls(base_wall, n, delta);
}

double splitting_scale(const MassProfile& base_wall, double delta) {
    AnalyticMode mode = zero_mode(base_wall);
    const Antiderivative& K = mode.antiderivative_used();
    return 2.0 * mode.gamma() * mode.gamma() * std::exp(-2.0 * K(delta));
}

std::string format_double(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// (D_h - E) v with the centered stencil and zero boundary values, flattened as
// (up_0, down_0, up_1, down_1, ...).
Eigen::VectorXcd apply_dirac_grid(const std::vector<double>& kappa, double h, double E,
                                  const Eigen::VectorXcd& v) {
    const int N = static_cast<int>(kappa.size());
    Eigen::VectorXcd out(2 * N);
    const complexd dcoef = kI / (2.0 * h);
    for (int i = 0; i < N; ++i) {
        const complexd up_p = i + 1 < N ? v(2 * (i + 1)) : complexd{};
        const complexd up_m = i > 0 ? v(2 * (i - 1)) : complexd{};
        const complexd dn_p = i + 1 < N ? v(2 * (i + 1) + 1) : complexd{};
        const complexd dn_m = i > 0 ? v(2 * (i - 1) + 1) : complexd{};
        out(2 * i) = dcoef * (up_p - up_m) + kappa[i] * v(2 * i + 1) - E * v(2 * i);
        out(2 * i + 1) = -dcoef * (dn_p - dn_m) + kappa[i] * v(2 * i) - E * v(2 * i + 1);
    }
    return out;
}

// Pivoted LU of the pentadiagonal grid operator D_h - z. Partial pivoting only
// ever contends between the three rows with support at the current column, so the
// factorization keeps a sliding window of three work rows: five stencil entries per
// pivot row and at most two follower multipliers per column.
class BandLU {
  public:
    BandLU(const std::vector<double>& kappa, double h, complexd z)
        : nb_(2 * static_cast<int>(kappa.size())) {
        const complexd dcoef = kI / (2.0 * h);
        const int N = static_cast<int>(kappa.size());

        // row r of the grid operator over columns [anchor, anchor + 4]
        const auto load = [&](int r, int anchor) {
            WorkRow w;
            w.orig = r;
            w.a.fill(complexd{});
            const int i = r / 2;
            const auto put = [&](int c, complexd v) {
                if (c >= 0 && c < nb_) w.a[c - anchor] += v;
            };
            put(r, -z);
            if (r % 2 == 0) {
                put(r + 1, complexd(kappa[i], 0.0));
                if (i + 1 < N) put(r + 2, dcoef);
                if (i > 0) put(r - 2, -dcoef);
            } else {
                put(r - 1, complexd(kappa[i], 0.0));
                if (i + 1 < N) put(r + 2, -dcoef);
                if (i > 0) put(r - 2, dcoef);
            }
            return w;
        };

        std::vector<WorkRow> win;
        for (int r = 0; r < std::min(3, nb_); ++r) win.push_back(load(r, 0));

        u_.assign(static_cast<size_t>(nb_) * 5, complexd{});
        porig_.assign(nb_, -1);
        forig_.assign(static_cast<size_t>(nb_) * 2, -1);
        fmult_.assign(static_cast<size_t>(nb_) * 2, complexd{});

        for (int j = 0; j < nb_; ++j) {
            size_t best = 0;
            double bmag = 0.0;
            for (size_t k = 0; k < win.size(); ++k)
                if (std::abs(win[k].a[0]) > bmag) {
                    bmag = std::abs(win[k].a[0]);
                    best = k;
                }
            if (bmag == 0.0)
                throw resolvent_failure("reduction: shifted grid operator is numerically singular");
            if (best != 0) std::swap(win[0], win[best]);

            porig_[j] = win[0].orig;
            for (int t = 0; t < 5; ++t) u_[static_cast<size_t>(j) * 5 + t] = win[0].a[t];

            for (size_t k = 1; k < win.size(); ++k) {
                const complexd m = win[k].a[0] / win[0].a[0];
                forig_[static_cast<size_t>(j) * 2 + (k - 1)] = win[k].orig;
                fmult_[static_cast<size_t>(j) * 2 + (k - 1)] = m;
                if (m != complexd{})
                    for (int t = 1; t < 5; ++t) win[k].a[t] -= m * win[0].a[t];
            }

            win.erase(win.begin());
            for (WorkRow& w : win) {
                for (int t = 0; t < 4; ++t) w.a[t] = w.a[t + 1];
                w.a[4] = complexd{};
            }
            if (j + 3 < nb_) win.push_back(load(j + 3, j + 1));
        }
    }

    Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const {
        Eigen::VectorXcd y = rhs;
        for (int j = 0; j < nb_; ++j) {
            const complexd pv = y(porig_[j]);
            if (pv != complexd{})
                for (int k = 0; k < 2; ++k) {
                    const int f = forig_[static_cast<size_t>(j) * 2 + k];
                    if (f >= 0) y(f) -= fmult_[static_cast<size_t>(j) * 2 + k] * pv;
                }
        }
        Eigen::VectorXcd x(nb_);
        for (int j = nb_ - 1; j >= 0; --j) {
            complexd s = y(porig_[j]);
            for (int t = 1; t < 5 && j + t < nb_; ++t)
                s -= u_[static_cast<size_t>(j) * 5 + t] * x(j + t);
            x(j) = s / u_[static_cast<size_t>(j) * 5];
        }
        return x;
    }

  private:
    struct WorkRow {
        int orig = -1;
        std::array<complexd, 5> a{};
    };

    int nb_ = 0;
    std::vector<complexd> u_, fmult_;
    std::vector<int> porig_, forig_;
};

} // namespace

Eigen::MatrixXcd leading_matrix(int n, double delta, const MassProfile& base_wall) {
    check_reduction_geometry(n, delta, base_wall);
    const double a = splitting_scale(base_wall, delta);
    Eigen::MatrixXcd m0 = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j + 1 < n; ++j) {
        m0(j, j + 1) = -kI * a;
        m0(j + 1, j) = kI * a;
    }
    return m0;
}

LeadingPairs leading_eigenpairs(int n, double delta, const MassProfile& base_wall) {
    check_reduction_geometry(n, delta, base_wall);
    LeadingPairs out;
    out.a = splitting_scale(base_wall, delta);
    out.values.resize(n);
    out.vectors = Eigen::MatrixXcd(n, n);
    // The phase similarity diag(i^j) turns M0 into the real symmetric tridiagonal
    // with constant off-diagonal a, whose eigenpairs are the discrete sine modes.
    const double pi = std::numbers::pi;
    const complexd powers[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    const double scale = std::sqrt(2.0 / (n + 1));
    for (int m = 0; m < n; ++m) {
        const int k = n - m; // descending k sorts the cosines ascending
        out.values[m] = 2 * k == n + 1 ? 0.0 : 2.0 * out.a * std::cos(k * pi / (n + 1));
        for (int j = 1; j <= n; ++j)
            out.vectors(j - 1, m) =
                powers[(j - 1) % 4] * (scale * std::sin(j * k * pi / (n + 1)));
    }
    return out;
}

std::vector<double> asymptotic_eigenvalues(int n, double delta, const MassProfile& base_wall,
                                           bool odd_kappa) {
    check_reduction_geometry(n, delta, base_wall);
    if (!odd_kappa) {
        if (n != 2)
            throw not_implemented(
                "asymptotic_eigenvalues: without an odd wall shape only n = 2 is available");
        AnalyticMode mode = zero_mode(base_wall);
        const Antiderivative& K = mode.antiderivative_used();
        const double s =
            2.0 * mode.gamma() * mode.gamma() * std::exp(-(K(delta) + K(-delta)));
        return {-s, s};
    }
    return leading_eigenpairs(n, delta, base_wall).values;
}

ApproximateEigenfunctions approximate_eigenfunctions(int n, double delta,
                                                     const MassProfile& base_wall) {
    ApproximateEigenfunctions out;
    out.pairs = leading_eigenpairs(n, delta, base_wall);
    const std::vector<AnalyticMode> modes = shifted_modes(glue_walls(base_wall, n, delta));
    for (int m = 0; m < n; ++m) {
        ModeCombination combo;
        combo.modes = modes;
        combo.coeff.resize(n);
        for (int j = 0; j < n; ++j) combo.coeff[j] = out.pairs.vectors(j, m);
        out.functions.push_back(std::move(combo));
    }
    return out;
}

ReductionContext::ReductionContext(const MassProfile& profile, ReductionOptions options)
    : profile_(profile), options_(options) {
    if (!(options_.h > 0.0)) throw invalid_parameter("reduction: grid spacing must be positive");
    if (!(options_.pad > 0.0)) throw invalid_parameter("reduction: pad must be positive");
    if (options_.window < 0.0 || options_.window >= profile_.kappa_inf())
        throw invalid_window("reduction: window must lie strictly inside the gap");
    window_ = options_.window > 0.0 ? options_.window : 0.9 * profile_.kappa_inf();

    modes_ = shifted_modes(profile_);
    const int n = static_cast<int>(modes_.size());

    double reach = 0.0;
    for (const Wall& w : profile_.walls()) reach = std::max(reach, std::abs(w.center));
    if (profile_.bump())
        reach = std::max(reach, std::abs(profile_.bump()->center) + profile_.bump()->width);
    const double L = reach + options_.pad / profile_.kappa_inf();
    const int half = static_cast<int>(std::lround(L / options_.h));
    if (half < 8) throw invalid_parameter("reduction: grid spacing too coarse for the box");
    grid_ = Grid{L, 2 * half + 1};

    const int N = grid_.N;
    kappa_.resize(N);
    for (int i = 0; i < N; ++i) kappa_[i] = profile_.kappa(grid_.x(i));

    mode_vals_ = Eigen::MatrixXcd(2 * N, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < N; ++i) {
            const Spinor2 v = modes_[j](grid_.x(i));
            mode_vals_(2 * i, j) = v.up;
            mode_vals_(2 * i + 1, j) = v.down;
        }

    // Border columns: the modes and their sawtooth images (-1)^i sigma1, which the
    // centered difference pairs with them at the same near-zero eigenvalues.
    basis_ = Eigen::MatrixXcd(2 * N, 2 * n);
    basis_.leftCols(n) = mode_vals_;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < N; ++i) {
            const double s = i % 2 == 0 ? 1.0 : -1.0;
            basis_(2 * i, n + j) = s * mode_vals_(2 * i + 1, j);
            basis_(2 * i + 1, n + j) = s * mode_vals_(2 * i, j);
        }
    for (int pass = 0; pass < 2; ++pass)
        for (int c = 0; c < 2 * n; ++c) {
            for (int p = 0; p < c; ++p)
                basis_.col(c) -= basis_.col(p).dot(basis_.col(c)) * basis_.col(p);
            basis_.col(c) /= basis_.col(c).norm();
        }

    // P D alpha*_j: sampled and projected off span{alpha*_k}; E-independent.
    rhs_ = Eigen::MatrixXcd(2 * N, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < N; ++i) {
            const Spinor2 d = dirac_apply(profile_, modes_[j], grid_.x(i));
            rhs_(2 * i, j) = d.up;
            rhs_(2 * i + 1, j) = d.down;
        }
    for (int pass = 0; pass < 2; ++pass)
        for (int j = 0; j < n; ++j)
            for (int p = 0; p < n; ++p)
                rhs_.col(j) -= basis_.col(p).dot(rhs_.col(j)) * basis_.col(p);

    // A and G by adaptive quadrature of the analytic modes.
    double trunc = 45.0 / profile_.kappa_inf();
    const double core = profile_.base_wall().core_half_width();
    trunc += std::isfinite(core) ? core : 20.0 / profile_.kappa_inf();
    const std::vector<double> pts = profile_breakpoints(profile_, -reach - trunc, reach + trunc);
    QuadratureOptions qopt;
    qopt.abs_tol = 1e-18 * profile_.kappa_inf();
    qopt.rel_tol = 1e-13;
    qopt.max_intervals = 8000;
    a_ = Eigen::MatrixXcd(n, n);
    g_ = Eigen::MatrixXcd(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const AnalyticMode& mi = modes_[i];
            const AnalyticMode& mj = modes_[j];
            a_(i, j) = integrate_complex_or_throw(
                [&](double x) {
                    const Spinor2 u = mi(x);
                    const Spinor2 d = dirac_apply(profile_, mj, x);
                    return std::conj(u.up) * d.up + std::conj(u.down) * d.down;
                },
                pts, qopt);
            g_(i, j) = integrate_complex_or_throw(
                [&](double x) {
                    const Spinor2 u = mi(x);
                    const Spinor2 v = mj(x);
                    return std::conj(u.up) * v.up + std::conj(u.down) * v.down;
                },
                pts, qopt);
        }
}

struct ReductionContext::Solves {
    Eigen::MatrixXcd R;
    Eigen::MatrixXcd etas;
    double defect = 0.0;
};

// The constrained system [[D_h - E, V], [V^H, 0]] cannot be eliminated in grid
// order: its leading subblocks pass through near-singularity whenever the
// elimination front has swept past a wall (a half-line bound state), and entries
// blow up. Instead factor the complex-shifted band operator D_h - E - i*tau, whose
// leading subblocks all have singular values >= tau, and use the bordered solve
// built from it as a preconditioner. Richardson iteration on the exact system
// contracts by tau / sqrt(margin^2 + tau^2) per step, with margin the distance
// from E to the deflated spectrum, so a tau well below the window margin is cheap.
ReductionContext::Solves ReductionContext::solve_all(double E) const {
    const int N = grid_.N;
    const int n = this->n();
    const int B = 2 * n;
    const double h = grid_.h();
    const double tau = 0.02 * profile_.kappa_inf();

    const BandLU lu(kappa_, h, complexd(E, tau));
    Eigen::MatrixXcd Z(2 * N, B);
    for (int b = 0; b < B; ++b) Z.col(b) = lu.solve(basis_.col(b));
    Eigen::PartialPivLU<Eigen::MatrixXcd> corner((basis_.adjoint() * Z).eval());

    Solves out;
    out.etas = Eigen::MatrixXcd(2 * N, n);
    for (int j = 0; j < n; ++j) {
        const double bnorm = rhs_.col(j).norm();
        Eigen::VectorXcd x = Eigen::VectorXcd::Zero(2 * N);
        Eigen::VectorXcd y = Eigen::VectorXcd::Zero(B);
        double rel = std::numeric_limits<double>::infinity();
        for (int it = 0; it <= options_.max_iterations; ++it) {
            const Eigen::VectorXcd rr =
                rhs_.col(j) - apply_dirac_grid(kappa_, h, E, x) - basis_ * y;
            const Eigen::VectorXcd rs = -(basis_.adjoint() * x);
            rel = std::sqrt(rr.squaredNorm() + rs.squaredNorm()) / (bnorm > 0.0 ? bnorm : 1.0);
            if (rel <= options_.solve_tol || it == options_.max_iterations) break;
            const Eigen::VectorXcd u = lu.solve(rr);
            const Eigen::VectorXcd dy = corner.solve((basis_.adjoint() * u - rs).eval());
            x += u - Z * dy;
            y += dy;
        }
        if (rel > options_.solve_tol)
            throw resolvent_failure(
                "reduction: projected resolvent iteration stalled at relative residual " +
                format_double(rel));
        out.etas.col(j) = x;
    }

    out.R = Eigen::MatrixXcd(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.R(i, j) = h * rhs_.col(i).dot(out.etas.col(j));
    out.defect = (out.R - out.R.adjoint().eval()).cwiseAbs().maxCoeff();
    out.R = (0.5 * (out.R + out.R.adjoint())).eval();
    return out;
}

ReducedMatrix ReductionContext::assemble(double E) const {
    if (!(std::abs(E) < profile_.kappa_inf()))
        throw invalid_parameter("reduction: E must lie inside the spectral gap");
    Solves s = solve_all(E);
    ReducedMatrix out;
    out.n = n();
    out.delta = profile_.half_spacing().value_or(0.0);
    out.E = E;
    out.A = a_;
    out.G = g_;
    out.R = std::move(s.R);
    out.window = window_;
    out.hermiticity_defect = s.defect;
    return out;
}

Corrector ReductionContext::corrector(const Eigen::VectorXcd& b, double E) const {
    if (b.size() != n())
        throw invalid_parameter("reduction: coefficient vector length must match the wall count");
    if (!(std::abs(E) < profile_.kappa_inf()))
        throw invalid_parameter("reduction: E must lie inside the spectral gap");
    const Solves s = solve_all(E);
    const Eigen::VectorXcd eta = -(s.etas * b);

    Corrector out;
    out.b = b;
    out.grid = grid_;
    const int N = grid_.N;
    out.eta_up.resize(N);
    out.eta_down.resize(N);
    for (int i = 0; i < N; ++i) {
        out.eta_up[i] = eta(2 * i);
        out.eta_down[i] = eta(2 * i + 1);
    }
    out.norm = std::sqrt(grid_.h()) * eta.norm();
    for (int j = 0; j < n(); ++j)
        out.ortho_defect =
            std::max(out.ortho_defect, std::abs(grid_.h() * mode_vals_.col(j).dot(eta)));
    return out;
}

std::pair<double, double> ReductionContext::corrected_residuals(const Eigen::VectorXcd& b,
                                                                double E) const {
    if (b.size() != n())
        throw invalid_parameter("reduction: coefficient vector length must match the wall count");
    const Solves s = solve_all(E);
    const Eigen::VectorXcd psi = mode_vals_ * b;
    const Eigen::VectorXcd corrected = psi - s.etas * b;
    const double h = grid_.h();
    const double r0 = std::sqrt(h) * apply_dirac_grid(kappa_, h, E, psi).norm();
    const double r1 = std::sqrt(h) * apply_dirac_grid(kappa_, h, E, corrected).norm();
    return {r0, r1};
}

double reduced_det(const ReducedMatrix& m) {
    const Eigen::MatrixXcd full = m.M();
    const Eigen::MatrixXcd herm = 0.5 * (full + full.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw numerical_error("reduction: eigenvalue computation for det failed");
    double det = 1.0;
    for (int i = 0; i < herm.rows(); ++i) det *= es.eigenvalues()(i);
    return det;
}

RootReport det_roots(const ReductionContext& ctx, double window) {
    const double kinf = ctx.profile().kappa_inf();
    double W = window;
    if (W == 0.0) W = ctx.window();
    if (W < 0.0 || W >= kinf)
        throw invalid_window("det_roots: window must lie strictly inside the gap");
    const int n = ctx.n();

    std::vector<double> pts;
    const int lin = 20 * n;
    for (int i = 0; i <= lin; ++i) pts.push_back(-W + 2.0 * W * i / lin);
    const int per_decade = std::max(1, ctx.options().scan_per_decade);
    for (int k = 1; k <= 13 * per_decade; ++k) {
        const double e = W * std::pow(10.0, -static_cast<double>(k) / per_decade);
        pts.push_back(e);
        pts.push_back(-e);
    }
    pts.push_back(0.0);
    if (ctx.profile().half_spacing()) {
        try {
            const LeadingPairs lead = leading_eigenpairs(n, *ctx.profile().half_spacing(),
                                                         ctx.profile().base_wall());
            for (const double v : lead.values)
                for (const double f : {0.7, 0.85, 1.0, 1.15, 1.3})
                    if (std::abs(v * f) < W) pts.push_back(v * f);
        } catch (const invalid_parameter&) {
            // irregular geometry: the plain scan has to do
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [&](double x, double y) { return std::abs(x - y) < 1e-15 * W; }),
              pts.end());

    std::vector<double> dets(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) dets[i] = reduced_det(ctx.assemble(pts[i]));

    RootReport out;
    const auto det_at = [&](double e) { return reduced_det(ctx.assemble(e)); };
    const double xtol = ctx.options().root_tol * kinf;
    for (size_t i = 0; i < pts.size(); ++i) {
        if (dets[i] == 0.0) {
            out.roots.push_back(pts[i]);
            continue;
        }
        if (i + 1 < pts.size() && dets[i] * dets[i + 1] < 0.0)
            out.roots.push_back(
                brent_root(det_at, pts[i], pts[i + 1], dets[i], dets[i + 1], xtol));
    }
    std::sort(out.roots.begin(), out.roots.end());

    std::vector<double> merged;
    for (const double r : out.roots) {
        if (!merged.empty() && std::abs(r - merged.back()) < 1e-12 * kinf) {
            merged.back() = 0.5 * (merged.back() + r);
            out.warnings.push_back("nearly coincident det roots merged near E = " +
                                   format_double(r) + "; gap eigenvalues should be simple");
        } else {
            merged.push_back(r);
        }
    }
    out.roots = std::move(merged);
    for (const double r : out.roots)
        if (std::abs(r) > 0.98 * W) {
            out.warnings.push_back(
                "det root close to the window edge; roots just outside may be missing");
            break;
        }
    return out;
}

Corrector reconstruct_corrector(const ReductionContext& ctx, const Eigen::VectorXcd& b,
                                double E) {
    return ctx.corrector(b, E);
}

} // namespace dwdirac

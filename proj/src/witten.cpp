#include "dwdirac/witten.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dwdirac {

namespace {

using complexd = std::complex<double>;

std::string format_g(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

struct Candidate {
    double lam = 0.0;        // extrapolated (or coarse) eigenvalue
    double lam_coarse = 0.0; // raw coarse-grid eigenvalue
    std::vector<double> vec; // coarse interior eigenfunction, unit l2
    bool paired = false;
};

// (A v)(x) = i(v' + kappa v); returns the real field v' + kappa v on interior nodes
std::vector<double> a_times(const std::vector<double>& v, const std::vector<double>& kap,
                            double h) {
    const int m = static_cast<int>(v.size());
    std::vector<double> w(m);
    for (int i = 0; i < m; ++i) {
        const double vm = i > 0 ? v[i - 1] : 0.0;
        const double vp = i + 1 < m ? v[i + 1] : 0.0;
        w[i] = (vp - vm) / (2.0 * h) + kap[i] * v[i];
    }
    return w;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double nrm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

std::vector<Candidate> window_candidates(const Tridiag& coarse, const Tridiag& fine,
                                         bool richardson, double lo, double hi, double tol,
                                         int max_states, const char* label,
                                         std::vector<std::string>& warnings) {
    auto rc = eig_in_range(coarse, lo, hi, tol, max_states);
    std::vector<Candidate> out(rc.values.size());
    for (size_t i = 0; i < rc.values.size(); ++i) {
        out[i].lam = out[i].lam_coarse = rc.values[i];
        out[i].vec = std::move(rc.vectors[i]);
    }
    if (!richardson) return out;

    auto rf = eig_in_range(fine, lo, hi, tol, max_states);
    if (rf.values.size() != rc.values.size()) {
        warnings.push_back(std::string(label) +
                           ": window eigenvalue count changed under grid refinement, "
                           "extrapolation skipped");
        return out;
    }
    for (size_t i = 0; i < out.size(); ++i)
        out[i].lam = (4.0 * rf.values[i] - rc.values[i]) / 3.0;
    return out;
}

} // namespace

WittenPair build_witten_pair(const MassProfile& profile, const Grid& grid) {
    if (profile.kind() == WallKind::sgn)
        throw invalid_parameter(
            "sgn walls have a distributional kappa'; the Witten factorization needs a "
            "differentiable profile (use the shooting oracle instead)");
    if (grid.N < 5 || grid.N % 2 == 0)
        throw invalid_parameter("grid needs an odd number of nodes, N >= 5");
    const double reach = std::max(std::abs(profile.walls().front().center),
                                  std::abs(profile.walls().back().center));
    if (!(grid.L > reach + 1.0 / profile.kappa_inf()))
        throw invalid_parameter("grid box does not contain the walls with any margin");

    const int m = grid.N - 2;
    const long double h = 2.0L * static_cast<long double>(grid.L) / (grid.N - 1);
    const long double w2 = 1.0L / (h * h);
    WittenPair pair;
    pair.grid = grid;
    pair.h_plus.diag.resize(m);
    pair.h_minus.diag.resize(m);
    pair.h_plus.off.assign(m - 1, -w2);
    pair.h_minus.off.assign(m - 1, -w2);
    for (int i = 0; i < m; ++i) {
        const double x = grid.x(i + 1);
        const long double k = profile.kappa(x);
        const long double kp = profile.kappa_prime(x);
        pair.h_plus.diag[i] = 2.0L * w2 + k * k + kp;
        pair.h_minus.diag[i] = 2.0L * w2 + k * k - kp;
    }
    return pair;
}

DiracSpectrum dirac_spectrum_in_gap(const MassProfile& profile, const Grid& grid,
                                    const SolverOptions& options) {
    const double kinf = profile.kappa_inf();
    if (options.window < 0.0) throw invalid_window("window must be positive (or 0 for the default)");
    const double W = options.window > 0.0 ? options.window : 0.9 * kinf;
    if (!(W > 0.0) || W >= kinf)
        throw invalid_window("window must satisfy 0 < window < kappa_inf");

    DiracSpectrum out;
    out.window = W;
    out.grid = grid;

    const auto coarse = build_witten_pair(profile, grid);
    const Grid fine_grid = grid.refined();
    WittenPair fine;
    if (options.richardson) fine = build_witten_pair(profile, fine_grid);

    // candidates slightly above the window keep edge states pairable
    const double lo = -0.05 * kinf * kinf;
    const double hi = std::max(W * W, std::min(1.21 * W * W, 0.98 * kinf * kinf));
    auto plus = window_candidates(coarse.h_plus, fine.h_plus, options.richardson, lo, hi,
                                  options.tol, options.max_states, "H+", out.warnings);
    auto minus = window_candidates(coarse.h_minus, fine.h_minus, options.richardson, lo, hi,
                                   options.tol, options.max_states, "H-", out.warnings);

    const double h = grid.h();
    const int m = grid.N - 2;
    std::vector<double> kap(m);
    for (int i = 0; i < m; ++i) kap[i] = profile.kappa(grid.x(i + 1));

    // SUSY pairing: H- eigenfunction v maps to the H+ eigenfunction A v (up to norm)
    struct Link {
        double overlap;
        size_t ip, im;
        double sign; // sign of <u, v' + kappa v>
    };
    std::vector<Link> links;
    std::vector<std::vector<double>> av(minus.size());
    for (size_t j = 0; j < minus.size(); ++j) av[j] = a_times(minus[j].vec, kap, h);
    for (size_t i = 0; i < plus.size(); ++i)
        for (size_t j = 0; j < minus.size(); ++j) {
            const double davn = nrm2(av[j]);
            if (davn == 0.0) continue;
            const double d = dot(plus[i].vec, av[j]);
            const double ovl = std::abs(d) / davn;
            if (ovl >= 0.5) links.push_back({ovl, i, j, d >= 0.0 ? 1.0 : -1.0});
        }
    std::sort(links.begin(), links.end(),
              [](const Link& a, const Link& b) { return a.overlap > b.overlap; });

    const double zero_floor = 100.0 * h * h * std::pow(kinf, 4);

    auto push_state = [&](double E, const std::vector<complexd>& b1,
                          const std::vector<complexd>& b2, double lp, double lm, bool zero) {
        GapState st;
        st.E = E;
        st.lambda_plus = lp;
        st.lambda_minus = lm;
        st.zero_mode = zero;
        st.up.assign(grid.N, complexd(0.0, 0.0));
        st.down.assign(grid.N, complexd(0.0, 0.0));
        const complexd I(0.0, 1.0);
        const double rs2 = 1.0 / std::sqrt(2.0);
        double norm2 = 0.0;
        for (int i = 0; i < m; ++i) {
            st.up[i + 1] = (b1[i] + b2[i]) * rs2;
            st.down[i + 1] = I * (b2[i] - b1[i]) * rs2;
            norm2 += std::norm(st.up[i + 1]) + std::norm(st.down[i + 1]);
        }
        norm2 *= h;
        const double s = 1.0 / std::sqrt(norm2);
        for (int i = 1; i <= m; ++i) {
            st.up[i] *= s;
            st.down[i] *= s;
        }
        out.states.push_back(std::move(st));
    };

    for (const auto& link : links) {
        if (plus[link.ip].paired || minus[link.im].paired) continue;
        plus[link.ip].paired = minus[link.im].paired = true;
        const auto& cp = plus[link.ip];
        const auto& cm = minus[link.im];

        double lam = 0.5 * (cp.lam + cm.lam);
        if (std::abs(cp.lam - cm.lam) > 0.05 * std::max(lam, zero_floor))
            out.warnings.push_back("partner eigenvalues disagree beyond 5%: " +
                                   format_g(cp.lam) + " vs " + format_g(cm.lam));
        if (lam < 0.0) {
            out.warnings.push_back("paired eigenvalue " + format_g(lam) +
                                   " clamped to zero (below grid resolution)");
            lam = 0.0;
        }
        if (lam >= kinf * kinf - 10.0 * options.tol) {
            out.warnings.push_back("eigenvalue " + format_g(lam) +
                                   " within 10*tol of the essential edge, excluded");
            continue;
        }
        if (lam > W * W) continue; // margin candidate, only needed so pairing could see it

        const double E = std::sqrt(lam);
        // beta1 phase: <u, A v> = i * sign * |c|, and A beta2 = E beta1 fixes beta1
        const complexd chat(0.0, link.sign);
        std::vector<complexd> b1(m), b2(m);
        for (int i = 0; i < m; ++i) b2[i] = cm.vec[i];
        if (E == 0.0) {
            push_state(0.0, std::vector<complexd>(m, 0.0), b2, cp.lam, cm.lam, false);
            continue;
        }
        for (int i = 0; i < m; ++i) b1[i] = chat * cp.vec[i];
        push_state(+E, b1, b2, cp.lam, cm.lam, false);
        for (int i = 0; i < m; ++i) b1[i] = -b1[i];
        push_state(-E, b1, b2, cp.lam, cm.lam, false);
    }

    // unpaired candidates: kernel states if below the discretization floor
    for (size_t j = 0; j < minus.size(); ++j) {
        if (minus[j].paired) continue;
        if (std::abs(minus[j].lam_coarse) < zero_floor) {
            std::vector<complexd> b2(m);
            for (int i = 0; i < m; ++i) b2[i] = minus[j].vec[i];
            push_state(0.0, std::vector<complexd>(m, 0.0), b2, -1.0, minus[j].lam, true);
        } else if (minus[j].lam <= W * W) {
            out.warnings.push_back("H-: eigenvalue " + format_g(minus[j].lam) +
                                   " has no superpartner and is not a kernel state; "
                                   "excluded as a discretization artifact");
        }
    }
    for (size_t i = 0; i < plus.size(); ++i) {
        if (plus[i].paired) continue;
        if (std::abs(plus[i].lam_coarse) < zero_floor) {
            std::vector<complexd> b1(m);
            for (int k = 0; k < m; ++k) b1[k] = plus[i].vec[k];
            push_state(0.0, b1, std::vector<complexd>(m, 0.0), plus[i].lam, -1.0, true);
        } else if (plus[i].lam <= W * W) {
            out.warnings.push_back("H+: eigenvalue " + format_g(plus[i].lam) +
                                   " has no superpartner and is not a kernel state; "
                                   "excluded as a discretization artifact");
        }
    }

    // first-order residual and boundary checks on the assembled spinors
    const double resid_tol =
        options.resid_tol > 0.0 ? options.resid_tol : 500.0 * h * h * kinf * kinf * kinf;
    std::vector<double> kap_full(grid.N);
    for (int i = 0; i < grid.N; ++i) kap_full[i] = profile.kappa(grid.x(i));
    const complexd I(0.0, 1.0);
    for (auto& st : out.states) {
        double r2 = 0.0, amax = 0.0;
        for (int i = 1; i + 1 < grid.N; ++i) {
            const complexd dup = (st.up[i + 1] - st.up[i - 1]) / (2.0 * h);
            const complexd ddn = (st.down[i + 1] - st.down[i - 1]) / (2.0 * h);
            const complexd ru = I * dup + kap_full[i] * st.down[i] - st.E * st.up[i];
            const complexd rd = -I * ddn + kap_full[i] * st.up[i] - st.E * st.down[i];
            r2 += std::norm(ru) + std::norm(rd);
            amax = std::max({amax, std::abs(st.up[i]), std::abs(st.down[i])});
        }
        st.residual = std::sqrt(r2 * h);
        if (st.residual > resid_tol)
            throw reconstruction_failure("state E=" + format_g(st.E) +
                                             ": first-order residual above " +
                                             format_g(resid_tol) + " after reconstruction",
                                         st.residual);
        const double edge =
            std::max({std::abs(st.up[1]), std::abs(st.down[1]), std::abs(st.up[grid.N - 2]),
                      std::abs(st.down[grid.N - 2])});
        if (edge > 1e-5 * amax)
            out.warnings.push_back("state E=" + format_g(st.E) +
                                   " reaches the grid boundary; enlarge L");
    }

    std::sort(out.states.begin(), out.states.end(),
              [](const GapState& a, const GapState& b) { return a.E < b.E; });
    return out;
}

} // namespace dwdirac

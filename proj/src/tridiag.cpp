#include "dwdirac/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace dwdirac {

namespace {

constexpr long double kEps = std::numeric_limits<long double>::epsilon();

long double inf_norm(const Tridiag& T) {
    const int n = T.size();
    long double m = 0.0L;
    for (int i = 0; i < n; ++i) {
        long double r = std::abs(T.diag[i]);
        if (i > 0) r += std::abs(T.off[i - 1]);
        if (i + 1 < n) r += std::abs(T.off[i]);
        m = std::max(m, r);
    }
    return m;
}

// LU of T - shift with partial pivoting (tridiagonal gains one superdiagonal of fill).
struct ShiftedLU {
    std::vector<long double> dl, d, du, du2;
    std::vector<int> piv;

    ShiftedLU(const Tridiag& T, long double shift, long double pivot_floor) {
        const int n = T.size();
        d.resize(n);
        dl.assign(n, 0.0L);
        du.assign(n, 0.0L);
        du2.assign(n, 0.0L);
        piv.assign(n, 0);
        for (int i = 0; i < n; ++i) d[i] = T.diag[i] - shift;
        for (int i = 0; i + 1 < n; ++i) {
            dl[i] = T.off[i]; // A(i+1, i), consumed in order
            du[i] = T.off[i];
        }
        for (int i = 0; i + 1 < n; ++i) {
            if (std::abs(d[i]) >= std::abs(dl[i])) {
                if (std::abs(d[i]) < pivot_floor) d[i] = d[i] < 0 ? -pivot_floor : pivot_floor;
                const long double fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
                piv[i] = 0;
            } else {
                const long double fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                const long double temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                piv[i] = 1;
            }
        }
        if (std::abs(d[n - 1]) < pivot_floor)
            d[n - 1] = d[n - 1] < 0 ? -pivot_floor : pivot_floor;
    }

    void solve(std::vector<long double>& b) const {
        const int n = static_cast<int>(d.size());
        for (int i = 0; i + 1 < n; ++i) {
            if (piv[i] == 0) {
                b[i + 1] -= dl[i] * b[i];
            } else {
                const long double temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl[i] * b[i + 1];
            }
        }
        b[n - 1] /= d[n - 1];
        if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        for (int i = n - 3; i >= 0; --i)
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
};

long double bisect_eigenvalue(const Tridiag& T, int idx, long double lo, long double hi,
                              long double tol) {
    // invariant: sturm_count(lo) <= idx < sturm_count(hi)
    while (hi - lo > std::max(tol, 8.0L * kEps * std::max({std::abs(lo), std::abs(hi), 1.0L}))) {
        const long double mid = 0.5L * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(T, mid) > idx)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5L * (lo + hi);
}

std::vector<double> inverse_iteration(const Tridiag& T, long double lambda, long double normT,
                                      double tol,
                                      const std::vector<std::vector<double>>& previous) {
    const int n = T.size();
    const long double pivot_floor = std::max(kEps * normT, 1e-300L);
    ShiftedLU lu(T, lambda, pivot_floor);

    std::mt19937_64 rng(0x5eed5eedULL + 1000003ULL * previous.size() +
                        static_cast<unsigned long long>(n));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<long double> v(n);
    for (auto& x : v) x = u(rng);

    auto orthogonalize = [&](std::vector<long double>& w) {
        for (int pass = 0; pass < 2; ++pass) { // twice: the remainder after one pass is
            for (const auto& p : previous) {   // rounding noise, not necessarily orthogonal
                long double dot = 0.0L;
                for (int i = 0; i < n; ++i) dot += p[i] * w[i];
                for (int i = 0; i < n; ++i) w[i] -= dot * p[i];
            }
            if (previous.empty()) break;
        }
    };

    const long double bound = 10.0L * static_cast<long double>(tol) * std::max(normT, 1.0L);
    for (int iter = 0; iter < 12; ++iter) {
        lu.solve(v);
        long double pre = 0.0L;
        for (const auto& x : v) pre += x * x;
        orthogonalize(v);
        long double nrm = 0.0L;
        for (const auto& x : v) nrm += x * x;
        nrm = std::sqrt(nrm);
        if (!(nrm > 1e-8L * std::sqrt(pre))) {
            // the iterate lived (almost) inside span(previous); restart from new noise
            for (auto& x : v) x = u(rng);
            orthogonalize(v);
            nrm = 0.0L;
            for (const auto& x : v) nrm += x * x;
            nrm = std::sqrt(nrm);
            if (!(nrm > 0.0L)) continue;
        }
        for (auto& x : v) x /= nrm;

        long double resid = 0.0L;
        for (int i = 0; i < n; ++i) {
            long double r = (T.diag[i] - lambda) * v[i];
            if (i > 0) r += T.off[i - 1] * v[i - 1];
            if (i + 1 < n) r += T.off[i] * v[i + 1];
            resid += r * r;
        }
        resid = std::sqrt(resid);
        if (resid <= bound) {
            // fix an overall sign: largest component positive
            int imax = 0;
            for (int i = 1; i < n; ++i)
                if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
            const long double s = v[imax] < 0 ? -1.0L : 1.0L;
            std::vector<double> out(n);
            for (int i = 0; i < n; ++i) out[i] = static_cast<double>(s * v[i]);
            return out;
        }
    }
    throw eigenvector_failure("inverse iteration stagnated");
}

EigResult eig_indices(const Tridiag& T, int first, int last, long double lo, long double hi,
                      double tol) {
    const long double normT = inf_norm(T);
    EigResult out;
    for (int idx = first; idx < last; ++idx) {
        const long double lam = bisect_eigenvalue(T, idx, lo, hi, tol);
        out.vectors.push_back(inverse_iteration(T, lam, normT, tol, out.vectors));
        out.values.push_back(static_cast<double>(lam));
    }
    return out;
}

} // namespace

int sturm_count(const Tridiag& T, long double x) {
    const int n = T.size();
    int cnt = 0;
    long double q = 1.0L;
    for (int i = 0; i < n; ++i) {
        long double t = T.diag[i] - x;
        if (i > 0) t -= T.off[i - 1] * T.off[i - 1] / q;
        if (t == 0.0L) t = -1e-30L * (1.0L + std::abs(T.diag[i]));
        if (t < 0.0L) ++cnt;
        q = t;
    }
    return cnt;
}

EigResult eig_low(const Tridiag& T, int k, double tol) {
    if (k < 1) throw invalid_parameter("need k >= 1 eigenvalues");
    if (k > T.size()) throw invalid_parameter("k exceeds the matrix size");
    if (!(tol > 0.0)) throw invalid_parameter("tol must be positive");
    long double lo = T.diag[0], hi = T.diag[0];
    const int n = T.size();
    for (int i = 0; i < n; ++i) {
        long double r = 0.0L;
        if (i > 0) r += std::abs(T.off[i - 1]);
        if (i + 1 < n) r += std::abs(T.off[i]);
        lo = std::min(lo, T.diag[i] - r);
        hi = std::max(hi, T.diag[i] + r);
    }
    const long double pad = 2.0L * kEps * std::max(std::abs(lo), std::abs(hi)) + 1e-300L;
    return eig_indices(T, 0, k, lo - pad, hi + pad, tol);
}

EigResult eig_in_range(const Tridiag& T, double lo, double hi, double tol, int max_count) {
    if (!(hi > lo)) throw invalid_parameter("empty eigenvalue range");
    if (!(tol > 0.0)) throw invalid_parameter("tol must be positive");
    const int first = sturm_count(T, lo);
    const int last = sturm_count(T, hi);
    if (last - first > max_count)
        throw invalid_window("eigenvalue range holds more than max_count eigenvalues");
    return eig_indices(T, first, last, lo, hi, tol);
}

} // namespace dwdirac

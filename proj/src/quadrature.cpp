#include "dwdirac/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace dwdirac {

namespace {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK constants).
constexpr double xgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double wgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class T>
struct Panel {
    double a, b;
    T value;
    double err;
};

template <class T>
Panel<T> gk15_eval(const std::function<T(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    T fc = f(c);
    T res_g = wg[3] * fc;
    T res_k = wgk[7] * fc;
    for (int j = 0; j < 7; ++j) {
        T f1 = f(c - hw * xgk[j]);
        T f2 = f(c + hw * xgk[j]);
        res_k += wgk[j] * (f1 + f2);
        if (j % 2 == 1) res_g += wg[j / 2] * (f1 + f2);
    }
    Panel<T> p;
    p.a = a;
    p.b = b;
    p.value = hw * res_k;
    p.err = std::abs(hw * (res_k - res_g));
    return p;
}

template <class T, class R>
R adaptive(const std::function<T(double)>& f, const std::vector<double>& pts,
           const QuadratureOptions& opt) {
    R out;
    auto cmp = [](const Panel<T>& x, const Panel<T>& y) { return x.err < y.err; };
    std::priority_queue<Panel<T>, std::vector<Panel<T>>, decltype(cmp)> heap(cmp);

    T total{};
    double total_err = 0.0;
    int evals = 0;
    for (size_t k = 0; k + 1 < pts.size(); ++k) {
        if (pts[k + 1] <= pts[k]) continue;
        auto p = gk15_eval<T>(f, pts[k], pts[k + 1]);
        evals += 15;
        total += p.value;
        total_err += p.err;
        heap.push(p);
    }

    int panels = static_cast<int>(heap.size());
    while (!heap.empty() && panels < opt.max_intervals) {
        double goal = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
        if (total_err <= goal) break;
        Panel<T> worst = heap.top();
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) break; // interval at machine resolution
        auto p1 = gk15_eval<T>(f, worst.a, mid);
        auto p2 = gk15_eval<T>(f, mid, worst.b);
        evals += 30;
        total += p1.value + p2.value - worst.value;
        total_err += p1.err + p2.err - worst.err;
        heap.push(p1);
        heap.push(p2);
        ++panels;
    }

    out.value = total;
    out.error_estimate = total_err;
    out.evaluations = evals;
    out.converged = total_err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    return out;
}

} // namespace

QuadratureResult gk15_panel(const std::function<double(double)>& f, double a, double b) {
    auto p = gk15_eval<double>(f, a, b);
    QuadratureResult r;
    r.value = p.value;
    r.error_estimate = p.err;
    r.evaluations = 15;
    r.converged = true;
    return r;
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opt) {
    return adaptive<double, QuadratureResult>(f, {a, b}, opt);
}

QuadratureResult integrate_split(const std::function<double(double)>& f,
                                 const std::vector<double>& pts, const QuadratureOptions& opt) {
    return adaptive<double, QuadratureResult>(f, pts, opt);
}

ComplexQuadratureResult integrate_complex(const std::function<std::complex<double>(double)>& f,
                                          const std::vector<double>& pts,
                                          const QuadratureOptions& opt) {
    return adaptive<std::complex<double>, ComplexQuadratureResult>(f, pts, opt);
}

double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& opt) {
    auto r = integrate(f, a, b, opt);
    if (!r.converged)
        throw tolerance_not_met("quadrature did not converge", r.error_estimate, opt.abs_tol);
    return r.value;
}

double integrate_split_or_throw(const std::function<double(double)>& f,
                                const std::vector<double>& pts, const QuadratureOptions& opt) {
    auto r = integrate_split(f, pts, opt);
    if (!r.converged)
        throw tolerance_not_met("quadrature did not converge", r.error_estimate, opt.abs_tol);
    return r.value;
}

std::complex<double> integrate_complex_or_throw(
    const std::function<std::complex<double>(double)>& f, const std::vector<double>& pts,
    const QuadratureOptions& opt) {
    auto r = integrate_complex(f, pts, opt);
    if (!r.converged)
        throw tolerance_not_met("quadrature did not converge", r.error_estimate, opt.abs_tol);
    return r.value;
}

} // namespace dwdirac

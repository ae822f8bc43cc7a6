#include "doctest.h"

#include <cmath>

#include "dwdirac/witten.hpp"

using namespace dwdirac;

namespace {
// two-wall splitting coefficient a = 2*gamma^2*exp(-2*K(delta)), 40-digit reference
constexpr double kA3 = 0.002874920546326549;
// true |E| - a for two mollifier walls at half-spacing 3 (35-digit shooting reference)
constexpr double kDev3 = 6.669429197e-8;
// three walls at half-spacing 2: E1^2, plain and with the 0.3*phi((x-1)) bump
constexpr double kLambda1N3 = 9.05369060e-4;
constexpr double kLambda1N3Bumped = 1.26535377e-3;
} // namespace

TEST_CASE("build_witten_pair assembles -d2/dx2 + kappa^2 +- kappa'") {
    auto w = make_single_wall(WallKind::mollifier, 1.0);
    Grid g{5.0, 11}; // h = 1, interior x = -4..4
    auto p = build_witten_pair(w, g);
    REQUIRE(p.h_plus.size() == 9);
    // x = 0 is interior index 4: kappa = 0, kappa' = 2
    CHECK(static_cast<double>(p.h_plus.diag[4]) == doctest::Approx(2.0 + 0.0 + 2.0));
    CHECK(static_cast<double>(p.h_minus.diag[4]) == doctest::Approx(2.0 + 0.0 - 2.0));
    CHECK(static_cast<double>(p.h_plus.off[0]) == doctest::Approx(-1.0));

    CHECK_THROWS_AS(build_witten_pair(make_single_wall(WallKind::sgn, 1.0), g),
                    invalid_parameter);
    CHECK_THROWS_AS(build_witten_pair(w, Grid{5.0, 10}), invalid_parameter);  // even N
    CHECK_THROWS_AS(build_witten_pair(w, Grid{0.5, 11}), invalid_parameter);  // box too small
}

TEST_CASE("tanh wall: single exact zero mode, clean eigenfunction") {
    auto t = make_single_wall(WallKind::tanh_wall, 1.0);
    Grid g{20.0, 4001}; // h = 0.01
    auto sp = dirac_spectrum_in_gap(t, g);
    REQUIRE(sp.states.size() == 1);
    const auto& s = sp.states[0];
    CHECK(s.E == 0.0);
    CHECK(s.zero_mode);
    CHECK(s.lambda_plus == -1.0); // kernel lives in H- only for a rising wall
    CHECK(std::abs(s.lambda_minus) < 1e-9);
    CHECK(sp.warnings.empty());

    // exact zero mode is (1, i)/2 * sech(x)
    double err2 = 0.0;
    for (int i = 0; i < g.N; ++i) {
        const double ex = 0.5 / std::cosh(g.x(i));
        err2 += std::norm(s.up[i] - ex) + std::norm(s.down[i] - std::complex<double>(0.0, ex));
    }
    CHECK(std::sqrt(err2 * g.h()) < 1e-4);
}

TEST_CASE("two walls: paired states at +-a up to the predicted deviation") {
    auto g2 = glue_walls(make_single_wall(WallKind::mollifier, 1.0), 2, 3.0);
    Grid g{19.0, 38001}; // h = 1e-3
    auto sp = dirac_spectrum_in_gap(g2, g);
    REQUIRE(sp.states.size() == 2);
    CHECK(sp.warnings.empty());
    const auto& lo = sp.states[0];
    const auto& hi = sp.states[1];
    CHECK(lo.E == doctest::Approx(-hi.E).epsilon(1e-14));
    CHECK_FALSE(hi.zero_mode);
    CHECK(hi.lambda_plus == doctest::Approx(hi.lambda_minus).epsilon(1e-6));
    // the splitting exceeds the leading-order a by the frozen deviation
    CHECK(hi.E - kA3 == doctest::Approx(kDev3).epsilon(0.01));

    // +-E eigenfunctions: normalized, orthogonal
    double n2 = 0.0;
    std::complex<double> ip(0.0, 0.0);
    for (int i = 0; i < g.N; ++i) {
        n2 += std::norm(hi.up[i]) + std::norm(hi.down[i]);
        ip += std::conj(hi.up[i]) * lo.up[i] + std::conj(hi.down[i]) * lo.down[i];
    }
    CHECK(n2 * g.h() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(ip) * g.h() < 1e-10);
}

TEST_CASE("three walls: exact kernel plus a paired doublet, bump shifts only the doublet") {
    auto g3 = glue_walls(make_single_wall(WallKind::mollifier, 1.0), 3, 2.0);
    Grid g{20.0, 40001};
    auto sp = dirac_spectrum_in_gap(g3, g);
    REQUIRE(sp.states.size() == 3);
    CHECK(sp.states[0].E == doctest::Approx(-sp.states[2].E).epsilon(1e-14));
    CHECK(sp.states[1].E == 0.0);
    CHECK(sp.states[1].zero_mode);
    CHECK(std::abs(sp.states[1].lambda_minus) < 1e-10);
    const double lam1 = sp.states[2].E * sp.states[2].E;
    CHECK(lam1 == doctest::Approx(kLambda1N3).epsilon(1e-6));

    auto spb = dirac_spectrum_in_gap(g3.with_bump(0.3, 1.0, 1.0), g);
    REQUIRE(spb.states.size() == 3);
    CHECK(spb.states[1].E == 0.0); // kernel survives the perturbation
    CHECK(spb.states[1].zero_mode);
    const double lam1b = spb.states[2].E * spb.states[2].E;
    CHECK(lam1b == doctest::Approx(kLambda1N3Bumped).epsilon(1e-6));
}

TEST_CASE("window selects states and rejects bad values") {
    auto g2 = glue_walls(make_single_wall(WallKind::mollifier, 1.0), 2, 3.0);
    Grid g{19.0, 19001};
    SolverOptions opt;
    opt.window = 0.002; // below the splitting a = 2.87e-3: nothing to report
    CHECK(dirac_spectrum_in_gap(g2, g, opt).states.empty());

    opt.window = 1.0; // gap edge
    CHECK_THROWS_AS(dirac_spectrum_in_gap(g2, g, opt), invalid_window);
    opt.window = -0.5;
    CHECK_THROWS_AS(dirac_spectrum_in_gap(g2, g, opt), invalid_window);
}

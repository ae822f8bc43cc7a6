#include "doctest.h"

#include <cmath>
#include <random>

#include "dwdirac/mass_profile.hpp"

using namespace dwdirac;

// Reference values computed once with 50-digit arithmetic.
namespace {
constexpr double kKappaHalf = 0.87006166174267187574;
constexpr double kKappaQuarter = 0.48792498264951603129;
constexpr double kKappaPrimeHalf = 1.0799675767359130083;
constexpr double kC0 = 0.27554989653785438698;
constexpr double kKHalf = 0.23549084430651948296;
constexpr double kLogCosh2 = 1.3250027473578644309;
constexpr double kBumpMass = 1.20690032243787617533; // int_{-1}^{1} exp(1 - 1/(1-u^2))
} // namespace

TEST_CASE("mollifier wall matches reference values") {
    auto w = make_single_wall(WallKind::mollifier, 1.0);
    CHECK(w.kappa(0.5) == doctest::Approx(kKappaHalf).epsilon(1e-14));
    CHECK(w.kappa(0.25) == doctest::Approx(kKappaQuarter).epsilon(1e-14));
    CHECK(w.kappa_prime(0.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(w.kappa_prime(0.5) == doctest::Approx(kKappaPrimeHalf).epsilon(1e-14));
    CHECK(w.kappa(0.0) == 0.0);
    CHECK(w.kappa(1.0) == 1.0);
    CHECK(w.kappa(-3.0) == -1.0);
    CHECK(w.kappa_prime(1.0) == 0.0); // flat outside the core, all derivatives vanish
    CHECK(w.core_half_width() == 1.0);
    CHECK(w.single_wall());
}

TEST_CASE("mollifier wall is odd and C^1 across the core edge") {
    auto w = make_single_wall(WallKind::mollifier, 1.5);
    for (double x : {0.1, 0.37, 0.62, 0.93, 0.999}) {
        CHECK(w.kappa(-x) == doctest::Approx(-w.kappa(x)).epsilon(1e-14));
        CHECK(w.kappa_prime(-x) == doctest::Approx(w.kappa_prime(x)).epsilon(1e-12));
    }
    CHECK(std::abs(w.kappa(0.9999) - 1.5) < 1e-3);
    CHECK(w.kappa_prime(0.9999) < 1e-2);
}

TEST_CASE("kappa_prime agrees with a central difference") {
    auto w = make_single_wall(WallKind::mollifier, 1.0);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    for (int i = 0; i < 40; ++i) {
        const double x = u(rng), h = 1e-5;
        const double fd = (w.kappa(x + h) - w.kappa(x - h)) / (2.0 * h);
        CHECK(w.kappa_prime(x) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("tanh and sgn walls") {
    auto t = make_single_wall(WallKind::tanh_wall, 2.0);
    CHECK(t.kappa(0.7) == doctest::Approx(2.0 * std::tanh(0.7)).epsilon(1e-15));
    CHECK(t.kappa_prime(0.7) ==
          doctest::Approx(2.0 / std::pow(std::cosh(0.7), 2)).epsilon(1e-14));
    CHECK(std::isinf(t.core_half_width()));

    auto s = make_single_wall(WallKind::sgn, 0.5);
    CHECK(s.kappa(3.0) == 0.5);
    CHECK(s.kappa(-0.1) == -0.5);
    CHECK(s.kappa_prime(2.0) == 0.0);
}

TEST_CASE("custom wall interpolates its samples") {
    std::vector<double> xs, ks;
    for (int i = -20; i <= 20; ++i) {
        xs.push_back(0.25 * i);
        ks.push_back(std::tanh(0.25 * i));
    }
    auto c = make_custom_wall(xs, ks, 1.0, 5.0);
    CHECK(c.kappa(0.25) == doctest::Approx(std::tanh(0.25)).epsilon(1e-15));
    CHECK(c.kappa(0.3) == doctest::Approx(std::tanh(0.3)).epsilon(2e-2)); // linear interp
    CHECK(c.kappa(7.0) == 1.0);                                          // clamped tail
    CHECK(c.kappa(-9.0) == -1.0);
    CHECK(c.kappa_prime(0.3) ==
          doctest::Approx((std::tanh(0.5) - std::tanh(0.25)) / 0.25).epsilon(1e-12));
}

TEST_CASE("factory and glue preconditions") {
    CHECK_THROWS_AS(make_single_wall(WallKind::mollifier, 0.0), invalid_parameter);
    CHECK_THROWS_AS(make_single_wall(WallKind::mollifier, -1.0), invalid_parameter);
    CHECK_THROWS_AS(make_single_wall(WallKind::mollifier, std::nan("")), invalid_parameter);
    CHECK_THROWS_AS(make_single_wall(WallKind::custom, 1.0), invalid_parameter);

    auto w = make_single_wall(WallKind::mollifier, 1.0);
    CHECK_THROWS_AS(glue_walls(w, 0, 3.0), invalid_parameter);
    CHECK_THROWS_AS(glue_walls(w, 2, 1.0), spacing_too_small);
    CHECK_THROWS_AS(glue_walls(w, 2, 0.7), spacing_too_small);
    CHECK_THROWS_AS(glue_walls(glue_walls(w, 2, 3.0), 2, 3.0), invalid_parameter);
    CHECK_THROWS_AS(glue_walls(w.with_bump(0.1, 0.0, 1.0), 2, 3.0), invalid_parameter);
    CHECK_THROWS_AS(w.with_bump(0.1, 0.0, 0.0), invalid_parameter);

    // custom walls must be increasing in x and straddle zero
    CHECK_THROWS_AS(make_custom_wall({0.0, 0.0, 1.0}, {-1.0, 0.0, 1.0}, 1.0, 2.0),
                    invalid_parameter);
    CHECK_THROWS_AS(make_custom_wall({-1.0, 1.0}, {1.0, 1.0}, 1.0, 2.0), invalid_parameter);

    // n = 1 is a no-op
    auto g1 = glue_walls(w, 1, 5.0);
    CHECK(g1.single_wall());
    CHECK(g1.kappa(0.4) == w.kappa(0.4));
}

TEST_CASE("glued profile layout: alternating walls, rightmost rising") {
    auto w = make_single_wall(WallKind::mollifier, 1.0);
    auto g = glue_walls(w, 3, 2.0);
    REQUIRE(g.walls().size() == 3);
    CHECK(g.walls()[0].center == -4.0);
    CHECK(g.walls()[1].center == 0.0);
    CHECK(g.walls()[2].center == 4.0);
    CHECK(g.walls()[0].sign == +1);
    CHECK(g.walls()[1].sign == -1);
    CHECK(g.walls()[2].sign == +1);
    CHECK(g.half_spacing().value() == 2.0);

    CHECK(g.kappa(4.5) == doctest::Approx(w.kappa(0.5)).epsilon(1e-15));
    CHECK(g.kappa(-4.5) == doctest::Approx(w.kappa(-0.5)).epsilon(1e-15));
    CHECK(g.kappa(0.25) == doctest::Approx(-w.kappa(0.25)).epsilon(1e-15));
    CHECK(g.kappa(1.5) == -1.0); // plateau between walls
    CHECK(g.kappa(10.0) == 1.0);
    CHECK(g.kappa(-10.0) == -1.0); // odd wall count: opposite asymptotes

    auto g2 = glue_walls(w, 2, 3.0);
    CHECK(g2.walls()[0].sign == -1);
    CHECK(g2.kappa(-10.0) == 1.0); // even count: same sign on both sides

    auto ga = glue_walls_at(w, {-3.0, 0.0, 3.5});
    CHECK_FALSE(ga.half_spacing().has_value());
    CHECK(ga.walls()[2].sign == +1);
}

TEST_CASE("antiderivative matches closed forms and references") {
    auto w = make_single_wall(WallKind::mollifier, 1.0);
    auto K = antiderivative(w);
    CHECK(K(0.0) == 0.0);
    CHECK(K(0.5) == doctest::Approx(kKHalf).epsilon(5e-14));
    CHECK(K.flat_tail_offset() == doctest::Approx(kC0).epsilon(5e-14));
    CHECK(K(2.0) == doctest::Approx(2.0 - kC0).epsilon(5e-14));
    CHECK(K(-2.0) == doctest::Approx(K(2.0)).epsilon(1e-15)); // odd kappa, even K

    auto t = make_single_wall(WallKind::tanh_wall, 1.0);
    auto Kt = antiderivative(t);
    CHECK(Kt(2.0) == doctest::Approx(kLogCosh2).epsilon(1e-14));
    CHECK(Kt(700.0) == doctest::Approx(700.0 - M_LN2).epsilon(1e-14)); // overflow-safe tail

    auto t3 = make_single_wall(WallKind::tanh_wall, 3.0);
    CHECK(antiderivative(t3)(2.0) == doctest::Approx(3.0 * kLogCosh2).epsilon(1e-14));

    auto s = make_single_wall(WallKind::sgn, 2.0);
    CHECK(antiderivative(s)(-1.5) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("antiderivative differentiates back to kappa (glued, bumped, custom)") {
    auto base = make_single_wall(WallKind::mollifier, 1.0);
    std::vector<MassProfile> profiles;
    profiles.push_back(base);
    profiles.push_back(glue_walls(base, 2, 2.5));
    profiles.push_back(glue_walls(base, 3, 2.0).with_bump(0.3, 1.0, 1.0));
    profiles.push_back(glue_walls(make_single_wall(WallKind::tanh_wall, 1.0), 2, 4.0));
    {
        std::vector<double> xs, ks;
        for (int i = -12; i <= 12; ++i) {
            xs.push_back(0.5 * i);
            ks.push_back(std::tanh(0.5 * i));
        }
        profiles.push_back(glue_walls(make_custom_wall(xs, ks, 1.0, 6.01), 2, 6.5));
    }

    std::mt19937_64 rng(777);
    for (const auto& p : profiles) {
        auto K = antiderivative(p);
        std::uniform_real_distribution<double> u(-8.0, 8.0);
        for (int i = 0; i < 30; ++i) {
            const double x = u(rng), h = 1e-6;
            const double fd = (K(x + h) - K(x - h)) / (2.0 * h);
            CHECK(fd == doctest::Approx(p.kappa(x)).epsilon(1e-6).scale(1.0));
        }
        CHECK(K(0.0) == 0.0);
    }
}

TEST_CASE("bump contributes exactly its mass to the antiderivative") {
    auto g = glue_walls(make_single_wall(WallKind::mollifier, 1.0), 3, 2.0);
    auto gb = g.with_bump(0.3, 1.0, 1.0);
    auto K = antiderivative(g);
    auto Kb = antiderivative(gb);
    CHECK(Kb(10.0) - K(10.0) == doctest::Approx(0.3 * kBumpMass).epsilon(1e-13));
    CHECK(Kb(-10.0) - K(-10.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(gb.kappa(1.0) == doctest::Approx(g.kappa(1.0) + 0.3).epsilon(1e-14));
    CHECK(gb.kappa(2.5) == g.kappa(2.5)); // outside the bump support
}

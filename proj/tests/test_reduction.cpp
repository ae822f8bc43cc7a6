#include "doctest.h"

#include <cmath>
#include <complex>

#include "dwdirac/mass_profile.hpp"
#include "dwdirac/reduction.hpp"

using namespace dwdirac;

namespace {

const std::complex<double> kI{0.0, 1.0};

// splitting scales 2*gamma^2*e^{-2K(delta)} for the mollifier wall, 40-digit reference
constexpr double kA2 = 0.02124294919677522;
constexpr double kA3 = 0.002874920546326549;
constexpr double kA6 = 7.12621556194977e-6;
// overlap <alpha*_L, D alpha*_R> at delta = 2 is +i times this, componentwise quadrature
constexpr double kALR2 = 0.021242949196775224941;

// |det root| - a for two mollifier walls, high-precision references
constexpr double kDev2Wall3 = 6.669429197e-8;
// |det root| - sqrt(2) a for three walls
constexpr double kDev3Wall3 = 1.83948241901e-7;

} // namespace

TEST_CASE("leading matrix is the closed tridiagonal form") {
    auto base = make_single_wall(WallKind::mollifier, 1.0);
    Eigen::MatrixXcd m0 = leading_matrix(4, 3.0, base);
    REQUIRE(m0.rows() == 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i == j)
                CHECK(std::abs(m0(i, j)) == 0.0);
            else if (j == i + 1)
                CHECK(std::abs(m0(i, j) + kI * kA3) < 1e-13 * kA3);
            else if (j == i - 1)
                CHECK(std::abs(m0(i, j) - kI * kA3) < 1e-13 * kA3);
            else
                CHECK(std::abs(m0(i, j)) == 0.0);
        }

    CHECK(std::abs(leading_matrix(2, 2.0, base)(0, 1) + kI * kA2) < 1e-13 * kA2);
    CHECK(std::abs(leading_matrix(2, 6.0, base)(0, 1) + kI * kA6) < 1e-12 * kA6);

    CHECK_THROWS_AS(leading_matrix(0, 3.0, base), invalid_parameter);
    CHECK_THROWS_AS(leading_matrix(2, 0.0, base), invalid_parameter);
}

TEST_CASE("leading eigenpairs match the cosine law and diagonalize M0") {
    auto base = make_single_wall(WallKind::mollifier, 1.0);
    const double pi = 3.14159265358979323846;

    for (int n : {2, 3, 5}) {
        LeadingPairs lp = leading_eigenpairs(n, 3.0, base);
        REQUIRE(static_cast<int>(lp.values.size()) == n);
        CHECK(lp.a == doctest::Approx(kA3).epsilon(1e-12));

        // ascending 2a cos(k pi/(n+1)), k = n..1
        for (int m = 0; m < n; ++m) {
            const int k = n - m;
            CHECK(lp.values[m] ==
                  doctest::Approx(2.0 * lp.a * std::cos(k * pi / (n + 1))).epsilon(1e-12));
        }

        Eigen::MatrixXcd m0 = leading_matrix(n, 3.0, base);
        for (int m = 0; m < n; ++m) {
            const Eigen::VectorXcd v = lp.vectors.col(m);
            CHECK(std::abs(v.norm() - 1.0) < 1e-14);
            CHECK((m0 * v - lp.values[m] * v).norm() < 1e-14 * lp.a);
        }
        CHECK((lp.vectors.adjoint() * lp.vectors - Eigen::MatrixXcd::Identity(n, n))
                  .cwiseAbs()
                  .maxCoeff() < 1e-13);
    }

    // odd n keeps an exact zero in the middle
    LeadingPairs lp3 = leading_eigenpairs(3, 2.5, base);
    CHECK(lp3.values[1] == 0.0);
}

TEST_CASE("asymptotic eigenvalues: odd closed forms, n = 2 fallback") {
    auto base = make_single_wall(WallKind::mollifier, 1.0);

    auto odd = asymptotic_eigenvalues(3, 3.0, base, true);
    LeadingPairs lp = leading_eigenpairs(3, 3.0, base);
    REQUIRE(odd.size() == 3);
    for (int m = 0; m < 3; ++m) CHECK(odd[m] == lp.values[m]);

    // odd kappa has K(-delta) = K(delta), so the n = 2 general form must agree
    auto gen = asymptotic_eigenvalues(2, 3.0, base, false);
    REQUIRE(gen.size() == 2);
    CHECK(gen[0] == doctest::Approx(-kA3).epsilon(1e-12));
    CHECK(gen[1] == doctest::Approx(kA3).epsilon(1e-12));

    CHECK_THROWS_AS(asymptotic_eigenvalues(3, 3.0, base, false), not_implemented);
}

TEST_CASE("approximate eigenfunctions carry the eigenvector coefficients") {
    auto base = make_single_wall(WallKind::mollifier, 1.0);
    ApproximateEigenfunctions ae = approximate_eigenfunctions(2, 3.0, base);
    REQUIRE(ae.functions.size() == 2);
    REQUIRE(ae.functions[0].modes.size() == 2);

    for (int m = 0; m < 2; ++m)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(ae.functions[m].coeff[j] - ae.pairs.vectors(j, m)) == 0.0);

    // combination evaluates to the coefficient-weighted mode sum
    const double x = 0.7;
    Spinor2 s = ae.functions[1](x);
    Spinor2 m0 = ae.functions[1].modes[0](x);
    Spinor2 m1 = ae.functions[1].modes[1](x);
    const complexd up = ae.functions[1].coeff[0] * m0.up + ae.functions[1].coeff[1] * m1.up;
    const complexd dn =
        ae.functions[1].coeff[0] * m0.down + ae.functions[1].coeff[1] * m1.down;
    CHECK(std::abs(s.up - up) < 1e-16);
    CHECK(std::abs(s.down - dn) < 1e-16);
}

TEST_CASE("reduced matrix at two walls: quadrature blocks and resolvent tail") {
    auto base = make_single_wall(WallKind::mollifier, 1.0);
    ReductionContext ctx(glue_walls(base, 2, 2.0));
    REQUIRE(ctx.n() == 2);
    CHECK(ctx.window() == doctest::Approx(0.9));

    ReducedMatrix rm = ctx.assemble(0.0);
    CHECK(rm.n == 2);
    CHECK(rm.delta == doctest::Approx(2.0));

    // A reproduces the componentwise overlap integral and is Hermitian with zero diagonal
    CHECK(std::abs(rm.A(1, 0) - kI * kALR2) < 1e-12 * kALR2);
    CHECK((rm.A - rm.A.adjoint()).cwiseAbs().maxCoeff() < 1e-13 * kALR2);
    CHECK(std::abs(rm.A(0, 0)) < 1e-18);
    CHECK(std::abs(rm.A(1, 1)) < 1e-18);

    // opposite-sign spinors are pointwise orthogonal: G = I exactly for n = 2
    CHECK((rm.G - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-13);

    // R is Hermitian to solver accuracy and exponentially small
    CHECK(rm.hermiticity_defect < 1e-14);
    CHECK(rm.R.cwiseAbs().maxCoeff() < 1e-4);
    CHECK(rm.R.cwiseAbs().maxCoeff() > 1e-6);

    CHECK_THROWS_AS(ctx.assemble(1.0), invalid_parameter);
    CHECK_THROWS_AS(ctx.assemble(-2.3), invalid_parameter);
}

TEST_CASE("reduced matrix approaches M0 - E at the predicted exponential rate") {
    auto base = make_single_wall(WallKind::mollifier, 1.0);
    const double delta = 3.0;
    ReductionContext ctx(glue_walls(base, 3, delta));
    const double E = 0.5 * kA3;
    ReducedMatrix rm = ctx.assemble(E);
    Eigen::MatrixXcd m0 = leading_matrix(3, delta, base);

    const Eigen::MatrixXcd diff =
        rm.M() - (m0 - E * Eigen::MatrixXcd::Identity(3, 3));
    CHECK(diff.cwiseAbs().maxCoeff() < std::exp(-4.0 * delta));

    // the Gram matrix only couples equal-sign walls, two spacings apart; the overlap
    // of translates at distance 4*delta carries a linear-in-delta prefactor
    CHECK(std::abs(rm.G(0, 0) - 1.0) < 1e-13);
    CHECK(std::abs(rm.G(0, 1)) < 1e-13);
    CHECK(std::abs(rm.G(0, 2)) > 1e-8);
    CHECK(std::abs(rm.G(0, 2)) < 30.0 * delta * std::exp(-4.0 * delta));
}

TEST_CASE("reduced_det is the real determinant of the Hermitized matrix") {
    ReducedMatrix m;
    m.n = 2;
    m.E = 0.3;
    m.A = Eigen::MatrixXcd::Zero(2, 2);
    m.A(0, 1) = -kI;
    m.A(1, 0) = kI;
    m.G = Eigen::MatrixXcd::Identity(2, 2);
    m.R = Eigen::MatrixXcd::Zero(2, 2);
    CHECK(reduced_det(m) == doctest::Approx(0.3 * 0.3 - 1.0).epsilon(1e-14));
}

TEST_CASE("det roots of two walls sit at +-a up to the resolvent correction") {
    auto base = make_single_wall(WallKind::mollifier, 1.0);
    ReductionContext ctx(glue_walls(base, 2, 3.0));
    RootReport rep = det_roots(ctx);
    REQUIRE(rep.roots.size() == 2);
    CHECK(rep.warnings.empty());
    CHECK(std::abs(rep.roots[0] + rep.roots[1]) < 1e-12 * kA3);

    const double dev = rep.roots[1] - kA3;
    CHECK(dev == doctest::Approx(kDev2Wall3).epsilon(1e-5));

    CHECK_THROWS_AS(det_roots(ctx, 1.0), invalid_window);
    CHECK_THROWS_AS(det_roots(ctx, -0.5), invalid_window);
}

TEST_CASE("det roots of three walls: symmetric pair plus the protected zero") {
    auto base = make_single_wall(WallKind::mollifier, 1.0);
    ReductionContext ctx(glue_walls(base, 3, 3.0));
    LeadingPairs lp = leading_eigenpairs(3, 3.0, base);
    RootReport rep = det_roots(ctx);
    REQUIRE(rep.roots.size() == 3);
    CHECK(std::abs(rep.roots[1]) < 1e-12);
    CHECK(std::abs(rep.roots[0] + rep.roots[2]) < 1e-12 * lp.values[2]);

    const double dev = rep.roots[2] - lp.values[2];
    CHECK(dev == doctest::Approx(kDev3Wall3).epsilon(1e-5));
}

TEST_CASE("corrector is small, orthogonal to the modes, and improves the residual") {
    auto base = make_single_wall(WallKind::mollifier, 1.0);
    const double delta = 3.0;
    ReductionContext ctx(glue_walls(base, 2, delta));
    LeadingPairs lp = leading_eigenpairs(2, delta, base);
    const double E = lp.values[1];
    const Eigen::VectorXcd b = lp.vectors.col(1);

    Corrector c = ctx.corrector(b, E);
    CHECK(c.norm > 0.0);
    CHECK(c.norm < std::exp(-2.0 * delta));
    CHECK(c.ortho_defect < 1e-12);
    CHECK(static_cast<int>(c.eta_up.size()) == ctx.grid().N);

    auto [r0, r1] = ctx.corrected_residuals(b, E);
    CHECK(r1 < 0.05 * r0);

    Corrector again = reconstruct_corrector(ctx, b, E);
    CHECK(again.norm == doctest::Approx(c.norm).epsilon(1e-12));

    Eigen::VectorXcd bad = Eigen::VectorXcd::Ones(3);
    CHECK_THROWS_AS(ctx.corrector(bad, E), invalid_parameter);
    CHECK_THROWS_AS(ctx.corrected_residuals(bad, E), invalid_parameter);
    CHECK_THROWS_AS(ctx.corrector(b, 2.0), invalid_parameter);
}

TEST_CASE("reduction context validates grid and window options") {
    auto base = make_single_wall(WallKind::mollifier, 1.0);
    auto two = glue_walls(base, 2, 2.0);

    ReductionOptions bad_h;
    bad_h.h = 0.0;
    CHECK_THROWS_AS(ReductionContext(two, bad_h), invalid_parameter);

    ReductionOptions bad_pad;
    bad_pad.pad = -1.0;
    CHECK_THROWS_AS(ReductionContext(two, bad_pad), invalid_parameter);

    ReductionOptions bad_window;
    bad_window.window = 1.0;
    CHECK_THROWS_AS(ReductionContext(two, bad_window), invalid_window);

    ReductionOptions wide;
    wide.window = 0.5;
    ReductionContext ctx(two, wide);
    CHECK(ctx.window() == doctest::Approx(0.5));
}

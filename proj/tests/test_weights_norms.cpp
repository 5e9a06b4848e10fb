#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bihat/testbed.hpp"
#include "bihat/weights_norms.hpp"

using namespace bihat;

TEST_CASE("sobolev_exponent") {
    CHECK(sobolev_exponent(3.0, 3.0, 1.0, 2) == Catch::Approx(6.0).epsilon(1e-12));
    CHECK(sobolev_exponent(2.0, 2.0, 0.5, 1) == Catch::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_WITH(sobolev_exponent(2.0, 2.0, 1.0, 1), "scaling gives q = infinity or negative");
    CHECK_THROWS(sobolev_exponent(1.0, 2.0, 0.5, 1));
}

TEST_CASE("exponent tuple invariant") {
    CHECK_NOTHROW(ExponentTuple(3.0, 3.0, 6.0, 1.0, 2));
    CHECK_THROWS(ExponentTuple(3.0, 3.0, 5.0, 1.0, 2));
}

TEST_CASE("ball family geometry") {
    const PeriodicGrid grid(1, 256);
    const BallFamily fam(grid);
    REQUIRE(!fam.balls.empty());
    for (const Ball& b : fam.balls) {
        REQUIRE(b.radius >= 2.0 * grid.h());
        REQUIRE(b.radius <= grid.period / 4.0);
        // radii sit off the half-integer-h lattice
        const double q = b.radius / (0.5 * grid.h());
        REQUIRE(std::fabs(q - std::round(q)) > 1e-9);
    }
}

TEST_CASE("apq constant: flat weights and scale invariance") {
    const PeriodicGrid grid(1, 128);
    const BallFamily fam(grid);
    const GridFunction one(grid, 1.0);
    CHECK(apq_constant(one, 2.0, 2.0, fam) == Catch::Approx(1.0).margin(1e-12));

    const GridFunction c(grid, 7.5);
    CHECK(apq_constant(c, 2.0, 2.0, fam) == Catch::Approx(1.0).margin(1e-10));

    // Jensen: the constant never drops below 1
    const GridFunction w = make_power_weight(-0.5, {1.0, 0.0}, grid);
    CHECK(apq_constant(w, 2.0, 2.0, fam) >= 1.0 - 1e-12);
    CHECK_THROWS(apq_constant(one, 2.0, 2.0, BallFamily{}));
}

TEST_CASE("bilinear weight constant") {
    const PeriodicGrid grid(1, 128);
    const BallFamily fam(grid);
    const GridFunction one(grid, 1.0);
    CHECK(bilinear_weight_constant(one, one, 3.0, 3.0, 6.0, fam) == Catch::Approx(1.0).margin(1e-12));

    const GridFunction w1 = make_power_weight(-0.3, {1.0, 0.0}, grid);
    const GridFunction w2 = make_power_weight(-0.3, {4.0, 0.0}, grid);
    const double q = sobolev_exponent(2.0, 2.0, 0.5, 1);
    const double a = bilinear_weight_constant(w1, w2, 2.0, 2.0, q, fam);
    const double b = bilinear_weight_constant(w2, w1, 2.0, 2.0, q, fam);
    CHECK(a == Catch::Approx(b).epsilon(1e-12)); // symmetric in the pairs
    CHECK(std::isfinite(a));

    // refinement stability within factor 2
    const PeriodicGrid fine(1, 256);
    const BallFamily ffam(fine);
    const double af = bilinear_weight_constant(make_power_weight(-0.3, {1.0, 0.0}, fine),
                                               make_power_weight(-0.3, {4.0, 0.0}, fine), 2.0, 2.0, q, ffam);
    CHECK(af <= 2.0 * a);
    CHECK(a <= 2.0 * af);
}

TEST_CASE("weighted Lp norm") {
    const PeriodicGrid grid(1, 128);
    const GridFunction one(grid, 1.0);
    const GridFunction f = make_gaussian(grid, {3.0, 0.0}, 0.3);

    CHECK(weighted_Lp_norm(f, one, 2.0) == Catch::Approx(lp_norm(f, 2.0)).epsilon(1e-13));
    CHECK(weighted_Lp_norm(one, one, 2.0) == Catch::Approx(std::sqrt(two_pi)).epsilon(1e-12));

    const GridFunction w4(grid, 4.0);
    CHECK(weighted_Lp_norm(f, w4, 2.0) == Catch::Approx(2.0 * lp_norm(f, 2.0)).epsilon(1e-12));

    // absolute homogeneity
    CHECK(weighted_Lp_norm(scaled(f, -3.0), one, 2.0) ==
          Catch::Approx(3.0 * weighted_Lp_norm(f, one, 2.0)).epsilon(1e-12));
}

TEST_CASE("campanato norm") {
    const PeriodicGrid grid(1, 128);
    const BallFamily fam(grid);
    const GridFunction zero(grid);
    CHECK(campanato_norm(zero, 2.0, 0.1, fam) == 0.0);

    const GridFunction one(grid, 1.0);
    CHECK(campanato_norm(one, 2.0, 0.0, fam) == Catch::Approx(1.0).margin(1e-12));

    const GridFunction f = make_gaussian(grid, {3.0, 0.0}, 0.3);
    CHECK(campanato_norm(f, 2.0, 0.0, fam) <= sup_norm(f) * (1.0 + 1e-12));
}

TEST_CASE("bilinear campanato norm") {
    const PeriodicGrid grid(1, 128);
    const HeatSemigroup sg{grid, 2.0};
    const BallFamily fam(grid);
    const GridFunction c1(grid, 2.0), c2(grid, -1.0);
    CHECK(bilinear_campanato_norm(c1, c2, 2.0, 0.1, sg, fam) <= 1e-12);

    const GridFunction f = make_gaussian(grid, {3.0, 0.0}, 0.25);
    const GridFunction g = make_gaussian(grid, {3.4, 0.0}, 0.3);
    const double a = bilinear_campanato_norm(f, g, 2.0, 0.1, sg, fam);
    const double b = bilinear_campanato_norm(g, f, 2.0, 0.1, sg, fam);
    CHECK(a == Catch::Approx(b).epsilon(1e-12)); // symmetric in (f, g)
    CHECK(std::isfinite(a));

    // refinement stability
    const PeriodicGrid fine(1, 256);
    const HeatSemigroup sgf{fine, 2.0};
    const BallFamily famf(fine);
    const double af = bilinear_campanato_norm(make_gaussian(fine, {3.0, 0.0}, 0.25),
                                              make_gaussian(fine, {3.4, 0.0}, 0.3), 2.0, 0.1, sgf, famf);
    CHECK(af <= 2.0 * a);
    CHECK(a <= 2.0 * af);
}

TEST_CASE("semigroup campanato tilde upper bound") {
    const PeriodicGrid grid(1, 128);
    const HeatSemigroup sg{grid, 2.0};
    const BallFamily fam(grid);
    const GridFunction c1(grid, 1.0), c2(grid, 2.0);
    CHECK(semigroup_campanato_tilde(c1, c2, 2.0, 0.1, sg, fam) <= 1e-12);

    const GridFunction f = make_gaussian(grid, {3.0, 0.0}, 0.25);
    const GridFunction g = make_gaussian(grid, {3.4, 0.0}, 0.3);
    const double tilde = semigroup_campanato_tilde(f, g, 2.0, 0.1, sg, fam);
    const double plain = bilinear_campanato_norm(f, g, 2.0, 0.1, sg, fam);
    CHECK(tilde <= 4.0 * plain);
    CHECK(plain <= 4.0 * tilde);

    // |B|^{-lambda} is monotone in lambda on the sub-family of balls with
    // |B| < 1
    BallFamily small;
    for (const Ball& b : fam.balls)
        if (ball_volume(grid, b) < 1.0) small.balls.push_back(b);
    REQUIRE(!small.balls.empty());
    CHECK(semigroup_campanato_tilde(f, g, 2.0, 0.3, sg, small) >=
          semigroup_campanato_tilde(f, g, 2.0, 0.1, sg, small));
}

TEST_CASE("testability constant") {
    const PeriodicGrid grid(1, 128);
    const BallFamily fam(grid);
    const GridFunction one(grid, 1.0);

    // flat weights with the Sobolev-scaled phi exponent: finite
    const double alpha = 0.5;
    const double q = sobolev_exponent(2.0, 2.0, 1.0 - alpha, 1);
    const double phi_exp = alpha - 2.0; // alpha - 2n
    const double c = testability_constant(one, one, one, 2.0, 2.0, q, phi_exp, 2.0, fam);
    CHECK(std::isfinite(c));
    CHECK(c > 0.0);

    // scaling u doubles the constant (q > 1 branch uses (avg u^{qt})^{1/qt})
    const GridFunction u2(grid, 2.0);
    CHECK(testability_constant(u2, one, one, 2.0, 2.0, q, phi_exp, 2.0, fam) ==
          Catch::Approx(2.0 * c).epsilon(1e-12));

    CHECK_THROWS(testability_constant(one, one, one, 2.0, 2.0, q, phi_exp, 1.0, fam)); // t must be > 1
    CHECK_THROWS(testability_constant(one, one, one, 2.0, 2.0, q, phi_exp, 2.0, BallFamily{}));

    // q <= 1 branch
    const double cq = testability_constant(one, one, one, 2.0, 2.0, 0.9, phi_exp, 2.0, fam);
    CHECK(std::isfinite(cq));
}

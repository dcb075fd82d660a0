#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "copulas/copula.hpp"
#include "copulas/grid.hpp"
#include "copulas/metrics.hpp"
#include "copulas/shuffle.hpp"

using namespace copulas;

namespace {

Copula fig1_shuffle() { return to_copula(ShuffleOfM::make({0.0, 0.2, 0.7, 1.0}, {3, 1, 2}, {false, true, false})); }

std::vector<Copula> builtins() {
    return {frechet_m(),
            frechet_w(),
            product_pi(),
            fgm(1.0),
            fgm(-1.0),
            fgm(0.5),
            to_copula(straight_shuffle(0.3)),
            fig1_shuffle(),
            transpose(fgm(0.7)),
            transpose(fig1_shuffle())};
}

}  // namespace

TEST_CASE("eval on the basic copulas") {
    CHECK(frechet_m().eval(0.3, 0.7) == 0.3);
    CHECK(frechet_w().eval(0.3, 0.5) == 0.0);
    CHECK(fgm(1.0).eval(0.5, 0.5) == doctest::Approx(0.3125).epsilon(1e-15));
    CHECK(fig1_shuffle().eval(0.1, 0.9) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(product_pi()(0.4, 0.6) == doctest::Approx(0.24));
}

TEST_CASE("eval rejects points outside the unit square") {
    CHECK_THROWS_AS(frechet_m().eval(-0.1, 0.5), std::domain_error);
    CHECK_THROWS_AS(product_pi().eval(0.5, 1.5), std::domain_error);
    CHECK_THROWS_AS(fgm(0.2).eval(std::nan(""), 0.5), std::domain_error);
}

TEST_CASE("FGM parameter range") {
    CHECK_NOTHROW(fgm(-1.0));
    CHECK_NOTHROW(fgm(1.0));
    CHECK_THROWS_AS(fgm(1.0000001), std::invalid_argument);
    CHECK_THROWS_AS(FGMParams::make(-2.0), std::invalid_argument);
}

TEST_CASE("volume") {
    CHECK(volume(product_pi(), Rectangle::make(0, 0.5, 0, 0.5)) == doctest::Approx(0.25));
    CHECK(volume(frechet_m(), Rectangle::make(0, 0.5, 0.5, 1)) == 0.0);
    CHECK(volume(to_copula(straight_shuffle(0.3)), Rectangle::make(0, 0.2, 0, 0.8)) ==
          doctest::Approx(0.2).epsilon(1e-14));
    CHECK_THROWS_AS(Rectangle::make(0.6, 0.5, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(Rectangle::make(0, 0.5, 0, 1.2), std::invalid_argument);
}

TEST_CASE("partial derivatives") {
    for (double t : {0.0, 0.1, 0.5, 0.9, 1.0}) CHECK(product_pi().partial2(0.5, t) == 0.5);
    CHECK(frechet_m().partial1(0.3, 0.7) == 1.0);
    CHECK(frechet_m().partial1(0.7, 0.3) == 0.0);
    CHECK(fgm(1.0).partial2(0.5, 0.0) == doctest::Approx(0.75));

    SUBCASE("one-sided conventions at kinks") {
        // Right-hand value at the kink, left-hand at the upper edge.
        CHECK(frechet_m().partial1(0.4, 0.4) == 0.0);
        CHECK(frechet_m().partial1(1.0, 1.0) == 1.0);
        CHECK(frechet_w().partial1(0.4, 0.6) == 1.0);
        CHECK(frechet_w().partial1(1.0, 0.0) == 0.0);
        const Copula s = to_copula(straight_shuffle(0.3));
        // At the cut u = 0.7 the right-hand piece starts at height 0.
        CHECK(s.partial1(0.7, 0.05) == 1.0);
        CHECK(s.partial1(0.69, 0.05) == 0.0);
    }

    SUBCASE("finite differences agree with analytic FGM derivatives") {
        const Copula c = fgm(0.7);
        double worst = 0.0;
        for (int i = 0; i <= 64; ++i) {
            for (int j = 0; j <= 64; ++j) {
                const double u = i / 64.0;
                const double v = j / 64.0;
                if (v < kFiniteDifferenceStep || v > 1 - kFiniteDifferenceStep) continue;
                if (u < kFiniteDifferenceStep || u > 1 - kFiniteDifferenceStep) continue;
                worst = std::max(worst, std::abs(finite_difference_partial2(c, u, v) - c.partial2(u, v)));
                worst = std::max(worst, std::abs(finite_difference_partial1(c, u, v) - c.partial1(u, v)));
            }
        }
        CHECK(worst <= 1e-6);
    }

    SUBCASE("finite differences clamp to [0,1] and stay one-sided at the edge") {
        const Copula c = make_computed("m-copy", [](double u, double v) { return std::min(u, v); });
        CHECK(c.partial1(0.0, 0.5) == doctest::Approx(1.0));
        CHECK(c.partial1(1.0, 0.5) == doctest::Approx(0.0));
        CHECK(c.partial2(0.3, 0.9) == doctest::Approx(0.0));
    }
}

TEST_CASE("transpose") {
    const Copula s = to_copula(straight_shuffle(0.3));
    const Copula st = transpose(s);
    CHECK(st.kind() == CopulaKind::Transpose);
    CHECK(st.eval(0.8, 0.2) == doctest::Approx(s.eval(0.2, 0.8)).epsilon(1e-15));
    CHECK(st.eval(0.8, 0.2) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(sup_distance(transpose(frechet_m()), frechet_m(), 64) == 0.0);
    CHECK(sup_distance(transpose(frechet_w()), frechet_w(), 64) == 0.0);

    const Copula pi = product_pi();
    const Copula half = make_computed("half", [](double u, double v) { return u * v; }, true, false);
    CHECK(transpose(half).right_invertible());
    CHECK_FALSE(transpose(half).left_invertible());
    CHECK(&transpose(transpose(pi)).impl() == &pi.impl());

    for (const auto& c : builtins()) {
        const Copula tt = transpose(transpose(c));
        for (int i = 0; i <= 64; ++i) {
            for (int j = 0; j <= 64; ++j) {
                REQUIRE(tt.eval(i / 64.0, j / 64.0) == c.eval(i / 64.0, j / 64.0));
            }
        }
    }
}

TEST_CASE("copula axioms for every built-in") {
    for (const auto& c : builtins()) {
        CAPTURE(c.expression());
        const ValidationReport r = validate(c, 64, 1e-12);
        CHECK(r.passed);
        CHECK(r.min_volume >= -1e-12);
        double boundary = 0.0;
        for (int k = 0; k <= 1024; ++k) {
            const double t = k / 1024.0;
            boundary = std::max({boundary, std::abs(c.eval(t, 1.0) - t), std::abs(c.eval(1.0, t) - t),
                                 std::abs(c.eval(t, 0.0)), std::abs(c.eval(0.0, t))});
        }
        CHECK(boundary <= 1e-12);
    }
}

TEST_CASE("1-Lipschitz on random pairs") {
    std::mt19937_64 rng(20260101);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& c : builtins()) {
        CAPTURE(c.expression());
        double worst = 0.0;
        for (int k = 0; k < 2000; ++k) {
            const double u1 = unit(rng);
            const double u2 = unit(rng);
            const double v = unit(rng);
            worst = std::max(worst, std::abs(c.eval(u1, v) - c.eval(u2, v)) - std::abs(u1 - u2));
            worst = std::max(worst, std::abs(c.eval(v, u1) - c.eval(v, u2)) - std::abs(u1 - u2));
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("sup_distance") {
    CHECK(sup_distance(frechet_m(), frechet_m(), 64) == 0.0);
    const LatticeMaximum mw = sup_distance_witness(frechet_m(), frechet_w(), 2);
    CHECK(mw.value == 0.5);
    CHECK(mw.x == 0.5);
    CHECK(mw.y == 0.5);
    const LatticeMaximum pf = sup_distance_witness(product_pi(), fgm(1.0), 64);
    CHECK(pf.value == doctest::Approx(0.0625).epsilon(1e-14));
    CHECK(pf.x == 0.5);
    CHECK(pf.y == 0.5);
}

TEST_CASE("validate") {
    CHECK(validate(product_pi(), 64, 1e-9).passed);
    CHECK(validate(fgm(1.0), 64, 1e-12).passed);

    // max(0,u+v-1)^2 is supermodular, so its volumes are nonnegative; it is
    // not a copula because C(u,1) = u^2.
    const Copula squared_w = make_computed("sqw", [](double u, double v) {
        const double w = std::max(0.0, u + v - 1.0);
        return w * w;
    });
    const ValidationReport sq = validate(squared_w, 64, 1e-9);
    CHECK_FALSE(sq.passed);
    CHECK(sq.boundary_error == doctest::Approx(0.25));
    CHECK(sq.min_volume >= 0.0);

    // FGM formula with theta = 2 keeps the margins but has negative density
    // near the corners.
    const Copula fgm2 = make_computed("fgm2", [](double u, double v) {
        return u * v + 2.0 * u * v * (1.0 - u) * (1.0 - v);
    });
    const ValidationReport f2 = validate(fgm2, 64, 1e-9);
    CHECK_FALSE(f2.passed);
    CHECK(f2.boundary_error <= 1e-15);
    CHECK(f2.min_volume < -1e-6);

    CHECK_THROWS_AS(validate(product_pi(), 1, 1e-9), std::invalid_argument);
}

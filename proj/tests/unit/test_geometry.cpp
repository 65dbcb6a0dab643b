#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hyperlac/errors.hpp"
#include "hyperlac/geometry.hpp"

using namespace hyperlac;

TEST_CASE("dimension below two is rejected") {
    CHECK_THROWS_AS(Dimension(1), PreconditionError);
    CHECK(Dimension(3).rho() == 1.0);
}

TEST_CASE("sphere areas") {
    CHECK(sphere_area(Dimension(2)) == doctest::Approx(2 * std::numbers::pi).epsilon(1e-15));
    CHECK(sphere_area(Dimension(3)) == doctest::Approx(4 * std::numbers::pi).epsilon(1e-15));
    CHECK(sphere_area(Dimension(4)) == doctest::Approx(2 * std::numbers::pi * std::numbers::pi).epsilon(1e-15));
}

TEST_CASE("points off the hyperboloid are rejected") {
    CHECK_THROWS_AS(HyperPoint({1.0, 0.5, 0.0}), PreconditionError);
    CHECK_THROWS_AS(HyperPoint({-1.0, 0.0, 0.0}), PreconditionError);
    CHECK_NOTHROW(HyperPoint({std::cosh(2.0), std::sinh(2.0), 0.0}));
}

TEST_CASE("distance from the origin recovers the polar radius") {
    const double dir[] = {0.6, 0.8};
    for (double r : {1e-9, 1e-3, 0.5, 3.0, 20.0}) {
        const auto x = HyperPoint::polar(r, dir);
        CHECK(distance(HyperPoint::origin(Dimension(2)), x) == doctest::Approx(r).epsilon(1e-13));
    }
}

TEST_CASE("distance is symmetric, vanishes on the diagonal and obeys the triangle inequality") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> rad(0, 6), ang(0, 2 * std::numbers::pi);
    auto random_point = [&] {
        const double a = ang(rng);
        const double d[] = {std::cos(a), std::sin(a)};
        return HyperPoint::polar(rad(rng), d);
    };
    for (int i = 0; i < 200; ++i) {
        const auto x = random_point(), y = random_point(), z = random_point();
        CHECK(distance(x, y) == distance(y, x));
        CHECK(distance(x, x) == 0.0);
        CHECK(distance(x, z) <= distance(x, y) + distance(y, z) + 1e-12);
    }
}

TEST_CASE("law of cosines agrees with ambient coordinates") {
    for (double r : {0.3, 2.0}) {
        for (double t : {0.1, 1.5, 4.0}) {
            for (double th : {0.0, 0.7, std::numbers::pi}) {
                const double d1[] = {1.0, 0.0}, d2[] = {std::cos(th), std::sin(th)};
                const double d = distance(HyperPoint::polar(r, d1), HyperPoint::polar(t, d2));
                CHECK(two_point_distance(r, t, th) == doctest::Approx(d).epsilon(1e-12).scale(1));
            }
        }
    }
    CHECK(two_point_distance(2.0, 0.5, 0.0) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(two_point_distance(2.0, 0.5, std::numbers::pi) == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("ball volume") {
    // n = 2: 2 pi (cosh t - 1); n = 3: pi (sinh 2t - 2t)
    for (double t : {1e-4, 0.5, 3.0}) {
        CHECK(ball_volume(t, Dimension(2)) == doctest::Approx(2 * std::numbers::pi * (std::cosh(t) - 1)).epsilon(1e-12));
        CHECK(ball_volume(t, Dimension(3)) ==
              doctest::Approx(std::numbers::pi * (std::sinh(2 * t) - 2 * t)).epsilon(1e-9));
    }
}

TEST_CASE("acosh1p is accurate for tiny arguments") {
    CHECK(acosh1p(0.0) == 0.0);
    CHECK(acosh1p(1e-20) == doctest::Approx(std::sqrt(2e-20)).epsilon(1e-14));
    CHECK(acosh1p(5.0) == doctest::Approx(std::acosh(6.0)).epsilon(1e-15));
}

TEST_CASE("Lorentz form examples") {
    const double d[] = {1.0, 0.0};
    const auto o = HyperPoint::origin(Dimension(2));
    CHECK(lorentz_form(o, o) == 1.0);
    CHECK(lorentz_form(o, HyperPoint::polar(1.0, d)) == doctest::Approx(std::cosh(1.0)).epsilon(1e-15));
    CHECK(lorentz_form(HyperPoint::polar(1.0, d), HyperPoint::polar(2.0, d)) ==
          doctest::Approx(std::cosh(1.0)).epsilon(1e-14));
    CHECK(distance(HyperPoint::polar(1.0, d), HyperPoint::polar(2.0, d)) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("two_point_distance: degenerate sphere and monotonicity in the angle") {
    CHECK(two_point_distance(2.0, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(two_point_distance(2.0, 1.0, std::numbers::pi) == doctest::Approx(3.0).epsilon(1e-15));
    for (double th : {0.0, 1.0, 3.0}) CHECK(two_point_distance(0.0, 1.7, th) == doctest::Approx(1.7).epsilon(1e-15));
    for (double r : {0.01, 1.0, 8.0})
        for (double t : {0.3, 5.0}) {
            double prev = 0;
            for (int i = 0; i <= 200; ++i) {
                const double rho = two_point_distance(r, t, std::numbers::pi * i / 200);
                CHECK(rho >= prev);
                CHECK(rho >= std::abs(r - t) - 1e-12);
                CHECK(rho <= r + t + 1e-12);
                prev = rho;
            }
        }
}

TEST_CASE("ball volume is increasing and not doubling") {
    for (int nn : {2, 3, 4}) {
        const Dimension n(nn);
        CHECK(ball_volume(0.0, n) == 0.0);
        double prev = 0;
        for (int i = 1; i <= 40; ++i) {
            const double v = ball_volume(0.25 * i, n);
            CHECK(v > prev);
            prev = v;
        }
        const double r1 = ball_volume(10, n) / ball_volume(5, n), r2 = ball_volume(20, n) / ball_volume(10, n);
        CHECK(r2 > 1e3);
        CHECK(r2 > r1);
    }
}

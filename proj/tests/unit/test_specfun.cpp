#include <doctest.h>

#include <cmath>
#include <numbers>

#include "golden.hpp"
#include "hyperlac/errors.hpp"
#include "hyperlac/geometry.hpp"
#include "hyperlac/specfun.hpp"
#include "hyperlac/spherical.hpp"

using namespace hyperlac;

namespace {
double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }
}  // namespace

TEST_CASE("log gamma against reference values") {
    CHECK(log_gamma_complex(0.5).real() == doctest::Approx(golden::lgamma_half).epsilon(1e-14));
    CHECK(std::exp(2 * log_gamma_complex(cplx(0, 1)).real()) == doctest::Approx(golden::abs_gamma_i_sq).epsilon(1e-14));
    for (const auto& c : golden::log_gamma_cases) {
        CAPTURE(c.z);
        CHECK(rel(log_gamma_complex(c.z), c.value) < 1e-13);
    }
    CHECK_THROWS_AS(log_gamma_complex(-2.0), PreconditionError);
}

TEST_CASE("log gamma satisfies the recurrence") {
    for (cplx z : {cplx(0.3, 0.2), cplx(5, -7), cplx(-3.5, 1), cplx(40, 90)}) {
        const cplx lhs = std::exp(log_gamma_complex(z + 1.0) - log_gamma_complex(z));
        CHECK(std::abs(lhs - z) / std::abs(z) < 1e-12);
    }
}

TEST_CASE("Plancherel density closed forms") {
    CHECK(plancherel_density(1.0, Dimension(2)) == doctest::Approx(golden::density_n2_l1).epsilon(1e-13));
    CHECK(plancherel_density(2.0, Dimension(4)) == doctest::Approx(golden::density_n4_l2).epsilon(1e-13));
    for (double l : {0.01, 1.0, 17.0, 250.0})
        CHECK(std::abs(plancherel_density(l, Dimension(3)) - l * l) <= 1e-12 * std::max(1.0, l * l));
    CHECK(plancherel_density(0.0, Dimension(2)) == 0.0);
}

TEST_CASE("spherical function against reference values") {
    for (const auto& c : golden::phi_cases) {
        CAPTURE(c.lambda);
        CAPTURE(c.r);
        CAPTURE(c.n);
        const Dimension n(c.n);
        CHECK(std::abs(spherical_phi(c.lambda, c.r, n) - c.value) < 1e-10);
        CHECK(std::abs(spherical_phi_fast(c.lambda, c.r, n) - c.value) < 1e-10);
        CHECK(std::abs(spherical_phi_legendre(c.lambda, c.r, n) - c.value) < 1e-9);
    }
}

TEST_CASE("spherical function: phi(0) = 1, phi_{i rho} = 1, |phi_lambda| <= phi_0") {
    for (int nn : {2, 3, 4}) {
        const Dimension n(nn);
        CHECK(spherical_phi(5.0, 0.0, n).real() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(spherical_phi(cplx(0, n.rho()), 2.0, n) - 1.0) < 1e-10);
        for (double r : {0.5, 2.0, 6.0})
            for (double l : {0.3, 4.0, 40.0})
                CHECK(std::abs(spherical_phi_fast(l, r, n)) <= spherical_phi_fast(0.0, r, n) * (1 + 1e-10));
    }
}

TEST_CASE("fast profile matches pointwise evaluation across its regimes") {
    const double radii[] = {0.0, 1e-3, 0.2, 0.49, 0.51, 1.0, 3.0, 9.0};
    for (int nn : {2, 3, 4})
        for (double l : {0.0, 0.7, 12.0, 200.0}) {
            const auto prof = spherical_phi_profile(l, Dimension(nn), radii);
            for (std::size_t i = 0; i < std::size(radii); ++i)
                CHECK(std::abs(prof[i] - spherical_phi(l, radii[i], Dimension(nn)).real()) < 1e-9);
        }
}

TEST_CASE("n = 3 spherical function is sin(lambda r) / (lambda sinh r)") {
    for (double l : {0.5, 3.0, 80.0})
        for (double r : {0.1, 2.0, 7.0})
            CHECK(std::abs(spherical_phi_fast(l, r, Dimension(3)) - std::sin(l * r) / (l * std::sinh(r))) < 1e-11);
}

TEST_CASE("conical Legendre against reference values") {
    for (const auto& c : golden::conical_cases) {
        CAPTURE(c.mu);
        CHECK(rel(conical_legendre(c.mu, c.lambda, c.t), c.value) < 1e-9);
    }
}

TEST_CASE("Mehler integral against reference values") {
    CHECK(std::abs(mehler_integral(0.5, 0.0, 1.0) - golden::mehler_half_t1) < 1e-10);
    CHECK(std::abs(mehler_integral(0.5, 0.0, 2.0) - golden::mehler_half_t2) < 1e-9);
    // beta = 0 is elementary.
    CHECK(std::abs(mehler_integral(0.0, 3.0, 2.0) - std::sin(6.0) / 3.0) < 1e-10);
}

TEST_CASE("Mehler derivative matches a centred difference") {
    const double h = 1e-4;
    for (double l : {0.5, 7.0}) {
        const cplx fd = (mehler_integral(0.3, l + h, 1.5) - mehler_integral(0.3, l - h, 1.5)) / (2 * h);
        CHECK(std::abs(mehler_integral_dlambda(0.3, l, 1.5) - fd) < 1e-6);
    }
}

TEST_CASE("mehler_base stays accurate as u -> 0") {
    CHECK(detail::mehler_base(1.0, 1e-12) == doctest::Approx(std::sinh(1.0)).epsilon(1e-10));
    CHECK(detail::mehler_base(2.0, 0.5) == doctest::Approx((std::cosh(2.0) - std::cosh(1.5)) / 0.5).epsilon(1e-14));
}

TEST_CASE("log gamma: Gamma(1) = 1 and conjugate symmetry") {
    CHECK(std::abs(log_gamma_complex(1.0)) < 1e-14);
    for (cplx z : {cplx(0.4, 2), cplx(7, -30), cplx(-1.5, 0.25)})
        CHECK(std::abs(log_gamma_complex(std::conj(z)) - std::conj(log_gamma_complex(z))) < 1e-12 * std::abs(log_gamma_complex(z)) + 1e-13);
}

TEST_CASE("spherical function is continuous at lambda = 0") {
    for (int nn : {2, 3, 4})
        for (double r : {0.1, 1.0, 5.0, 11.0})
            CHECK(std::abs(spherical_phi_fast(1e-8, r, Dimension(nn)) - spherical_phi_fast(0.0, r, Dimension(nn))) <= 1e-6);
}

TEST_CASE("Legendre form of phi agrees with the Laplace integral") {
    // Measured against phi_0(r), since phi_lambda(r) itself passes through zero.
    for (int nn : {2, 3, 4})
        for (double r : {0.01, 0.5, 2.0, 5.0, 8.0})
            for (double l : {0.0, 1.0, 7.0, 25.0, 50.0}) {
                const Dimension n(nn);
                const double scale = spherical_phi_fast(0.0, r, n);
                CHECK(std::abs(spherical_phi_legendre(l, r, n) - spherical_phi(l, r, n).real()) <= 1e-8 * scale);
            }
}

TEST_CASE("Plancherel density vanishes like lambda^2") {
    // n = 2: pi lambda tanh(pi lambda) / lambda^2 -> pi^2.
    for (double l : {1e-4, 1e-5})
        CHECK(plancherel_density(l, Dimension(2)) / (l * l) ==
              doctest::Approx(std::numbers::pi * std::numbers::pi).epsilon(1e-6));
    const double a = plancherel_density(1e-4, Dimension(4)) / 1e-8, b = plancherel_density(1e-5, Dimension(4)) / 1e-10;
    CHECK(a > 0);
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
}

TEST_CASE("Mehler conical integral is even in lambda and positive at lambda = 0") {
    for (int nn : {2, 3})
        for (double a : {-0.4, 0.0, 1.0}) {
            if (a <= 0.5 * (1 - nn)) continue;
            const Dimension n(nn);
            CHECK(mehler_conical_integral(a, 0.0, 1.3, n).real() > 0);
            CHECK(std::abs(mehler_conical_integral(a, 0.0, 1.3, n).imag()) < 1e-14);
            CHECK(std::abs(mehler_conical_integral(a, 4.2, 1.3, n) - mehler_conical_integral(a, -4.2, 1.3, n)) < 1e-14);
        }
    CHECK_THROWS_AS(mehler_conical_integral(-0.5, 1.0, 1.0, Dimension(2)), PreconditionError);
}

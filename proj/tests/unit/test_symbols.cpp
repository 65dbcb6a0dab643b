#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <numbers>

#include "golden.hpp"
#include "hyperlac/errors.hpp"
#include "hyperlac/specfun.hpp"
#include "hyperlac/symbols.hpp"
#include "hyperlac/transform.hpp"

using namespace hyperlac;

TEST_CASE("multiplier preconditions") {
    CHECK_THROWS_AS(MultiplierSpec(Dimension(2), -0.5, 1.0), PreconditionError);
    CHECK_THROWS_AS(MultiplierSpec(Dimension(3), -1.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(MultiplierSpec(Dimension(2), 1.0, 0.0), PreconditionError);
    CHECK_NOTHROW(MultiplierSpec(Dimension(2), -0.4, 1.0));
}

TEST_CASE("symbol and derivative against reference values") {
    for (const auto& c : golden::symbol_cases) {
        CAPTURE(c.alpha);
        CAPTURE(c.lambda);
        CAPTURE(c.t);
        CAPTURE(c.n);
        const MultiplierSpec spec(Dimension(c.n), c.alpha, c.t);
        CHECK(std::abs(symbol_m(spec, c.lambda) - c.m) < 1e-9 * std::max(1.0, std::abs(c.m)));
        CHECK(std::abs(symbol_dm(spec, c.lambda) - c.dm) < 1e-8 * std::max(1.0, std::abs(c.dm)));
        const SymbolRule rule(spec, 2 * c.lambda + 1);
        CHECK(std::abs(rule.value(c.lambda) - c.m) < 1e-9 * std::max(1.0, std::abs(c.m)));
        CHECK(std::abs(rule.derivative(c.lambda) - c.dm) < 1e-8 * std::max(1.0, std::abs(c.dm)));
    }
}

TEST_CASE("m^0_t is the spherical function and m is even in lambda") {
    for (int nn : {2, 3})
        for (double t : {0.01, 0.7, 3.0})
            for (double l : {0.0, 2.5, 60.0}) {
                const MultiplierSpec spec(Dimension(nn), 0.0, t);
                const cplx m = symbol_m(spec, l);
                CHECK(std::abs(m - spherical_phi(l, t, Dimension(nn))) < 1e-9);
                CHECK(std::abs(symbol_m(spec, -l) - m) < 1e-13);
            }
}

TEST_CASE("symbol_on_grid agrees with pointwise evaluation") {
    const auto s = SpectralGrid::make(Dimension(2), 256, 4096);
    for (cplx a : {cplx(0), cplx(1), cplx(0.5, 1)}) {
        const MultiplierSpec spec(Dimension(2), a, 1.5);
        const auto v = symbol_on_grid(spec, *s);
        for (std::size_t k = 0; k < s->size(); k += 311)
            CHECK(std::abs(v[k] - symbol_m(spec, s->nodes()[k])) < 1e-9);
    }
}

TEST_CASE("kernel has total mass sigma_{n-1} m(i rho) and vanishes beyond t") {
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
        const MultiplierSpec spec(Dimension(2), 1.0, t);
        const double mass = sphere_area(Dimension(2)) *
                            integrate([&](double r) { return kernel_K(spec, r).real() * std::sinh(r); }, 0.0, t,
                                      QuadOptions{0, 1e-13, 1L << 22});
        CHECK(std::abs(mass - 2 * std::numbers::pi) <= 1e-6);
        CHECK(kernel_K(spec, t + 0.1) == cplx(0));
    }
}

TEST_CASE("kernel is dominated by its two pieces uniformly in t >= 1") {
    for (double a : {0.3, 1.0, 2.0}) {
        std::vector<double> worst;
        for (double t : {1.0, 2.0, 4.0, 8.0}) {
            const MultiplierSpec spec(Dimension(3), a, t);
            double w = 0;
            for (int i = 0; i < 400; ++i) {
                const double r = t * (i + 0.5) / 400;
                const auto [k1, k2] = kernel_split(spec, r);
                w = std::max(w, std::abs(kernel_K(spec, r)) / (k1 + k2));
            }
            worst.push_back(w);
        }
        CAPTURE(a);
        CHECK(std::isfinite(worst.front()));
        CHECK(worst.back() <= 2 * worst.front());
    }
}

TEST_CASE("estimate domains and ratios") {
    CHECK(to_string(EstimateKind::highfreq) == "highfreq");
    CHECK(estimate_kind_from_string("decay") == EstimateKind::decay);
    CHECK_THROWS(estimate_kind_from_string("nonsense"));
    const auto [cal, val] = default_estimate_grids(EstimateKind::decay, 1.0 / 1024, 8.0, 200.0);
    CHECK(val.points.size() >= 4 * cal.points.size());
}

TEST_CASE("check_estimate passes for alpha = 1 in n = 3") {
    for (auto kind : {EstimateKind::decay, EstimateKind::derivative, EstimateKind::highfreq}) {
        const auto [cal, val] = default_estimate_grids(kind, 1.0 / 1024, 8.0, 200.0);
        const auto rep = check_estimate(kind, 1.0, Dimension(3), cal, val, 1.2);
        CAPTURE(to_string(kind));
        CHECK(rep.pass);
        CHECK(rep.constant > 0);
        CHECK(std::isfinite(rep.worst_ratio));
    }
}

TEST_CASE("kernel examples") {
    for (double t : {0.5, 2.0}) {
        const MultiplierSpec spec(Dimension(2), 1.0, t);
        const double c = 2 * std::exp(t) / std::pow(std::expm1(t), 2);
        for (double r : {0.0, 0.3 * t, 0.99 * t}) CHECK(kernel_K(spec, r).real() == doctest::Approx(c).epsilon(1e-12));
    }
    CHECK_THROWS_AS(kernel_K(MultiplierSpec(Dimension(2), 0.0, 1.0), 0.5), PreconditionError);
    const MultiplierSpec s3(Dimension(2), 1.0, 3.0);
    CHECK(kernel_split(s3, 2.0).second == 0.0);
    CHECK(kernel_split(s3, 2.75).second == doctest::Approx(std::exp(-3.0)).epsilon(1e-15));
    CHECK_THROWS_AS(kernel_split(MultiplierSpec(Dimension(2), 1.0, 0.5), 0.1), PreconditionError);
    const MultiplierSpec small(Dimension(3), 1.0, 0.5);
    CHECK(kernel_Ktilde(small, 0.0) == doctest::Approx(8.0));
    CHECK(kernel_Ktilde(small, 0.3) == doctest::Approx(8.0));
    CHECK(kernel_Ktilde(small, 0.5) == 0.0);
}

TEST_CASE("small-t kernel is dominated by the rescaled kernel") {
    for (double a : {0.5, 1.0, 2.0}) {
        double lo = INFINITY, hi = 0;
        for (double t : {1.0 / 64, 1.0 / 8, 1.0 / 2, 1.0}) {
            const MultiplierSpec spec(Dimension(2), a, t);
            for (int i = 0; i < 100; ++i) {
                const double r = t * (i + 0.5) / 100;
                const double q = std::abs(kernel_K(spec, r)) / kernel_Ktilde(spec, r);
                lo = std::min(lo, q);
                hi = std::max(hi, q);
            }
        }
        CAPTURE(a);
        CHECK(hi < 10 * lo);
    }
}

TEST_CASE("heat symbol") {
    CHECK(heat_symbol(0.3, 0.0) == 1.0);
    CHECK(heat_symbol(1.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-16));
    CHECK(heat_symbol(0.25, 3.0) * heat_symbol(0.5, 3.0) == doctest::Approx(heat_symbol(0.75, 3.0)).epsilon(1e-15));
}

TEST_CASE("symbol derivative matches central differences") {
    const double h = 1e-5;
    for (cplx a : {cplx(0), cplx(0.5, 1), cplx(1)})
        for (double t : {0.1, 1.0})
            for (double l : {0.5, 10.0, 90.0}) {
                const MultiplierSpec spec(Dimension(2), a, t);
                const cplx fd = (symbol_m(spec, l + h) - symbol_m(spec, l - h)) / (2 * h);
                CHECK(std::abs(symbol_dm(spec, l) - fd) <= 1e-5);
            }
}

TEST_CASE("derivative bound scales linearly in t") {
    // sup over lambda t in [0, 64] of |dm/dlambda| / t, for t = 2^-2 .. 2^-10.
    std::vector<double> c;
    for (int k = 2; k <= 10; ++k) {
        const double t = std::ldexp(1.0, -k);
        const MultiplierSpec spec(Dimension(2), 0.0, t);
        const SymbolRule rule(spec, 64 / t);
        double m = 0;
        for (int i = 0; i <= 2048; ++i) m = std::max(m, std::abs(rule.derivative(64.0 * i / 2048 / t)) / t);
        c.push_back(m);
    }
    const double lo = *std::min_element(c.begin(), c.end()), hi = *std::max_element(c.begin(), c.end());
    CHECK(lo > 0);
    CHECK(hi <= 1.2 * lo);
}

TEST_CASE("check_estimate contract") {
    const auto [cal, val] = default_estimate_grids(EstimateKind::decay, 1.0 / 1024, 8.0, 200.0);
    CHECK_THROWS(check_estimate(EstimateKind::decay, 0.0, Dimension(2), cal, EstimateGrid{}, 1.2));
    // Validating on the calibration grid itself reproduces C exactly.
    const auto same = check_estimate(EstimateKind::decay, 0.0, Dimension(2), cal, cal, 1.0);
    CHECK(same.worst_ratio == same.constant);
    CHECK(same.pass);
    const auto rep = check_estimate(EstimateKind::decay, 0.0, Dimension(2), cal, val, 1.2);
    CHECK(rep.pass);
}

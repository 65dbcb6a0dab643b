#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <type_traits>
#include <vector>

#include "hyperlac/errors.hpp"

namespace hyperlac {

using cplx = std::complex<double>;

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const noexcept { return nodes.size(); }
};

/// Cached n-point Gauss-Legendre rule (n >= 1). Thread-safe; the reference stays valid.
const GaussRule& gauss_legendre(int n);

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    long max_evals = 1L << 20;
};

/// Nodes and complex weights of a quadrature rule, I ~ sum_j weights[j] h(nodes[j]).
struct WeightedRule {
    std::vector<double> nodes;
    std::vector<cplx> weights;
    std::size_t size() const noexcept { return nodes.size(); }
};

/// Rule for int_0^L u^beta h(u) du with Re beta > -1 and h smooth.
///
/// `scale` is the distance from the interval to the nearest singularity of h,
/// `omega` the largest angular frequency h oscillates with (0 if none).
/// Each increment of `level` halves every panel.
WeightedRule endpoint_rule(cplx beta, double L, double scale, double omega, int level = 0);

/// Composite Gauss-Legendre rule on [a, b] with `panels` equal panels of `order` nodes.
WeightedRule composite_rule(double a, double b, int panels, int order = 16);

namespace detail {
[[noreturn]] void throw_budget(const char* what, long evals);
inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const cplx& z) { return std::abs(z); }
}  // namespace detail

/// Adaptive composite Gauss-Legendre integration of a smooth function.
template <class F>
auto integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
    using R = std::decay_t<decltype(f(a))>;
    const auto& g = gauss_legendre(16);
    long evals = 0;
    auto panel = [&](double lo, double hi) {
        R s{};
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        for (std::size_t j = 0; j < g.size(); ++j) s += g.weights[j] * f(c + h * g.nodes[j]);
        evals += static_cast<long>(g.size());
        return R(h * s);
    };
    if (a == b) return R{};
    struct Seg { double lo, hi; R whole; };
    std::vector<Seg> stack{{a, b, panel(a, b)}};
    R total{};
    R rough = stack.back().whole;
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (s.lo + s.hi);
        R left = panel(s.lo, mid), right = panel(mid, s.hi);
        R fine = left + right;
        const double share = std::abs((s.hi - s.lo) / (b - a));
        const double tol = std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(rough)) * share;
        if (detail::magnitude(fine - s.whole) <= tol || std::abs(s.hi - s.lo) < 1e-13 * std::abs(b - a)) {
            total += fine;
            continue;
        }
        if (evals > opt.max_evals) detail::throw_budget("adaptive Gauss-Legendre", evals);
        stack.push_back({mid, s.hi, right});
        stack.push_back({s.lo, mid, left});
    }
    return total;
}

/// int_0^L u^beta h(u) du, refining endpoint_rule until two levels agree.
template <class H>
cplx integrate_endpoint(H&& h, cplx beta, double L, double scale, double omega, const QuadOptions& opt = {}) {
    if (!(beta.real() > -1.0)) throw PreconditionError("endpoint exponent must have real part > -1");
    if (!(L > 0)) return 0.0;
    long evals = 0;
    auto apply = [&](const WeightedRule& r) {
        cplx s = 0;
        for (std::size_t j = 0; j < r.size(); ++j) s += r.weights[j] * cplx(h(r.nodes[j]));
        evals += static_cast<long>(r.size());
        return s;
    };
    cplx prev = apply(endpoint_rule(beta, L, scale, omega, 0));
    for (int level = 1;; ++level) {
        cplx cur = apply(endpoint_rule(beta, L, scale, omega, level));
        if (std::abs(cur - prev) <= std::max(opt.abs_tol, opt.rel_tol * std::abs(cur))) return cur;
        if (evals > opt.max_evals) detail::throw_budget("endpoint-singular rule", evals);
        prev = cur;
    }
}

}  // namespace hyperlac

#include "hyperlac/quadrature.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace hyperlac {

namespace detail {
void throw_budget(const char* what, long evals) {
    throw QuadratureError(std::string(what) + ": tolerance not reached after " + std::to_string(evals) +
                          " evaluations");
}
}  // namespace detail

namespace {

GaussRule build_gauss_legendre(int n) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1;
            dp = n * (x * p1 - p0) / (x * x - 1);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                // refresh the derivative at the converged node
                p0 = 1;
                p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1);
                break;
            }
        }
        const double w = 2.0 / ((1 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw PreconditionError("Gauss-Legendre order must be positive");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) {
        if (n == 1)
            slot = std::make_unique<GaussRule>(GaussRule{{0.0}, {2.0}});
        else
            slot = std::make_unique<GaussRule>(build_gauss_legendre(n));
    }
    return *slot;
}

WeightedRule composite_rule(double a, double b, int panels, int order) {
    const auto& g = gauss_legendre(order);
    WeightedRule r;
    r.nodes.reserve(static_cast<std::size_t>(panels) * g.size());
    r.weights.reserve(r.nodes.capacity());
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (std::size_t j = 0; j < g.size(); ++j) {
            r.nodes.push_back(lo + 0.5 * h * (g.nodes[j] + 1));
            r.weights.push_back(0.5 * h * g.weights[j]);
        }
    }
    return r;
}

WeightedRule endpoint_rule(cplx beta, double L, double scale, double omega, int level) {
    if (!(beta.real() > -1.0)) throw PreconditionError("endpoint exponent must have real part > -1");
    if (!(L > 0) || !(scale > 0)) throw PreconditionError("endpoint_rule needs L > 0 and scale > 0");
    constexpr int K = 16;
    const auto& g = gauss_legendre(K);
    const double shrink = std::ldexp(1.0, -level);

    double wmax = std::min(1.0, 0.5 * scale);
    if (omega > 0) wmax = std::min(wmax, std::numbers::pi / omega);
    double delta = std::min({L, 0.25 * scale, wmax});
    if (omega > 0) delta = std::min(delta, 1.0 / omega);
    delta *= shrink;
    wmax *= shrink;

    WeightedRule r;

    // Product integration on [0, delta]: interpolate h in shifted Legendre polynomials and
    // integrate each against u^beta exactly.
    std::vector<cplx> moments(K);
    moments[0] = 1.0 / (beta + 1.0);
    for (int k = 1; k < K; ++k) moments[k] = moments[k - 1] * (beta - double(k) + 1.0) / (beta + double(k) + 1.0);
    const cplx scale_pow = std::exp((beta + 1.0) * std::log(delta));
    for (int j = 0; j < K; ++j) {
        const double x = 0.5 * (g.nodes[j] + 1);
        const double y = 2 * x - 1;
        double p0 = 1, p1 = y;
        cplx acc = moments[0];
        if (K > 1) acc += 3.0 * moments[1] * p1;
        for (int k = 2; k < K; ++k) {
            const double p2 = ((2 * k - 1) * y * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
            acc += double(2 * k + 1) * moments[k] * p2;
        }
        r.nodes.push_back(delta * x);
        r.weights.push_back(scale_pow * (0.5 * g.weights[j]) * acc);
    }

    // Geometrically graded panels away from the singular point, capped at wmax.
    double a = delta;
    while (a < L * (1 - 1e-14)) {
        const double b = std::min(L, a + std::min(a, wmax));
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (int j = 0; j < K; ++j) {
            const double u = c + h * g.nodes[j];
            r.nodes.push_back(u);
            r.weights.push_back(h * g.weights[j] * std::exp(beta * std::log(u)));
        }
        a = b;
    }
    return r;
}

}  // namespace hyperlac

#include "hyperlac/spherical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <boost/numeric/odeint.hpp>

#include "hyperlac/errors.hpp"
#include "hyperlac/specfun.hpp"

namespace hyperlac {

namespace {

using State = std::array<double, 2>;

constexpr double kSmallLambda = 0.05;
constexpr double kAsymptoticStart = 0.5;

struct SeriesValue {
    double phi;
    double dphi;
};

// 2F1((rho+i lambda)/2, (rho-i lambda)/2; n/2; -sinh^2 r)
SeriesValue hypergeometric_series(double lambda, Dimension n, double r) {
    const double rho = n.rho();
    const double s = std::sinh(r), c = std::cosh(r);
    const double x = -s * s;
    double term = 1, sum = 1, dsum = 0;
    const double a = 0.5 * n.value();
    for (int k = 1; k < 200; ++k) {
        const double j = k - 1;
        term *= 0.25 * ((rho + 2 * j) * (rho + 2 * j) + lambda * lambda) / ((a + j) * k) * x;
        sum += term;
        dsum += term * k;
        if (std::abs(term) * (k + 1) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    // d/dr x^k = k x^{k-1} (-2 s c) = k x^k (2 c / s)
    const double dphi = (r == 0) ? 0.0 : dsum * (2 * c / s);
    return {sum, dphi};
}

class HarishChandra {
public:
    HarishChandra(double lambda, Dimension n) : rho_(n.rho()), lambda_(lambda), c_(c_function(lambda, n)) {
        const cplx il(0, lambda);
        coeff_.push_back(1.0);
        cplx acc = 0;  // sum_{j<k} a_j mu_j
        for (int k = 1; k < 120; ++k) {
            acc += coeff_.back() * (il - rho_ - 2.0 * (k - 1));
            coeff_.push_back(-rho_ * acc / (double(k) * (double(k) - il)));
        }
    }

    double operator()(double r) const {
        const double x = std::exp(-2 * r);
        cplx sum = 0;
        double xk = 1;
        for (std::size_t k = 0; k < coeff_.size(); ++k) {
            const cplx t = coeff_[k] * xk;
            sum += t;
            if (k > 4 && std::norm(t) < 1e-36 * std::norm(sum)) break;
            xk *= x;
        }
        const double m = std::exp(-rho_ * r);
        const cplx phase(m * std::cos(lambda_ * r), m * std::sin(lambda_ * r));
        return 2 * (c_ * phase * sum).real();
    }

private:
    double rho_;
    double lambda_;
    cplx c_;
    std::vector<cplx> coeff_;
};

}  // namespace

std::vector<double> spherical_phi_profile(double lambda, Dimension n, std::span<const double> radii) {
    lambda = std::abs(lambda);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < 0) throw PreconditionError("spherical_phi_profile: negative radius");
        if (i > 0 && radii[i] < radii[i - 1]) throw PreconditionError("spherical_phi_profile: radii not sorted");
    }
    std::vector<double> out(radii.size());
    const double rho = n.rho();
    const double r0 = lambda > 0 ? std::min(0.5, std::asinh(2.0 / lambda)) : 0.5;
    const bool asymptotic = lambda >= kSmallLambda;
    const double r_ode_end = asymptotic ? kAsymptoticStart : INFINITY;

    std::size_t i = 0;
    for (; i < radii.size() && radii[i] <= r0; ++i) out[i] = hypergeometric_series(lambda, n, radii[i]).phi;

    std::size_t ode_end = i;
    while (ode_end < radii.size() && radii[ode_end] < r_ode_end) ++ode_end;
    if (ode_end > i) {
        // w = sinh^rho(r) phi solves w'' = (rho(rho-1)/sinh^2 r - lambda^2) w
        const auto start = hypergeometric_series(lambda, n, r0);
        const double s0 = std::sinh(r0), c0 = std::cosh(r0);
        State w{std::pow(s0, rho) * start.phi,
                rho * c0 * std::pow(s0, rho - 1) * start.phi + std::pow(s0, rho) * start.dphi};
        const double q = rho * (rho - 1), l2 = lambda * lambda;
        auto rhs = [q, l2](const State& y, State& dy, double r) {
            const double s = std::sinh(r);
            dy[0] = y[1];
            dy[1] = (q / (s * s) - l2) * y[0];
        };
        std::vector<double> times;
        times.reserve(ode_end - i + 1);
        times.push_back(r0);
        for (std::size_t k = i; k < ode_end; ++k) times.push_back(radii[k]);
        std::size_t slot = i;
        auto observe = [&](const State& y, double r) {
            if (r == r0 && slot == i && times.size() > 1 && times[1] != r0) return;
            if (slot < ode_end) out[slot++] = y[0] * std::pow(std::sinh(r), -rho);
        };
        namespace ode = boost::numeric::odeint;
        auto stepper = ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_fehlberg78<State>());
        const double dt = std::min(0.05, 0.2 / std::max(lambda, 1.0));
        ode::integrate_times(stepper, rhs, w, times.begin(), times.end(), dt, observe);
        i = ode_end;
    }

    if (i < radii.size()) {
        HarishChandra hc(lambda, n);
        for (; i < radii.size(); ++i) out[i] = hc(radii[i]);
    }
    return out;
}

double spherical_phi_fast(double lambda, double r, Dimension n) {
    const double rr[1] = {r};
    return spherical_phi_profile(lambda, n, rr)[0];
}

}  // namespace hyperlac

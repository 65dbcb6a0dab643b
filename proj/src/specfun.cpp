#include "hyperlac/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "hyperlac/errors.hpp"

namespace hyperlac {

namespace {

constexpr double kPi = std::numbers::pi;

cplx stirling(cplx z) {
    // Bernoulli terms B_{2k} / (2k (2k-1))
    static constexpr std::array<double, 8> c = {
        1.0 / 12, -1.0 / 360, 1.0 / 1260, -1.0 / 1680, 1.0 / 1188, -691.0 / 360360, 1.0 / 156, -3617.0 / 122400};
    const cplx w = 1.0 / z;
    const cplx w2 = w * w;
    cplx s = 0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) s = s * w2 + c[k];
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2 * kPi) + s * w;
}

}  // namespace

cplx log_gamma_complex(cplx z) {
    if (z.imag() == 0 && z.real() <= 0 && z.real() == std::floor(z.real()))
        throw PreconditionError("log_gamma_complex: pole at nonpositive integer");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw PreconditionError("log_gamma_complex: non-finite argument");
    cplx shift = 0;
    while (z.real() < 10.0 || std::abs(z) < 12.0) {
        shift += std::log(z);
        z += 1.0;
    }
    return stirling(z) - shift;
}

cplx c_function(double lambda, Dimension n) {
    if (lambda == 0) throw PreconditionError("c_function has a pole at lambda = 0");
    const double rho = n.rho();
    const cplx il(0, lambda);
    return std::exp(std::lgamma(2 * rho) - std::lgamma(rho) + log_gamma_complex(il) - log_gamma_complex(il + rho));
}

double plancherel_density(double lambda, Dimension n) {
    if (lambda < 0) throw PreconditionError("plancherel_density needs lambda >= 0");
    if (lambda == 0) return 0.0;
    const double rho = n.rho();
    const cplx il(0, lambda);
    const double log_abs_c =
        std::lgamma(2 * rho) - std::lgamma(rho) + (log_gamma_complex(il) - log_gamma_complex(il + rho)).real();
    return std::exp(-2 * log_abs_c);
}

double inversion_constant(Dimension n) {
    const double h = 0.5 * n.value();
    return std::pow(2.0, n.value() - 3) * std::pow(kPi, -h - 1) * std::tgamma(h);
}

double sphere_angle_constant(Dimension n) {
    const double h = 0.5 * n.value();
    return std::exp(std::lgamma(h) - std::lgamma(h - 0.5)) / std::sqrt(kPi);
}

cplx spherical_phi(cplx lambda, double r, Dimension n, const QuadOptions& opt) {
    if (r < 0) throw PreconditionError("spherical_phi needs r >= 0");
    const double rho = n.rho();
    const double im = lambda.imag();
    if (im != 0 && std::abs(std::abs(im) - rho) > 1e-14 * std::max(1.0, rho))
        throw PreconditionError("spherical_phi: Im(lambda) must be 0 or +-(n-1)/2");
    if (r == 0) return 1.0;

    const double gamma = 0.5 * (n.value() - 3);
    const cplx expo = cplx(0, 1) * lambda - rho + 1.0;
    const double omega = std::abs(lambda.real());
    const double scale = std::min(2 * r, 2 * kPi);

    // u = log(cosh r - cos s sinh r) runs over [-r, r]; the weight
    // ((e^u - e^{-r})(e^r - e^u))^{(n-3)/2} is singular at both ends.
    auto left = [&](double v) {
        const double e = std::expm1(v) / v;
        const double f = -std::expm1(v - 2 * r);
        return std::exp(expo * (v - r) + gamma * std::log(e * f));
    };
    auto right = [&](double w) {
        const double e = -std::expm1(-w) / w;
        const double f = std::expm1(2 * r - w);
        return std::exp(expo * (r - w) + gamma * std::log(e * f));
    };
    const cplx sum = integrate_endpoint(left, gamma, r, scale, omega, opt) +
                     integrate_endpoint(right, gamma, r, scale, omega, opt);
    const double pref = sphere_angle_constant(n) * std::pow(std::sinh(r), 2 - n.value());
    return pref * sum;
}

namespace detail {
double mehler_base(double t, double u) {
    const double s = (u < 1e-3) ? 0.5 * (1 + u * u / 24 * (1 + u * u / 80)) : std::sinh(0.5 * u) / u;
    return 2 * std::sinh(t - 0.5 * u) * s;
}
}  // namespace detail

namespace {

void check_mehler_args(cplx beta, double t) {
    if (!(beta.real() > -1)) throw PreconditionError("Mehler integral needs Re(beta) > -1");
    if (!(t > 0)) throw PreconditionError("Mehler integral needs t > 0");
}

}  // namespace

cplx mehler_integral(cplx beta, double lambda, double t, const QuadOptions& opt) {
    check_mehler_args(beta, t);
    auto h = [&](double u) { return std::exp(beta * std::log(detail::mehler_base(t, u))) * std::cos(lambda * (t - u)); };
    return integrate_endpoint(h, beta, t, std::min(2 * t, 2 * kPi), std::abs(lambda), opt);
}

cplx mehler_integral_dlambda(cplx beta, double lambda, double t, const QuadOptions& opt) {
    check_mehler_args(beta, t);
    auto h = [&](double u) {
        const double s = t - u;
        return -std::exp(beta * std::log(detail::mehler_base(t, u))) * (s * std::sin(lambda * s));
    };
    return integrate_endpoint(h, beta, t, std::min(2 * t, 2 * kPi), std::abs(lambda), opt);
}

cplx mehler_conical_integral(cplx alpha, double lambda, double t, Dimension n, const QuadOptions& opt) {
    if (!(alpha.real() > 0.5 * (1 - n.value())))
        throw PreconditionError("mehler_conical_integral needs Re(alpha) > (1-n)/2");
    return mehler_integral(alpha + 0.5 * (n.value() - 3), lambda, t, opt);
}

cplx conical_legendre(cplx mu, double lambda, double t, const QuadOptions& opt) {
    if (!(mu.real() > -0.5)) throw PreconditionError("conical_legendre needs Re(mu) > -1/2");
    const cplx lg = log_gamma_complex(mu + 0.5);
    const cplx pref = std::sqrt(2 / kPi) * std::exp(-mu * std::log(std::sinh(t)) - lg);
    return pref * mehler_integral(mu - 0.5, lambda, t, opt);
}

double spherical_phi_legendre(double lambda, double r, Dimension n, const QuadOptions& opt) {
    if (r < 0) throw PreconditionError("spherical_phi_legendre needs r >= 0");
    if (r == 0) return 1.0;
    const double h = 0.5 * n.value();
    const double mu = h - 1;
    const double pref = std::pow(2.0, h - 1) * std::tgamma(h) * std::pow(std::sinh(r), 1 - h);
    return pref * conical_legendre(mu, lambda, r, opt).real();
}

}  // namespace hyperlac

#pragma once

#include <complex>

#include "hyperlac/geometry.hpp"
#include "hyperlac/quadrature.hpp"

namespace hyperlac {

/// Principal branch of log Gamma(z), continuous off the negative real axis.
/// Throws PreconditionError at the poles z = 0, -1, -2, ...
cplx log_gamma_complex(cplx z);

/// Harish-Chandra c-function Gamma(n-1)/Gamma(rho) * Gamma(i lambda)/Gamma(i lambda + rho), lambda != 0.
cplx c_function(double lambda, Dimension n);

/// |c(lambda)|^{-2}; zero at lambda = 0. For n = 3 this is lambda^2.
double plancherel_density(double lambda, Dimension n);

/// Constant kappa_n in f(r) = kappa_n int_0^inf Ff(lambda) phi_lambda(r) |c(lambda)|^{-2} dlambda,
/// when Ff carries the sphere area sigma_{n-1}.
double inversion_constant(Dimension n);

/// Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2)): normalizes sin^{n-2} on [0, pi] to a probability measure.
double sphere_angle_constant(Dimension n);

/// Elementary spherical function phi_lambda(r) by quadrature of its Laplace integral
///   c_n int_0^pi (cosh r - cos s sinh r)^{i lambda - rho} sin^{n-2} s ds.
/// lambda must be real or have imaginary part exactly 0 or +-rho.
cplx spherical_phi(cplx lambda, double r, Dimension n, const QuadOptions& opt = {});

/// int_0^t (cosh t - cosh s)^beta cos(lambda s) ds for Re beta > -1, t > 0.
cplx mehler_integral(cplx beta, double lambda, double t, const QuadOptions& opt = {});

/// d/dlambda of mehler_integral: -int_0^t (cosh t - cosh s)^beta s sin(lambda s) ds.
cplx mehler_integral_dlambda(cplx beta, double lambda, double t, const QuadOptions& opt = {});

/// mehler_integral with beta = alpha + (n-3)/2. Requires Re alpha > (1-n)/2.
cplx mehler_conical_integral(cplx alpha, double lambda, double t, Dimension n, const QuadOptions& opt = {});

/// Conical Legendre function P^{-mu}_{-1/2+i lambda}(cosh t) for Re mu > -1/2, t > 0.
cplx conical_legendre(cplx mu, double lambda, double t, const QuadOptions& opt = {});

/// phi_lambda(r) through its Legendre form
///   2^{n/2-1} Gamma(n/2) (sinh r)^{1-n/2} P^{1-n/2}_{-1/2+i lambda}(cosh r).
double spherical_phi_legendre(double lambda, double r, Dimension n, const QuadOptions& opt = {});

namespace detail {
/// (cosh t - cosh(t-u)) / u, accurate for small u.
double mehler_base(double t, double u);
}  // namespace detail

}  // namespace hyperlac

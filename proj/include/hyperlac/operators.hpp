#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperlac/symbols.hpp"
#include "hyperlac/transform.hpp"

namespace hyperlac {

/// {2^-j : 1 <= j <= J} together with {1, ..., K}, sorted ascending.
class LacunarySet {
public:
    LacunarySet(int J, int K);

    int J() const noexcept { return J_; }
    int K() const noexcept { return K_; }
    const std::vector<double>& values() const noexcept { return values_; }
    /// The dyadic radii 2^-j (local part) and the integer radii (global part).
    std::vector<double> local_radii() const;
    std::vector<double> global_radii() const;

private:
    int J_, K_;
    std::vector<double> values_;
};

struct FamilyMember {
    std::string kind;  // gaussian | shifted-bump | exp-tail | smoothed-annulus
    double parameter;
    RadialFunction f;

    std::string descriptor() const;
};

using TestFamily = std::vector<FamilyMember>;

/// Radial profiles of the default test functions for dimension n.
std::vector<std::pair<std::string, double>> default_family_parameters(Dimension n);
RadialFunction::Profile family_profile(const std::string& kind, double parameter, Dimension n);

/// Gaussians e^{-a r^2} (a = 1/4, 1, 4), bumps e^{-4(r-R)^2} (R = 1, 2, 4), tapered exponential
/// tails e^{-br}(1+br) (b = rho+0.1, n-1) and smoothed annulus indicators, sampled on `grid`.
TestFamily default_family(const RadialGridPtr& grid);

enum class MeanRoute { spectral, direct };

/// Spherical mean A_t f. The spectral route multiplies Ff by phi_lambda(t); the direct route
/// integrates f over the sphere of radius t in polar angle. The result lives on `target`
/// (defaults to the grid of f).
RadialFunction spherical_mean(const RadialFunction& f, double t, MeanRoute route, const SpectralGridPtr& sgrid,
                              const RadialGridPtr& target = nullptr);

/// (A_t f)(r) by direct angular quadrature at a single radius.
cplx spherical_mean_at(const RadialFunction& f, double t, double r);

/// m^alpha_t(D) f through the spectral symbol.
RadialFunction apply_multiplier(const MultiplierSpec& spec, const RadialFunction& f, const SpectralGridPtr& sgrid,
                                const RadialGridPtr& target = nullptr);

/// m^alpha_t(D) f through its kernel, for Re alpha > 0:
///   int_0^t K^alpha_t(rho) sinh^{n-1} rho (A_rho f)(r) drho.
RadialFunction apply_multiplier_direct(const MultiplierSpec& spec, const RadialFunction& f,
                                       const RadialGridPtr& target = nullptr);

/// (f * kappa)(r) = sigma_{n-1} int kappa(rho) sinh^{n-1} rho (A_rho f)(r) drho, using the quadrature
/// of kappa's grid in rho and direct angular integration.
RadialFunction direct_radial_convolution(const RadialFunction& f, const RadialFunction& kappa,
                                         const RadialGridPtr& target = nullptr);

/// m^alpha_t(D) f for every t in `radii`, sharing one forward transform.
std::vector<RadialFunction> multiplier_sweep(cplx alpha, const RadialFunction& f, std::span<const double> radii,
                                             const SpectralGridPtr& sgrid, const RadialGridPtr& target = nullptr);

/// Pointwise max over t in Lambda of |m^alpha_t(D) f|.
RadialFunction lacunary_maximal(cplx alpha, const RadialFunction& f, const LacunarySet& lambda,
                                const SpectralGridPtr& sgrid);

struct LocalGlobal {
    RadialFunction local;   // sup over dyadic t
    RadialFunction global;  // sup over integer t
    RadialFunction full;    // sup over all of Lambda
};

LocalGlobal local_global_parts(cplx alpha, const RadialFunction& f, const LacunarySet& lambda,
                               const SpectralGridPtr& sgrid);

/// Centered Hardy-Littlewood maximal function over the radii in `ts`, by direct ball averages of |f|.
RadialFunction hl_maximal(const RadialFunction& f, std::span<const double> ts);

/// (1/|B(r,t)|) int_{B(r,t)} |f| for every node r of f's grid.
RadialFunction ball_average(const RadialFunction& f, double t);

/// sigma_{n-1} int e^{-(n-1) r / p'} kappa(r) sinh^{n-1} r dr for kappa >= 0 sampled on a grid.
double kunze_stein_rhs(const RadialFunction& kappa, double p);

/// The same weighted integral for kappa given as a function on [a, b].
double kunze_stein_rhs(const std::function<double(double)>& kappa, double a, double b, double p, Dimension n);

/// kunze_stein_rhs of the dominating piece K^{alpha,2}_j = e^{-(n-1)j}(j-r)^{Re alpha-1} on [j-1/2, j].
double kunze_stein_rhs_k2(double re_alpha, int j, double p, Dimension n);

/// ||f * kappa||_p / (kunze_stein_rhs(kappa, p) ||f||_p), with the convolution done spectrally.
double kunze_stein_ratio(const RadialFunction& f, const RadialFunction& kappa, double p, const SpectralGridPtr& sgrid);

struct SummabilityTerm {
    int K;
    double symbol_sum;  // sum_{j<=K} (sup_lambda |m^alpha_j(lambda)|)^2
    double model_sum;   // sum_{j<=K} j^2 e^{-(n-1) j}
};

/// Partial sums of the squared global-part symbol suprema next to the model series, K = 1..K_max.
std::vector<SummabilityTerm> global_part_sums(cplx alpha, Dimension n, int K_max, std::span<const double> lambdas);

struct I3Result {
    double value;
    double argmax_lambda;
};

/// sup over the lambda grid of sum_{j=1}^J |m^alpha_{2^-j}(lambda) - m^alpha_{2^-j}(0) e^{-4^{-j} lambda^2}|^2.
I3Result i3_sup(cplx alpha, Dimension n, std::span<const double> lambdas, int J);

struct CzTails {
    double J1;
    double J2;
};

/// The two kernel-difference integrals, in the scaled variable y = 1 - 2^j r with eps = 2^j r_l:
///   J1 = 2 int_0^{min(3 eps, 1)} (1-y)^{n-1} y^{Re alpha - 1} dy
///   J2 = eps int_eps^{1-eps} (1-y)^{n-1} y^{Re alpha - 2} dy
CzTails cz_tail_integrals(cplx alpha, Dimension n, int j, double r_l);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

enum class RegionCurve { lacunary, full };

std::string to_string(RegionCurve c);

/// Lower boundary of Re alpha for L^p boundedness; p in (1, inf].
double region_threshold(double p, Dimension n, RegionCurve which);

/// The same boundary as a function of 1/p on the closed interval [0, 1].
double region_threshold_at(double inv_p, Dimension n, RegionCurve which);

/// p_n = 4 for n = 2 and 2(n+1)/(n-1) otherwise.
double critical_exponent(Dimension n);

struct RegionVertex {
    std::string name;
    double inv_p;
    double re_alpha;
};

/// O, A, B, C (full curve) and O, D, E (lacunary curve).
std::vector<RegionVertex> region_vertices(Dimension n);

/// Re alpha along the interpolation segment between (alpha0, p0) and (alpha1, 2), at exponent p.
double interpolation_alpha(double alpha0, double p0, double alpha1, double p);

/// Minimum of interpolation_alpha over a grid of admissible (alpha0 > 0, alpha1 > (1-n)/2, 1 < p0 < p).
double interpolation_infimum(double p, Dimension n, int resolution = 40);

/// Empirical operator norm sup_f ||op f||_p / ||f||_p over a family.
double empirical_operator_norm(const std::function<RadialFunction(const RadialFunction&)>& op,
                               const TestFamily& family, double p);

}  // namespace hyperlac

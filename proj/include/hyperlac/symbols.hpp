#pragma once

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperlac/geometry.hpp"
#include "hyperlac/quadrature.hpp"
#include "hyperlac/transform.hpp"

namespace hyperlac {

/// Identifies the multiplier symbol m^alpha_t on H^n.
class MultiplierSpec {
public:
    /// Throws PreconditionError unless Re alpha > (1-n)/2 + 1e-3 and t > 0.
    MultiplierSpec(Dimension n, cplx alpha, double t);

    Dimension n() const noexcept { return n_; }
    cplx alpha() const noexcept { return alpha_; }
    double t() const noexcept { return t_; }
    /// Exponent alpha + (n-3)/2 of (cosh t - cosh s) in the Mehler integral.
    cplx mehler_exponent() const noexcept { return alpha_ + 0.5 * (n_.value() - 3); }

private:
    Dimension n_;
    cplx alpha_;
    double t_;
};

/// log of the factor Q with m^alpha_t(lambda) = Q int_0^t (cosh t - cosh s)^{alpha+(n-3)/2} cos(lambda s) ds.
cplx symbol_log_prefactor(const MultiplierSpec& spec);

/// m^alpha_t(lambda). Even in lambda, m^0_t(lambda) = phi_lambda(t), m^alpha_t(i rho) = 1.
cplx symbol_m(const MultiplierSpec& spec, double lambda, const QuadOptions& opt = {});

/// d/dlambda m^alpha_t(lambda) from the differentiated Mehler integrand (no finite differences).
cplx symbol_dm(const MultiplierSpec& spec, double lambda, const QuadOptions& opt = {});

/// Fixed quadrature rule for one (alpha, t, n), reused across many lambda with |lambda| <= omega_max.
class SymbolRule {
public:
    SymbolRule(const MultiplierSpec& spec, double omega_max, int level = 1);

    cplx value(double lambda) const;
    cplx derivative(double lambda) const;
    std::size_t size() const noexcept { return s_.size(); }

private:
    std::vector<double> s_;
    std::vector<cplx> g_;
};

/// m^alpha_t on every node of a spectral grid. alpha = 0 goes through phi_lambda(t) directly.
std::vector<cplx> symbol_on_grid(const MultiplierSpec& spec, const SpectralGrid& grid);

/// Radial kernel K^alpha_t(r) of the operator M^alpha_t (needs Re alpha > 0). Zero for r > t.
/// Its transform is sigma_{n-1} m^alpha_t.
cplx kernel_K(const MultiplierSpec& spec, double r);

/// The two dominating pieces (K^{alpha,1}_t(r), K^{alpha,2}_t(r)) for t >= 1.
std::pair<double, double> kernel_split(const MultiplierSpec& spec, double r);

/// t^{-n} (1 - r/t)^{Re alpha - 1} on [0, t), zero beyond; 0 < t <= 1.
double kernel_Ktilde(const MultiplierSpec& spec, double r);

/// Heat multiplier e^{-t lambda^2}.
double heat_symbol(double t, double lambda);

enum class EstimateKind { decay, derivative, highfreq };

std::string to_string(EstimateKind k);
EstimateKind estimate_kind_from_string(const std::string& s);

struct EstimatePoint {
    double t;
    double lambda;
};

struct EstimateGrid {
    std::vector<EstimatePoint> points;
    std::string descriptor;

    /// All (t, lambda) pairs lying in the domain of `kind`.
    static EstimateGrid tensor(EstimateKind kind, std::span<const double> ts, std::span<const double> lambdas,
                               std::string descriptor);
};

/// Whether (t, lambda) lies where the estimate of the given kind is claimed.
bool in_domain(EstimateKind kind, double t, double lambda);

/// Normalized quantity bounded by a constant when the estimate holds:
///   decay      |m| / ((1+t) e^{-rho t})
///   derivative |dm/dlambda| / t
///   highfreq   |m| (|lambda| t)^{Re alpha + rho}
std::vector<double> estimate_ratios(EstimateKind kind, Dimension n, cplx alpha, const EstimateGrid& grid);

struct EstimateReport {
    std::string id;
    EstimateKind kind;
    int n;
    cplx alpha;
    double constant;     // max ratio on the calibration grid
    double worst_ratio;  // max ratio on the validation grid
    EstimatePoint worst_point;
    double slack;
    bool pass;
    std::string calibration;
    std::string validation;

    static std::string csv_header();
    std::string csv_row() const;
};

EstimateReport check_estimate(EstimateKind kind, cplx alpha, Dimension n, const EstimateGrid& calibration,
                              const EstimateGrid& validation, double slack);

/// Calibration and validation grids for t in [t_min, t_max] (dyadic) and lambda in [0, lambda_max].
/// The validation grid has at least four times as many points and is not aligned with the calibration grid.
std::pair<EstimateGrid, EstimateGrid> default_estimate_grids(EstimateKind kind, double t_min, double t_max,
                                                             double lambda_max);

}  // namespace hyperlac

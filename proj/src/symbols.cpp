#include "hyperlac/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "hyperlac/csv.hpp"
#include "hyperlac/errors.hpp"
#include "hyperlac/specfun.hpp"

namespace hyperlac {

namespace {
constexpr double kPi = std::numbers::pi;
}

MultiplierSpec::MultiplierSpec(Dimension n, cplx alpha, double t) : n_(n), alpha_(alpha), t_(t) {
    if (!(alpha.real() > 0.5 * (1 - n.value()) + 1e-3))
        throw PreconditionError("MultiplierSpec: Re(alpha) must exceed (1-n)/2 + 1e-3");
    if (!(t > 0) || !std::isfinite(t)) throw PreconditionError("MultiplierSpec: t must be positive");
}

cplx symbol_log_prefactor(const MultiplierSpec& spec) {
    const int n = spec.n().value();
    const cplx a = spec.alpha();
    const double t = spec.t();
    return (0.5 * (n - 2) + a) * std::log(2.0) + std::lgamma(0.5 * n) + 0.5 * std::log(2 / kPi) + a * t -
           2.0 * a * std::log(std::expm1(t)) + double(2 - n) * std::log(std::sinh(t)) -
           log_gamma_complex(a + spec.n().rho());
}

cplx symbol_m(const MultiplierSpec& spec, double lambda, const QuadOptions& opt) {
    return std::exp(symbol_log_prefactor(spec)) * mehler_integral(spec.mehler_exponent(), lambda, spec.t(), opt);
}

cplx symbol_dm(const MultiplierSpec& spec, double lambda, const QuadOptions& opt) {
    return std::exp(symbol_log_prefactor(spec)) *
           mehler_integral_dlambda(spec.mehler_exponent(), lambda, spec.t(), opt);
}

SymbolRule::SymbolRule(const MultiplierSpec& spec, double omega_max, int level) {
    const double t = spec.t();
    const cplx beta = spec.mehler_exponent();
    const auto rule = endpoint_rule(beta, t, std::min(2 * t, 2 * kPi), std::abs(omega_max), level);
    const cplx q = std::exp(symbol_log_prefactor(spec));
    s_.reserve(rule.size());
    g_.reserve(rule.size());
    for (std::size_t j = 0; j < rule.size(); ++j) {
        const double u = rule.nodes[j];
        s_.push_back(t - u);
        g_.push_back(q * rule.weights[j] * std::exp(beta * std::log(detail::mehler_base(t, u))));
    }
}

cplx SymbolRule::value(double lambda) const {
    cplx sum = 0;
    for (std::size_t j = 0; j < s_.size(); ++j) sum += g_[j] * std::cos(lambda * s_[j]);
    return sum;
}

cplx SymbolRule::derivative(double lambda) const {
    cplx sum = 0;
    for (std::size_t j = 0; j < s_.size(); ++j) sum -= g_[j] * (s_[j] * std::sin(lambda * s_[j]));
    return sum;
}

std::vector<cplx> symbol_on_grid(const MultiplierSpec& spec, const SpectralGrid& grid) {
    if (spec.n() != grid.dimension()) throw PreconditionError("symbol_on_grid: dimension mismatch");
    std::vector<cplx> out(grid.size());
    if (spec.alpha() == cplx(0)) {
        const auto col = phi_column(grid, spec.t());
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = col[k];
        return out;
    }
    const SymbolRule rule(spec, grid.lambda_max());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = rule.value(grid.nodes()[k]);
    return out;
}

cplx kernel_K(const MultiplierSpec& spec, double r) {
    const cplx a = spec.alpha();
    if (!(a.real() > 0)) throw PreconditionError("kernel_K needs Re(alpha) > 0");
    if (r < 0) throw PreconditionError("kernel_K needs r >= 0");
    const double t = spec.t();
    if (r >= t) return 0.0;
    const int n = spec.n().value();
    const double gap = 2 * std::sinh(0.5 * (t + r)) * std::sinh(0.5 * (t - r));  // cosh t - cosh r
    const cplx logk = -log_gamma_complex(a) + a * (std::log(2.0) + t) - 2.0 * a * std::log(std::expm1(t)) +
                      double(2 - n) * std::log(std::sinh(t)) + (a - 1.0) * std::log(gap);
    return std::exp(logk);
}

std::pair<double, double> kernel_split(const MultiplierSpec& spec, double r) {
    const double t = spec.t();
    const double a = spec.alpha().real();
    if (!(t >= 1)) throw PreconditionError("kernel_split needs t >= 1");
    if (!(a > 0)) throw PreconditionError("kernel_split needs Re(alpha) > 0");
    if (r < 0) throw PreconditionError("kernel_split needs r >= 0");
    const double m = spec.n().value() - 1;
    const double k1 = (r <= t - 0.5) ? std::exp(-m * (t - 0.5)) : 0.0;
    const double k2 = (r > t - 0.5 && r < t) ? std::exp(-m * t) * std::pow(t - r, a - 1) : 0.0;
    return {k1, k2};
}

double kernel_Ktilde(const MultiplierSpec& spec, double r) {
    const double t = spec.t();
    const double a = spec.alpha().real();
    if (!(t > 0 && t <= 1)) throw PreconditionError("kernel_Ktilde needs 0 < t <= 1");
    if (!(a > 0)) throw PreconditionError("kernel_Ktilde needs Re(alpha) > 0");
    if (r < 0) throw PreconditionError("kernel_Ktilde needs r >= 0");
    if (r >= t) return 0.0;
    return std::pow(t, -spec.n().value()) * std::pow(1 - r / t, a - 1);
}

double heat_symbol(double t, double lambda) {
    if (!(t > 0)) throw PreconditionError("heat_symbol needs t > 0");
    return std::exp(-t * lambda * lambda);
}

std::string to_string(EstimateKind k) {
    switch (k) {
        case EstimateKind::decay: return "decay";
        case EstimateKind::derivative: return "derivative";
        case EstimateKind::highfreq: return "highfreq";
    }
    return "?";
}

EstimateKind estimate_kind_from_string(const std::string& s) {
    if (s == "decay") return EstimateKind::decay;
    if (s == "derivative") return EstimateKind::derivative;
    if (s == "highfreq") return EstimateKind::highfreq;
    throw PreconditionError("unknown estimate kind '" + s + "'");
}

bool in_domain(EstimateKind kind, double t, double lambda) {
    if (!(t > 0) || !std::isfinite(lambda)) return false;
    switch (kind) {
        case EstimateKind::decay: return true;
        case EstimateKind::derivative: return t <= 1;
        case EstimateKind::highfreq: return t <= 1 && std::abs(lambda) * t >= 1;
    }
    return false;
}

EstimateGrid EstimateGrid::tensor(EstimateKind kind, std::span<const double> ts, std::span<const double> lambdas,
                                  std::string descriptor) {
    EstimateGrid g;
    g.descriptor = std::move(descriptor);
    for (double t : ts)
        for (double l : lambdas)
            if (in_domain(kind, t, l)) g.points.push_back({t, l});
    return g;
}

std::vector<double> estimate_ratios(EstimateKind kind, Dimension n, cplx alpha, const EstimateGrid& grid) {
    if (grid.points.empty()) throw PreconditionError("estimate grid '" + grid.descriptor + "' is empty");
    for (const auto& p : grid.points)
        if (!in_domain(kind, p.t, p.lambda))
            throw PreconditionError("point (t=" + csv::num(p.t) + ", lambda=" + csv::num(p.lambda) +
                                    ") lies outside the domain of the " + to_string(kind) + " estimate");
    // One quadrature rule per distinct t, shared by all lambda at that t.
    std::map<double, double> omega;
    for (const auto& p : grid.points) omega[p.t] = std::max(omega[p.t], std::abs(p.lambda));
    std::map<double, SymbolRule> rules;
    for (const auto& [t, w] : omega) rules.emplace(t, SymbolRule(MultiplierSpec(n, alpha, t), w));

    const double rho = n.rho();
    std::vector<double> out(grid.points.size());
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
        const auto& p = grid.points[i];
        const auto& rule = rules.at(p.t);
        switch (kind) {
            case EstimateKind::decay:
                out[i] = std::abs(rule.value(p.lambda)) / ((1 + p.t) * std::exp(-rho * p.t));
                break;
            case EstimateKind::derivative:
                out[i] = std::abs(rule.derivative(p.lambda)) / p.t;
                break;
            case EstimateKind::highfreq:
                out[i] = std::abs(rule.value(p.lambda)) * std::pow(std::abs(p.lambda) * p.t, alpha.real() + rho);
                break;
        }
    }
    return out;
}

namespace {

const char* estimate_statement(EstimateKind k) {
    switch (k) {
        case EstimateKind::decay: return "|m^a_t(l)| <= C (1+t) exp(-(n-1)t/2) for all t>0";
        case EstimateKind::derivative: return "|d/dl m^a_t(l)| <= C t for 0<t<=1";
        case EstimateKind::highfreq: return "|m^a_t(l)| <= C (|l| t)^-(Re a+(n-1)/2) for 0<t<=1 and |l|t>=1";
    }
    return "";
}

}  // namespace

std::string EstimateReport::csv_header() {
    return "estimate_id,kind,n,re_alpha,im_alpha,C,worst_ratio,worst_t,worst_lambda,slack,pass,calibration,"
           "validation,check";
}

std::string EstimateReport::csv_row() const {
    return csv::join({id, to_string(kind), std::to_string(n), csv::num(alpha.real()), csv::num(alpha.imag()),
                      csv::num(constant), csv::num(worst_ratio), csv::num(worst_point.t),
                      csv::num(worst_point.lambda), csv::num(slack), pass ? "1" : "0", calibration, validation,
                      estimate_statement(kind)});
}

EstimateReport check_estimate(EstimateKind kind, cplx alpha, Dimension n, const EstimateGrid& calibration,
                              const EstimateGrid& validation, double slack) {
    if (!(slack >= 1)) throw PreconditionError("check_estimate: slack must be >= 1");
    const auto cal = estimate_ratios(kind, n, alpha, calibration);
    const auto val = estimate_ratios(kind, n, alpha, validation);
    EstimateReport rep;
    rep.kind = kind;
    rep.n = n.value();
    rep.alpha = alpha;
    rep.id = to_string(kind) + ":n=" + std::to_string(n.value()) + ":alpha=" + csv::num(alpha.real()) +
             (alpha.imag() != 0 ? (alpha.imag() > 0 ? "+" : "") + csv::num(alpha.imag()) + "i" : "");
    rep.constant = *std::max_element(cal.begin(), cal.end());
    const auto worst = std::max_element(val.begin(), val.end());
    rep.worst_ratio = *worst;
    rep.worst_point = validation.points[static_cast<std::size_t>(worst - val.begin())];
    rep.slack = slack;
    rep.pass = std::isfinite(rep.worst_ratio) && rep.worst_ratio <= slack * rep.constant;
    rep.calibration = calibration.descriptor;
    rep.validation = validation.descriptor;
    return rep;
}

namespace {

std::vector<double> dyadic(double lo, double hi, double step_log2) {
    std::vector<double> v;
    const double a = std::log2(lo), b = std::log2(hi);
    for (double e = a; e <= b + 1e-9; e += step_log2) v.push_back(std::exp2(e));
    return v;
}

std::vector<double> lambda_points(double lambda_max, int count, double offset) {
    // 0 plus a geometric sweep from 1/4 to lambda_max; `offset` shifts the sweep in log space
    // so that calibration and validation do not share nodes.
    std::vector<double> v{0.0};
    const double a = std::log(0.25), b = std::log(lambda_max);
    for (int i = 0; i < count; ++i) {
        const double x = a + (b - a) * (i + offset) / (count - 1 + offset);
        v.push_back(std::min(lambda_max, std::exp(x)));
    }
    return v;
}

}  // namespace

std::pair<EstimateGrid, EstimateGrid> default_estimate_grids(EstimateKind kind, double t_min, double t_max,
                                                             double lambda_max) {
    if (!(t_min > 0 && t_max >= t_min && lambda_max > 0))
        throw PreconditionError("default_estimate_grids: need 0 < t_min <= t_max and lambda_max > 0");
    if (kind != EstimateKind::decay) t_max = std::min(t_max, 1.0);
    const auto tc = dyadic(t_min, t_max, 1.0);
    const auto tv = dyadic(t_min, t_max, 0.5);
    const auto lc = lambda_points(lambda_max, 11, 0.0);
    const auto lv = lambda_points(lambda_max, 47, 0.37);
    auto describe = [&](const char* what, std::size_t nt, std::size_t nl) {
        return std::string(what) + " t=2^[" + csv::num(std::log2(t_min)) + ":" + csv::num(std::log2(t_max)) +
               "] x" + std::to_string(nt) + " lambda=[0:" + csv::num(lambda_max) + "] x" + std::to_string(nl);
    };
    return {EstimateGrid::tensor(kind, tc, lc, describe("calibration", tc.size(), lc.size())),
            EstimateGrid::tensor(kind, tv, lv, describe("validation", tv.size(), lv.size()))};
}

}  // namespace hyperlac

#include "hyperlac/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "hyperlac/csv.hpp"
#include "hyperlac/errors.hpp"
#include "hyperlac/parallel.hpp"
#include "hyperlac/specfun.hpp"

namespace hyperlac {

LacunarySet::LacunarySet(int J, int K) : J_(J), K_(K) {
    if (J < 1 || K < 1) throw PreconditionError("LacunarySet needs J >= 1 and K >= 1");
    if (J > 1000) throw PreconditionError("LacunarySet: J too large");
    for (int j = J; j >= 1; --j) values_.push_back(std::ldexp(1.0, -j));
    for (int k = 1; k <= K; ++k) values_.push_back(k);
}

std::vector<double> LacunarySet::local_radii() const {
    return {values_.begin(), values_.begin() + J_};
}

std::vector<double> LacunarySet::global_radii() const {
    return {values_.begin() + J_, values_.end()};
}

std::string FamilyMember::descriptor() const {
    return kind + "(" + csv::num(parameter) + ")";
}

std::vector<std::pair<std::string, double>> default_family_parameters(Dimension n) {
    return {{"gaussian", 0.25},         {"gaussian", 1.0},         {"gaussian", 4.0},
            {"shifted-bump", 1.0},      {"shifted-bump", 2.0},     {"shifted-bump", 4.0},
            {"exp-tail", n.rho() + 0.1}, {"exp-tail", n.value() - 1.0}, {"smoothed-annulus", 0.25}};
}

RadialFunction::Profile family_profile(const std::string& kind, double c, Dimension) {
    if (!(c > 0)) throw PreconditionError("family parameter must be positive");
    if (kind == "gaussian") return [c](double r) { return std::exp(-c * r * r); };
    // Adding the mirror image makes the profile even in r, hence smooth at the origin.
    if (kind == "shifted-bump")
        return [c](double r) { return std::exp(-4 * (r - c) * (r - c)) + std::exp(-4 * (r + c) * (r + c)); };
    // The erfc factor tapers the exponential tail off well inside the default r_max.
    if (kind == "exp-tail") return [c](double r) { return std::exp(-c * r) * (1 + c * r) * 0.5 * std::erfc(r - 6.5); };
    if (kind == "smoothed-annulus")
        return [c](double r) { return 0.5 * (std::erf((r - 1) / c) - std::erf((r - 2) / c)); };
    throw PreconditionError("unknown family kind '" + kind + "'");
}

TestFamily default_family(const RadialGridPtr& grid) {
    TestFamily fam;
    for (const auto& [kind, c] : default_family_parameters(grid->dimension())) {
        auto prof = family_profile(kind, c, grid->dimension());
        const std::string label = kind + "(" + csv::num(c) + ")";
        fam.push_back({kind, c, RadialFunction::sample(grid, prof, label)});
    }
    return fam;
}

cplx spherical_mean_at(const RadialFunction& f, double t, double r) {
    if (t < 0 || r < 0) throw PreconditionError("spherical_mean_at needs t, r >= 0");
    if (t == 0) return f.at(r);
    if (r == 0) return f.at(t);
    const Dimension n = f.grid().dimension();
    const int m = n.value() - 2;
    // The distance varies on the angular scale e^{-(r+t)/2} near theta = 0; grade the panels dyadically there.
    const int K = static_cast<int>(std::ceil((r + t) / (2 * std::numbers::ln2))) + 6;
    const auto& g = gauss_legendre(16);
    cplx sum = 0;
    double lo = 0;
    for (int k = K; k >= 0; --k) {
        const double hi = std::ldexp(std::numbers::pi, -k);
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        cplx s = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double th = c + h * g.nodes[i];
            const double w = m == 0 ? 1.0 : std::pow(std::sin(th), m);
            s += g.weights[i] * w * f.at(two_point_distance(r, t, th));
        }
        sum += h * s;
        lo = hi;
    }
    return sphere_angle_constant(n) * sum;
}

namespace {

RadialGridPtr target_or(const RadialFunction& f, const RadialGridPtr& target) {
    if (!target) return f.grid_ptr();
    if (target->dimension() != f.grid().dimension()) throw PreconditionError("target grid has a different dimension");
    return target;
}

RadialFunction evaluate_pointwise(const RadialGridPtr& grid, const std::function<cplx(double)>& at) {
    std::vector<cplx> out(grid->size());
    parallel_for(out.size(), [&](std::size_t i) { out[i] = at(grid->nodes()[i]); });
    return RadialFunction(grid, std::move(out));
}

// Sweeps over a family reuse the same (alpha, t) symbols many times.
class SymbolCache {
public:
    std::shared_ptr<const std::vector<cplx>> get(cplx alpha, double t, const SpectralGrid& sgrid) {
        std::ostringstream key;
        key.precision(17);
        key << sgrid.key() << '|' << alpha.real() << '|' << alpha.imag() << '|' << t;
        {
            std::lock_guard lock(mu_);
            if (auto it = map_.find(key.str()); it != map_.end()) return it->second;
        }
        auto v = std::make_shared<const std::vector<cplx>>(symbol_on_grid(MultiplierSpec(sgrid.dimension(), alpha, t), sgrid));
        std::lock_guard lock(mu_);
        if (map_.size() >= kCapacity) map_.clear();
        map_.emplace(key.str(), v);
        return v;
    }

private:
    static constexpr std::size_t kCapacity = 512;
    std::mutex mu_;
    std::unordered_map<std::string, std::shared_ptr<const std::vector<cplx>>> map_;
};

std::shared_ptr<const std::vector<cplx>> symbol_for(cplx alpha, double t, const SpectralGrid& sgrid) {
    static SymbolCache cache;
    return cache.get(alpha, t, sgrid);
}

}  // namespace

RadialFunction spherical_mean(const RadialFunction& f, double t, MeanRoute route, const SpectralGridPtr& sgrid,
                              const RadialGridPtr& target) {
    if (t < 0) throw PreconditionError("spherical_mean needs t >= 0");
    const auto grid = target_or(f, target);
    if (route == MeanRoute::direct) return evaluate_pointwise(grid, [&](double r) { return spherical_mean_at(f, t, r); });
    if (!sgrid) throw PreconditionError("spherical_mean: spectral route needs a spectral grid");
    const auto Ff = forward_sft(f, sgrid);
    if (t == 0) return inverse_sft(Ff, grid);
    return apply_symbol(Ff, *symbol_for(0.0, t, *sgrid), grid);
}

RadialFunction apply_multiplier(const MultiplierSpec& spec, const RadialFunction& f, const SpectralGridPtr& sgrid,
                                const RadialGridPtr& target) {
    if (spec.n() != f.grid().dimension()) throw PreconditionError("apply_multiplier: dimension mismatch");
    const auto grid = target_or(f, target);
    return apply_symbol(forward_sft(f, sgrid), symbol_on_grid(spec, *sgrid), grid);
}

RadialFunction apply_multiplier_direct(const MultiplierSpec& spec, const RadialFunction& f,
                                       const RadialGridPtr& target) {
    if (spec.n() != f.grid().dimension()) throw PreconditionError("apply_multiplier_direct: dimension mismatch");
    const cplx a = spec.alpha();
    if (!(a.real() > 0)) throw PreconditionError("apply_multiplier_direct needs Re(alpha) > 0");
    const auto grid = target_or(f, target);
    const double t = spec.t();
    const int n = spec.n().value();
    // K(t-u) = P u^{alpha-1} g(u)^{alpha-1} with g(u) = (cosh t - cosh(t-u))/u.
    const cplx logP = -log_gamma_complex(a) + a * (std::log(2.0) + t) - 2.0 * a * std::log(std::expm1(t)) +
                      double(2 - n) * std::log(std::sinh(t));
    const auto rule = endpoint_rule(a - 1.0, t, std::min(2 * t, 2 * std::numbers::pi), 0.0, 0);
    std::vector<double> rho(rule.size());
    std::vector<cplx> w(rule.size());
    for (std::size_t j = 0; j < rule.size(); ++j) {
        const double u = rule.nodes[j];
        rho[j] = t - u;
        w[j] = rule.weights[j] * std::exp(logP + (a - 1.0) * std::log(detail::mehler_base(t, u))) *
               std::pow(std::sinh(rho[j]), n - 1);
    }
    return evaluate_pointwise(grid, [&](double r) {
        cplx s = 0;
        for (std::size_t j = 0; j < rho.size(); ++j) s += w[j] * spherical_mean_at(f, rho[j], r);
        return s;
    });
}

RadialFunction direct_radial_convolution(const RadialFunction& f, const RadialFunction& kappa,
                                         const RadialGridPtr& target) {
    if (f.grid().dimension() != kappa.grid().dimension())
        throw PreconditionError("direct_radial_convolution: dimension mismatch");
    const auto grid = target_or(f, target);
    const auto& kg = kappa.grid();
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < kappa.size(); ++i)
        if (kappa.values()[i] != cplx(0)) active.push_back(i);
    return evaluate_pointwise(grid, [&](double r) {
        cplx s = 0;
        for (std::size_t i : active) s += kg.weights()[i] * kappa.values()[i] * spherical_mean_at(f, kg.nodes()[i], r);
        return s;
    });
}

std::vector<RadialFunction> multiplier_sweep(cplx alpha, const RadialFunction& f, std::span<const double> radii,
                                             const SpectralGridPtr& sgrid, const RadialGridPtr& target) {
    const auto grid = target_or(f, target);
    const auto Ff = forward_sft(f, sgrid);
    std::vector<std::shared_ptr<const std::vector<cplx>>> symbols(radii.size());
    parallel_for(radii.size(), [&](std::size_t k) { symbols[k] = symbol_for(alpha, radii[k], *sgrid); });
    std::vector<RadialFunction> out;
    out.reserve(radii.size());
    for (std::size_t k = 0; k < radii.size(); ++k) out.push_back(apply_symbol(Ff, *symbols[k], grid));
    return out;
}

namespace {

RadialFunction pointwise_max(const RadialGridPtr& grid, const std::vector<RadialFunction>& fs, std::size_t begin,
                             std::size_t end) {
    std::vector<cplx> out(grid->size(), 0.0);
    double bound = 0;
    for (std::size_t k = begin; k < end; ++k) {
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = std::max(out[i].real(), std::abs(fs[k].values()[i]));
        bound = std::max(bound, fs[k].truncation_bound);
    }
    RadialFunction r(grid, std::move(out));
    r.truncation_bound = bound;
    return r;
}

}  // namespace

RadialFunction lacunary_maximal(cplx alpha, const RadialFunction& f, const LacunarySet& lambda,
                                const SpectralGridPtr& sgrid) {
    return local_global_parts(alpha, f, lambda, sgrid).full;
}

LocalGlobal local_global_parts(cplx alpha, const RadialFunction& f, const LacunarySet& lambda,
                               const SpectralGridPtr& sgrid) {
    const auto& radii = lambda.values();
    const auto means = multiplier_sweep(alpha, f, radii, sgrid);
    const auto J = static_cast<std::size_t>(lambda.J());
    auto local = pointwise_max(f.grid_ptr(), means, 0, J);
    auto global = pointwise_max(f.grid_ptr(), means, J, means.size());
    std::vector<cplx> full(f.size());
    for (std::size_t i = 0; i < full.size(); ++i)
        full[i] = std::max(local.values()[i].real(), global.values()[i].real());
    RadialFunction all(f.grid_ptr(), std::move(full));
    all.truncation_bound = std::max(local.truncation_bound, global.truncation_bound);
    return {std::move(local), std::move(global), std::move(all)};
}

RadialFunction ball_average(const RadialFunction& f, double t) {
    if (!(t > 0)) throw PreconditionError("ball_average needs t > 0");
    const Dimension n = f.grid().dimension();
    const int panels = std::max(1, static_cast<int>(std::ceil(2 * t)));
    const auto rule = composite_rule(0, t, panels, 16);
    std::vector<double> w(rule.size());
    const double scale = sphere_area(n) / ball_volume(t, n);
    for (std::size_t j = 0; j < rule.size(); ++j)
        w[j] = rule.weights[j].real() * scale * std::pow(std::sinh(rule.nodes[j]), n.value() - 1);
    std::vector<cplx> mod(f.size());
    for (std::size_t i = 0; i < mod.size(); ++i) mod[i] = std::abs(f.values()[i]);
    RadialFunction::Profile prof;
    if (f.has_profile()) prof = [p = f.profile()](double r) { return std::abs(p(r)); };
    const RadialFunction absf(f.grid_ptr(), std::move(mod), prof);
    return evaluate_pointwise(f.grid_ptr(), [&](double r) {
        double s = 0;
        for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * spherical_mean_at(absf, rule.nodes[j], r).real();
        return cplx(s);
    });
}

RadialFunction hl_maximal(const RadialFunction& f, std::span<const double> ts) {
    std::vector<cplx> out(f.size(), 0.0);
    for (double t : ts) {
        const auto avg = ball_average(f, t);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i].real(), avg.values()[i].real());
    }
    return RadialFunction(f.grid_ptr(), std::move(out));
}

namespace {

void check_ks_exponent(double p) {
    if (!(p > 1 && p < 2)) throw PreconditionError("Kunze-Stein bound needs 1 < p < 2");
}

}  // namespace

double kunze_stein_rhs(const RadialFunction& kappa, double p) {
    check_ks_exponent(p);
    const auto& g = kappa.grid();
    const double m = g.dimension().value() - 1;
    const double q = p / (p - 1);
    double s = 0;
    for (std::size_t i = 0; i < kappa.size(); ++i) {
        const cplx k = kappa.values()[i];
        if (k.real() < 0 || std::abs(k.imag()) > 1e-14 * std::abs(k.real()))
            throw PreconditionError("kunze_stein_rhs needs a nonnegative kernel");
        s += g.weights()[i] * std::exp(-m * g.nodes()[i] / q) * k.real();
    }
    return s;
}

double kunze_stein_rhs(const std::function<double(double)>& kappa, double a, double b, double p, Dimension n) {
    check_ks_exponent(p);
    if (!(0 <= a && a <= b)) throw PreconditionError("kunze_stein_rhs needs 0 <= a <= b");
    const double m = n.value() - 1;
    const double q = p / (p - 1);
    const QuadOptions opt{0.0, 1e-13, 1L << 22};
    const double s = integrate(
        [&](double r) {
            const double k = kappa(r);
            if (k < 0) throw PreconditionError("kunze_stein_rhs needs a nonnegative kernel");
            return std::exp(-m * r / q) * k * std::pow(std::sinh(r), n.value() - 1);
        },
        a, b, opt);
    return sphere_area(n) * s;
}

double kunze_stein_rhs_k2(double re_alpha, int j, double p, Dimension n) {
    check_ks_exponent(p);
    if (!(re_alpha > 0)) throw PreconditionError("kunze_stein_rhs_k2 needs Re(alpha) > 0");
    if (j < 1) throw PreconditionError("kunze_stein_rhs_k2 needs j >= 1");
    const double m = n.value() - 1;
    const double q = p / (p - 1);
    // u = j - r; the factor (j - r)^{alpha-1} is carried by the endpoint rule.
    const cplx s = integrate_endpoint(
        [&](double u) {
            const double r = j - u;
            return std::exp(-m * j - m * r / q) * std::pow(std::sinh(r), n.value() - 1);
        },
        re_alpha - 1, 0.5, 2.0, 0.0, QuadOptions{0.0, 1e-13, 1L << 22});
    return sphere_area(n) * s.real();
}

double kunze_stein_ratio(const RadialFunction& f, const RadialFunction& kappa, double p, const SpectralGridPtr& sgrid) {
    const double rhs = kunze_stein_rhs(kappa, p);
    const double fp = lp_norm(f, p);
    if (rhs == 0 || fp == 0) throw PreconditionError("kunze_stein_ratio: zero kernel or function");
    const auto conv = spectral_convolve(f, kappa, sgrid);
    return lp_norm(conv, p) / (rhs * fp);
}

std::vector<SummabilityTerm> global_part_sums(cplx alpha, Dimension n, int K_max, std::span<const double> lambdas) {
    if (K_max < 1) throw PreconditionError("global_part_sums needs K_max >= 1");
    if (lambdas.empty()) throw PreconditionError("global_part_sums needs a lambda grid");
    const double lmax = *std::max_element(lambdas.begin(), lambdas.end());
    std::vector<double> sup(static_cast<std::size_t>(K_max));
    parallel_for(sup.size(), [&](std::size_t k) {
        const SymbolRule rule(MultiplierSpec(n, alpha, double(k + 1)), lmax);
        double s = 0;
        for (double l : lambdas) s = std::max(s, std::abs(rule.value(l)));
        sup[k] = s;
    });
    std::vector<SummabilityTerm> out;
    double a = 0, b = 0;
    for (int K = 1; K <= K_max; ++K) {
        a += sup[K - 1] * sup[K - 1];
        b += double(K) * K * std::exp(-(n.value() - 1.0) * K);
        out.push_back({K, a, b});
    }
    return out;
}

I3Result i3_sup(cplx alpha, Dimension n, std::span<const double> lambdas, int J) {
    if (J < 0) throw PreconditionError("i3_sup needs J >= 0");
    if (lambdas.empty()) throw PreconditionError("i3_sup needs a lambda grid");
    if (J == 0) return {0.0, lambdas.front()};
    const double lmax = *std::max_element(lambdas.begin(), lambdas.end());
    std::vector<std::vector<double>> terms(static_cast<std::size_t>(J));
    parallel_for(terms.size(), [&](std::size_t k) {
        const double t = std::ldexp(1.0, -static_cast<int>(k + 1));
        const SymbolRule rule(MultiplierSpec(n, alpha, t), lmax);
        const cplx m0 = rule.value(0.0);
        auto& row = terms[k];
        row.resize(lambdas.size());
        for (std::size_t i = 0; i < lambdas.size(); ++i)
            row[i] = std::norm(rule.value(lambdas[i]) - m0 * heat_symbol(t * t, lambdas[i]));
    });
    I3Result best{0.0, lambdas.front()};
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        double s = 0;
        for (const auto& row : terms) s += row[i];
        if (s > best.value) best = {s, lambdas[i]};
    }
    return best;
}

CzTails cz_tail_integrals(cplx alpha, Dimension n, int j, double r_l) {
    const double a = alpha.real();
    if (!(a > 0)) throw PreconditionError("cz_tail_integrals needs Re(alpha) > 0");
    if (j < 1) throw PreconditionError("cz_tail_integrals needs j >= 1");
    if (!(r_l > 0)) throw PreconditionError("cz_tail_integrals needs r_l > 0");
    const double eps = std::ldexp(r_l, j);
    if (!(eps <= 1)) throw PreconditionError("cz_tail_integrals needs 2^j r_l <= 1");
    const int m = n.value() - 1;
    const QuadOptions opt{0.0, 1e-12, 1L << 22};
    const double L1 = std::min(3 * eps, 1.0);
    const double J1 =
        2 * integrate_endpoint([&](double y) { return std::pow(1 - y, m); }, a - 1, L1, 1.0, 0.0, opt).real();
    double J2 = 0;
    if (eps < 0.5) {
        // y = e^s removes the algebraic growth at y = eps.
        const double I = integrate(
            [&](double s) { return std::pow(-std::expm1(s), m) * std::exp((a - 1) * s); }, std::log(eps),
            std::log1p(-eps), opt);
        J2 = eps * I;
    }
    return {J1, J2};
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw PreconditionError("loglog_slope needs two matching samples");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0 && y[i] > 0)) throw PreconditionError("loglog_slope needs positive data");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= x.size();
    my /= y.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

std::string to_string(RegionCurve c) {
    return c == RegionCurve::lacunary ? "lacunary" : "full";
}

double critical_exponent(Dimension n) {
    return n.value() == 2 ? 4.0 : 2.0 * (n.value() + 1) / (n.value() - 1);
}

double region_threshold_at(double x, Dimension n, RegionCurve which) {
    if (!(x >= 0 && x <= 1)) throw PreconditionError("region_threshold_at needs 1/p in [0, 1]");
    const double d = n.value();
    if (which == RegionCurve::lacunary) return (d - 1) * std::abs(x - 0.5) - (d - 1) / 2;
    if (x >= 0.5) return 1 - d + d * x;
    const double pn = critical_exponent(n);
    if (x >= 1 / pn) return (2 - d) * x - (1 - 2 * x) / (pn * (pn - 2));
    return (2 - d) * x - x / pn;
}

double region_threshold(double p, Dimension n, RegionCurve which) {
    if (!(p > 1)) throw PreconditionError("region_threshold needs p > 1");
    return region_threshold_at(std::isinf(p) ? 0.0 : 1 / p, n, which);
}

std::vector<RegionVertex> region_vertices(Dimension n) {
    const double d = n.value();
    const double pn = critical_exponent(n);
    return {{"O", 0.0, 0.0},
            {"A", 1 / pn, (2 - d) / pn - 1 / (pn * pn)},
            {"B", 0.5, (2 - d) / 2},
            {"C", 1.0, 1.0},
            {"D", 0.5, (1 - d) / 2},
            {"E", 1.0, 0.0}};
}

double interpolation_alpha(double alpha0, double p0, double alpha1, double p) {
    if (!(p0 > 1 && p0 < 2)) throw PreconditionError("interpolation_alpha needs 1 < p0 < 2");
    if (!(p >= p0 && p <= 2)) throw PreconditionError("interpolation_alpha needs p in [p0, 2]");
    const double span = 1 / p0 - 0.5;
    return alpha0 * (1 / p - 0.5) / span + alpha1 * (1 / p0 - 1 / p) / span;
}

double interpolation_infimum(double p, Dimension n, int resolution) {
    if (!(p > 1 && p <= 2)) throw PreconditionError("interpolation_infimum needs 1 < p <= 2");
    if (resolution < 2) throw PreconditionError("interpolation_infimum needs resolution >= 2");
    // Offsets from the open boundary of the admissible set, log-spaced in [1e-6, 1].
    std::vector<double> off(static_cast<std::size_t>(resolution));
    for (int k = 0; k < resolution; ++k) off[k] = std::pow(10.0, -6.0 + 6.0 * k / (resolution - 1));
    const double floor1 = 0.5 * (1 - n.value());
    double best = std::numeric_limits<double>::infinity();
    for (double d0 : off)
        for (double d1 : off)
            for (double dp : off) {
                const double p0 = 1 + dp * (p - 1) * 0.999;
                if (!(p0 < 2)) continue;
                best = std::min(best, interpolation_alpha(d0, p0, floor1 + d1, p));
            }
    return best;
}

double empirical_operator_norm(const std::function<RadialFunction(const RadialFunction&)>& op,
                               const TestFamily& family, double p) {
    if (family.empty()) throw PreconditionError("empirical_operator_norm needs a nonempty family");
    double best = 0;
    for (const auto& m : family) {
        const double d = lp_norm(m.f, p);
        if (d == 0) throw PreconditionError("empirical_operator_norm: family member '" + m.descriptor() + "' is zero");
        best = std::max(best, lp_norm(op(m.f), p) / d);
    }
    return best;
}

}  // namespace hyperlac

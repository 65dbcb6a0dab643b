#include "hyperlac/transform.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <mutex>
#include <sstream>

#include "hyperlac/errors.hpp"
#include "hyperlac/specfun.hpp"
#include "hyperlac/spherical.hpp"

namespace hyperlac {

namespace {

std::string format_key(const char* kind, int n, double extent, std::size_t count) {
    std::ostringstream os;
    os.precision(17);
    os << kind << ":n=" << n << ":max=" << extent << ":N=" << count;
    return os.str();
}

std::vector<double> barycentric_weights(const GaussRule& g) {
    std::vector<double> b(g.size());
    for (std::size_t j = 0; j < g.size(); ++j)
        b[j] = ((j % 2) ? -1.0 : 1.0) * std::sqrt((1 - g.nodes[j] * g.nodes[j]) * g.weights[j]);
    return b;
}

}  // namespace

std::shared_ptr<const RadialGrid> RadialGrid::make(Dimension n, double r_max, int n_r, int order) {
    if (!(r_max > 1)) throw PreconditionError("RadialGrid needs r_max > 1");
    if (order < 2 || n_r % order != 0 || n_r / order < 4)
        throw PreconditionError("RadialGrid node count must be a multiple of the panel order, with at least 4 panels");
    const int panels = n_r / order;
    // Uniform panels of width 1/per_unit, except that the first one is split dyadically
    // towards the origin.
    const int per_unit = std::max(1, static_cast<int>((panels - 4) / r_max));
    const double h = 1.0 / per_unit;
    const int uniform = static_cast<int>(std::ceil((r_max - h) / h - 1e-9));
    const int dyadic = panels - uniform;
    if (dyadic < 1 || uniform < 1) throw PreconditionError("RadialGrid: too few nodes for r_max");

    std::shared_ptr<RadialGrid> grid(new RadialGrid(n));
    grid->r_max_ = r_max;
    grid->order_ = order;
    auto& e = grid->edges_;
    e.push_back(0.0);
    for (int k = dyadic - 1; k >= 0; --k) e.push_back(h * std::ldexp(1.0, -k));
    for (int k = 1; k <= uniform; ++k) e.push_back(std::min(r_max, h + k * h));
    e.back() = r_max;

    const auto& g = gauss_legendre(order);
    const double sigma = sphere_area(n);
    for (std::size_t p = 0; p + 1 < e.size(); ++p) {
        const double c = 0.5 * (e[p] + e[p + 1]), h = 0.5 * (e[p + 1] - e[p]);
        for (int j = 0; j < order; ++j) {
            const double r = c + h * g.nodes[j];
            grid->nodes_.push_back(r);
            grid->weights_.push_back(h * g.weights[j] * sigma * std::pow(std::sinh(r), n.value() - 1));
        }
    }
    grid->bary_ = barycentric_weights(g);
    grid->key_ = format_key("radial", n.value(), r_max, grid->nodes_.size()) + ":q=" + std::to_string(order);
    return grid;
}

cplx RadialGrid::interpolate(std::span<const cplx> values, double r) const {
    if (values.size() != nodes_.size()) throw PreconditionError("interpolate: value count does not match grid");
    if (r < 0) throw PreconditionError("interpolate: negative radius");
    if (r > r_max_) return 0.0;
    auto it = std::upper_bound(edges_.begin(), edges_.end(), r);
    std::size_t p = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - edges_.begin()) - 1));
    p = std::min(p, edges_.size() - 2);
    const std::size_t base = p * static_cast<std::size_t>(order_);
    cplx num = 0;
    double den = 0;
    for (int j = 0; j < order_; ++j) {
        const double d = r - nodes_[base + j];
        if (d == 0) return values[base + j];
        const double w = bary_[j] / d;
        num += w * values[base + j];
        den += w;
    }
    return num / den;
}

std::shared_ptr<const SpectralGrid> SpectralGrid::make(Dimension n, double lambda_max, int n_lambda) {
    if (!(lambda_max > 0)) throw PreconditionError("SpectralGrid needs lambda_max > 0");
    if (n_lambda < kOrder || n_lambda % kOrder != 0)
        throw PreconditionError("SpectralGrid node count must be a positive multiple of 8");
    std::shared_ptr<SpectralGrid> grid(new SpectralGrid(n));
    grid->lambda_max_ = lambda_max;
    const int panels = n_lambda / kOrder;
    const auto& g = gauss_legendre(kOrder);
    const double kappa = inversion_constant(n);
    const double h = 0.5 * lambda_max / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = (2 * p + 1) * h;
        for (int j = 0; j < kOrder; ++j) {
            const double l = c + h * g.nodes[j];
            grid->nodes_.push_back(l);
            grid->weights_.push_back(h * g.weights[j] * kappa * plancherel_density(l, n));
        }
    }
    grid->key_ = format_key("spectral", n.value(), lambda_max, grid->nodes_.size());
    return grid;
}

RadialFunction::RadialFunction(RadialGridPtr grid, std::vector<cplx> values, Profile profile, std::string label)
    : grid_(std::move(grid)), values_(std::move(values)), profile_(std::move(profile)), label_(std::move(label)) {
    if (!grid_) throw PreconditionError("RadialFunction needs a grid");
    if (values_.size() != grid_->size()) throw PreconditionError("RadialFunction: value count does not match grid");
    for (const auto& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw PreconditionError("RadialFunction: non-finite value");
}

RadialFunction RadialFunction::sample(RadialGridPtr grid, Profile profile, std::string label) {
    std::vector<cplx> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = profile(grid->nodes()[i]);
    return RadialFunction(std::move(grid), std::move(v), std::move(profile), std::move(label));
}

RadialFunction RadialFunction::zero(RadialGridPtr grid) {
    const std::size_t n = grid->size();
    return RadialFunction(std::move(grid), std::vector<cplx>(n, 0.0), [](double) { return 0.0; }, "zero");
}

cplx RadialFunction::at(double r) const {
    if (profile_) return profile_(r);
    return grid_->interpolate(values_, r);
}

SpectralFunction::SpectralFunction(SpectralGridPtr grid, std::vector<cplx> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw PreconditionError("SpectralFunction needs a grid");
    if (values_.size() != grid_->size()) throw PreconditionError("SpectralFunction: value count does not match grid");
}

PhiTable::PhiTable(const SpectralGrid& s, const RadialGrid& r) : m_(s.size(), r.size()) {
    if (s.dimension() != r.dimension()) throw PreconditionError("PhiTable: grids of different dimension");
    for (std::size_t k = 0; k < s.size(); ++k) {
        const auto row = spherical_phi_profile(s.nodes()[k], s.dimension(), r.nodes());
        for (std::size_t i = 0; i < row.size(); ++i) m_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = row[i];
    }
}

namespace {

struct TableCache {
    std::mutex mu;
    std::list<std::pair<std::string, std::shared_ptr<const PhiTable>>> entries;
    static constexpr std::size_t kCapacity = 6;
};

TableCache& table_cache() {
    static TableCache c;
    return c;
}

}  // namespace

std::shared_ptr<const PhiTable> phi_table(const SpectralGrid& s, const RadialGrid& r) {
    const std::string key = s.key() + "|" + r.key();
    auto& c = table_cache();
    {
        std::lock_guard lock(c.mu);
        for (auto it = c.entries.begin(); it != c.entries.end(); ++it)
            if (it->first == key) {
                c.entries.splice(c.entries.begin(), c.entries, it);
                return it->second;
            }
    }
    auto table = std::make_shared<const PhiTable>(s, r);
    std::lock_guard lock(c.mu);
    c.entries.emplace_front(key, table);
    while (c.entries.size() > TableCache::kCapacity) c.entries.pop_back();
    return table;
}

void clear_phi_tables() {
    auto& c = table_cache();
    std::lock_guard lock(c.mu);
    c.entries.clear();
}

std::vector<double> phi_column(const SpectralGrid& s, double t) {
    if (t < 0) throw PreconditionError("phi_column needs t >= 0");
    std::vector<double> out(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) out[k] = spherical_phi_fast(s.nodes()[k], t, s.dimension());
    return out;
}

double radial_tail_estimate(const RadialFunction& f) {
    const auto& g = f.grid();
    const auto phi0 = spherical_phi_profile(0.0, g.dimension(), g.nodes());
    double mass = 0;
    for (std::size_t i = 0; i < f.size(); ++i) mass += g.weights()[i] * std::abs(f.values()[i]) * phi0[i];
    const double R = g.r_max();
    const double edge = std::abs(f.values().back()) * spherical_phi_fast(0.0, R, g.dimension()) *
                        sphere_area(g.dimension()) * std::pow(std::sinh(R), g.dimension().value() - 1);
    if (mass == 0) return edge == 0 ? 0.0 : INFINITY;
    return edge / mass;
}

double spectral_tail_estimate(const SpectralFunction& F) {
    const auto& g = F.grid();
    double mass = 0;
    for (std::size_t k = 0; k < F.size(); ++k) mass += g.weights()[k] * std::abs(F.values()[k]);
    const double L = g.lambda_max();
    const double edge =
        std::abs(F.values().back()) * inversion_constant(g.dimension()) * plancherel_density(L, g.dimension());
    if (mass == 0) return edge == 0 ? 0.0 : INFINITY;
    return edge / mass;
}

namespace {

void split(const std::vector<cplx>& v, const std::vector<double>& w, Eigen::VectorXd& re, Eigen::VectorXd& im) {
    re.resize(static_cast<Eigen::Index>(v.size()));
    im.resize(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        re[static_cast<Eigen::Index>(i)] = w[i] * v[i].real();
        im[static_cast<Eigen::Index>(i)] = w[i] * v[i].imag();
    }
}

bool all_real(const std::vector<cplx>& v) {
    return std::all_of(v.begin(), v.end(), [](const cplx& z) { return z.imag() == 0; });
}

}  // namespace

SpectralFunction forward_sft(const RadialFunction& f, const SpectralGridPtr& sgrid, const TransformOptions& opt) {
    if (f.grid().dimension() != sgrid->dimension()) throw PreconditionError("forward_sft: dimension mismatch");
    const double tail = radial_tail_estimate(f);
    if (opt.check_tail && tail > opt.tail_tol)
        throw TailError("forward_sft: function '" + f.label() + "' is not negligible at r_max (relative tail " +
                        std::to_string(tail) + ")");
    auto table = phi_table(*sgrid, f.grid());
    Eigen::VectorXd re, im;
    split(f.values(), f.grid().weights(), re, im);
    Eigen::VectorXd Fre = table->matrix() * re;
    std::vector<cplx> out(sgrid->size());
    if (all_real(f.values())) {
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = Fre[static_cast<Eigen::Index>(k)];
    } else {
        Eigen::VectorXd Fim = table->matrix() * im;
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] = cplx(Fre[static_cast<Eigen::Index>(k)], Fim[static_cast<Eigen::Index>(k)]);
    }
    SpectralFunction F(sgrid, std::move(out));
    F.truncation_bound = tail;
    return F;
}

RadialFunction inverse_sft(const SpectralFunction& F, const RadialGridPtr& rgrid, const TransformOptions& opt) {
    if (F.grid().dimension() != rgrid->dimension()) throw PreconditionError("inverse_sft: dimension mismatch");
    const double tail = spectral_tail_estimate(F);
    if (opt.check_tail && tail > opt.tail_tol)
        throw TailError("inverse_sft: spectral function is not negligible at lambda_max (relative tail " +
                        std::to_string(tail) + ")");
    auto table = phi_table(F.grid(), *rgrid);
    Eigen::VectorXd re, im;
    split(F.values(), F.grid().weights(), re, im);
    Eigen::VectorXd fre = table->matrix().transpose() * re;
    std::vector<cplx> out(rgrid->size());
    if (all_real(F.values())) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = fre[static_cast<Eigen::Index>(i)];
    } else {
        Eigen::VectorXd fim = table->matrix().transpose() * im;
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = cplx(fre[static_cast<Eigen::Index>(i)], fim[static_cast<Eigen::Index>(i)]);
    }
    RadialFunction f(rgrid, std::move(out));
    f.truncation_bound = std::max(tail, F.truncation_bound);
    return f;
}

double lp_norm(const RadialFunction& f, double p) {
    if (!(p > 0)) throw PreconditionError("lp_norm needs p > 0");
    if (std::isinf(p)) {
        double m = 0;
        for (const auto& v : f.values()) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0;
    const auto& w = f.grid().weights();
    for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * std::pow(std::abs(f.values()[i]), p);
    return std::pow(s, 1 / p);
}

double spectral_l2_norm(const SpectralFunction& F) {
    double s = 0;
    for (std::size_t k = 0; k < F.size(); ++k) s += F.grid().weights()[k] * std::norm(F.values()[k]);
    return std::sqrt(s);
}

double plancherel_defect(const RadialFunction& f, const SpectralGridPtr& sgrid) {
    const double a = lp_norm(f, 2);
    if (a == 0) throw PreconditionError("plancherel_defect: f is identically zero");
    const double b = spectral_l2_norm(forward_sft(f, sgrid));
    return std::abs(a - b) / a;
}

RadialFunction apply_symbol(const SpectralFunction& Ff, std::span<const cplx> symbol, const RadialGridPtr& target,
                            const TransformOptions& opt) {
    if (symbol.size() != Ff.size()) throw PreconditionError("apply_symbol: symbol length does not match grid");
    std::vector<cplx> v(Ff.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = Ff.values()[k] * symbol[k];
    SpectralFunction G(Ff.grid_ptr(), std::move(v));
    G.truncation_bound = Ff.truncation_bound;
    return inverse_sft(G, target, opt);
}

RadialFunction spectral_convolve(const RadialFunction& f, const RadialFunction& g, const SpectralGridPtr& sgrid,
                                 const TransformOptions& opt) {
    if (f.grid().key() != g.grid().key()) throw PreconditionError("spectral_convolve: functions on different grids");
    const auto Ff = forward_sft(f, sgrid, opt);
    const auto Fg = forward_sft(g, sgrid, opt);
    std::vector<cplx> v(Ff.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = Ff.values()[k] * Fg.values()[k];
    SpectralFunction H(sgrid, std::move(v));
    H.truncation_bound = std::max(Ff.truncation_bound, Fg.truncation_bound);
    return inverse_sft(H, f.grid_ptr(), opt);
}

cplx radial_inner(const RadialFunction& f, const RadialFunction& g) {
    if (f.grid().key() != g.grid().key()) throw PreconditionError("radial_inner: functions on different grids");
    cplx s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f.grid().weights()[i] * f.values()[i] * std::conj(g.values()[i]);
    return s;
}

cplx spectral_inner(const SpectralFunction& F, const SpectralFunction& G) {
    if (F.grid().key() != G.grid().key()) throw PreconditionError("spectral_inner: functions on different grids");
    cplx s = 0;
    for (std::size_t k = 0; k < F.size(); ++k) s += F.grid().weights()[k] * F.values()[k] * std::conj(G.values()[k]);
    return s;
}

}  // namespace hyperlac

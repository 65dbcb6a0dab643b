#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperlac/geometry.hpp"
#include "hyperlac/quadrature.hpp"

namespace hyperlac {

/// Composite Gauss-Legendre nodes on [0, r_max] carrying the polar measure sigma_{n-1} sinh^{n-1} r dr.
///
/// Panels have uniform width 1/m (so every integer radius is a panel edge), except the first,
/// which is split dyadically towards the origin. High-order panels keep the forward transform exact
/// for phi_lambda oscillating up to the spectral cutoff.
class RadialGrid {
public:
    static std::shared_ptr<const RadialGrid> make(Dimension n, double r_max = 12.0, int n_r = 2048, int order = 32);

    Dimension dimension() const noexcept { return n_; }
    double r_max() const noexcept { return r_max_; }
    int order() const noexcept { return order_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    const std::vector<double>& edges() const noexcept { return edges_; }
    const std::string& key() const noexcept { return key_; }

    /// Lagrange interpolation inside the panel containing r; 0 beyond r_max.
    cplx interpolate(std::span<const cplx> values, double r) const;

private:
    RadialGrid(Dimension n) : n_(n) {}
    Dimension n_;
    double r_max_ = 0;
    int order_ = 0;
    std::vector<double> nodes_, weights_, edges_, bary_;
    std::string key_;
};

/// Composite Gauss-Legendre nodes on [0, lambda_max] carrying kappa_n |c(lambda)|^{-2} dlambda.
class SpectralGrid {
public:
    static constexpr int kOrder = 8;

    static std::shared_ptr<const SpectralGrid> make(Dimension n, double lambda_max = 256.0, int n_lambda = 4096);

    Dimension dimension() const noexcept { return n_; }
    double lambda_max() const noexcept { return lambda_max_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    const std::string& key() const noexcept { return key_; }

private:
    SpectralGrid(Dimension n) : n_(n) {}
    Dimension n_;
    double lambda_max_ = 0;
    std::vector<double> nodes_, weights_;
    std::string key_;
};

using RadialGridPtr = std::shared_ptr<const RadialGrid>;
using SpectralGridPtr = std::shared_ptr<const SpectralGrid>;

/// Radial function sampled on a RadialGrid. May carry the exact profile it was sampled from,
/// which direct (non-spectral) routes use for off-grid evaluation.
class RadialFunction {
public:
    using Profile = std::function<double(double)>;

    RadialFunction(RadialGridPtr grid, std::vector<cplx> values, Profile profile = {}, std::string label = {});

    static RadialFunction sample(RadialGridPtr grid, Profile profile, std::string label = {});
    static RadialFunction zero(RadialGridPtr grid);

    const RadialGrid& grid() const noexcept { return *grid_; }
    const RadialGridPtr& grid_ptr() const noexcept { return grid_; }
    const std::vector<cplx>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    const std::string& label() const noexcept { return label_; }
    bool has_profile() const noexcept { return static_cast<bool>(profile_); }
    const Profile& profile() const noexcept { return profile_; }

    /// Exact profile when available, otherwise grid interpolation.
    cplx at(double r) const;

    /// Estimated truncation error inherited from the transform that produced this function.
    double truncation_bound = 0;

private:
    RadialGridPtr grid_;
    std::vector<cplx> values_;
    Profile profile_;
    std::string label_;
};

class SpectralFunction {
public:
    SpectralFunction(SpectralGridPtr grid, std::vector<cplx> values);

    const SpectralGrid& grid() const noexcept { return *grid_; }
    const SpectralGridPtr& grid_ptr() const noexcept { return grid_; }
    const std::vector<cplx>& values() const noexcept { return values_; }
    std::vector<cplx>& values() noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    double truncation_bound = 0;

private:
    SpectralGridPtr grid_;
    std::vector<cplx> values_;
};

struct TransformOptions {
    bool check_tail = true;
    double tail_tol = 1e-8;
};

/// phi_{lambda_k}(r_i) for a (spectral, radial) grid pair, rows indexed by lambda.
class PhiTable {
public:
    PhiTable(const SpectralGrid& s, const RadialGrid& r);
    const Eigen::MatrixXd& matrix() const noexcept { return m_; }

private:
    Eigen::MatrixXd m_;
};

/// Shared immutable table for the grid pair, built on first use.
std::shared_ptr<const PhiTable> phi_table(const SpectralGrid& s, const RadialGrid& r);

/// Drops all cached tables.
void clear_phi_tables();

/// phi_{lambda_k}(t) for every node of the spectral grid.
std::vector<double> phi_column(const SpectralGrid& s, double t);

/// Relative size of f at r_max, measured against int |f| phi_0 dx.
double radial_tail_estimate(const RadialFunction& f);

/// Relative size of F at lambda_max, measured against int |F| |c|^{-2} dlambda.
double spectral_tail_estimate(const SpectralFunction& F);

/// Ff(lambda) = sigma_{n-1} int f(r) phi_lambda(r) sinh^{n-1} r dr on the spectral grid.
SpectralFunction forward_sft(const RadialFunction& f, const SpectralGridPtr& sgrid, const TransformOptions& opt = {});

/// f(r) = kappa_n int F(lambda) phi_lambda(r) |c(lambda)|^{-2} dlambda on the radial grid.
RadialFunction inverse_sft(const SpectralFunction& F, const RadialGridPtr& rgrid, const TransformOptions& opt = {});

/// (int |f|^p dx)^{1/p}; p = infinity gives the maximum modulus.
double lp_norm(const RadialFunction& f, double p);

/// ||F||_{L^2(kappa_n |c|^{-2} dlambda)}.
double spectral_l2_norm(const SpectralFunction& F);

/// | ||f||_2 - ||Ff||_2 | / ||f||_2.
double plancherel_defect(const RadialFunction& f, const SpectralGridPtr& sgrid);

/// Inverse transform of Ff * Fg, on the grid of f.
RadialFunction spectral_convolve(const RadialFunction& f, const RadialFunction& g, const SpectralGridPtr& sgrid,
                                 const TransformOptions& opt = {});

/// Multiply Ff by a spectral symbol and transform back onto `target`.
RadialFunction apply_symbol(const SpectralFunction& Ff, std::span<const cplx> symbol, const RadialGridPtr& target,
                            const TransformOptions& opt = {});

/// sum_i w_i f_i conj(g_i).
cplx radial_inner(const RadialFunction& f, const RadialFunction& g);
cplx spectral_inner(const SpectralFunction& F, const SpectralFunction& G);

}  // namespace hyperlac

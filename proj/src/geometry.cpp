#include "hyperlac/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hyperlac/errors.hpp"
#include "hyperlac/quadrature.hpp"

namespace hyperlac {

Dimension::Dimension(int n) : n_(n) {
    if (n < 2) throw PreconditionError("dimension must be at least 2, got " + std::to_string(n));
}

double sphere_area(Dimension n) {
    const double half = 0.5 * n.value();
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

HyperPoint::HyperPoint(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.size() < 3) throw PreconditionError("hyperboloid point needs at least 3 coordinates");
    if (coords_[0] < 1.0) throw PreconditionError("hyperboloid point must have x_0 >= 1");
    double q = coords_[0] * coords_[0];
    for (std::size_t i = 1; i < coords_.size(); ++i) q -= coords_[i] * coords_[i];
    if (std::abs(q - 1.0) > 1e-12 * coords_[0] * coords_[0])
        throw PreconditionError("point is not on the hyperboloid [x,x] = 1");
}

HyperPoint HyperPoint::origin(Dimension n) {
    std::vector<double> c(static_cast<std::size_t>(n.value()) + 1, 0.0);
    c[0] = 1.0;
    return HyperPoint(std::move(c));
}

HyperPoint HyperPoint::polar(double r, std::span<const double> direction) {
    if (r < 0) throw PreconditionError("polar radius must be nonnegative");
    double norm2 = 0;
    for (double d : direction) norm2 += d * d;
    if (std::abs(norm2 - 1.0) > 1e-12) throw PreconditionError("polar direction must be a unit vector");
    std::vector<double> c;
    c.reserve(direction.size() + 1);
    c.push_back(std::cosh(r));
    const double s = std::sinh(r);
    for (double d : direction) c.push_back(s * d);
    return HyperPoint(std::move(c));
}

double lorentz_form(const HyperPoint& x, const HyperPoint& y) {
    auto a = x.coords();
    auto b = y.coords();
    if (a.size() != b.size()) throw PreconditionError("points live in different dimensions");
    double s = a[0] * b[0];
    for (std::size_t i = 1; i < a.size(); ++i) s -= a[i] * b[i];
    return s;
}

double acosh1p(double delta) {
    // cosh d - 1 = 2 sinh^2(d/2)
    return 2.0 * std::asinh(std::sqrt(0.5 * delta));
}

double distance(const HyperPoint& x, const HyperPoint& y) {
    auto a = x.coords();
    auto b = y.coords();
    if (a.size() != b.size()) throw PreconditionError("points live in different dimensions");
    // [x,y] - 1 = -[x-y, x-y]/2; squares of differences are symmetric in (x,y).
    double q = -(a[0] - b[0]) * (a[0] - b[0]);
    for (std::size_t i = 1; i < a.size(); ++i) q += (a[i] - b[i]) * (a[i] - b[i]);
    double delta = 0.5 * q;
    // Far apart, the squared differences cancel badly; the form itself is then the better-conditioned quantity.
    if (delta > 1) return std::acosh(std::max(lorentz_form(x, y), 1.0));
    if (delta < 0) {
        if (delta < -1e-10) throw PreconditionError("Lorentz form below 1: points are not on the hyperboloid");
        delta = 0;
    }
    return acosh1p(delta);
}

double two_point_distance(double r, double t, double theta) {
    if (r < 0 || t < 0) throw PreconditionError("two_point_distance needs r, t >= 0");
    // cosh rho - 1 = 2 sinh^2((r-t)/2) + 2 sinh r sinh t sin^2(theta/2)
    const double a = std::sinh(0.5 * (r - t));
    const double b = std::sin(0.5 * theta);
    const double half_delta = a * a + std::sinh(r) * std::sinh(t) * b * b;
    return 2.0 * std::asinh(std::sqrt(half_delta));
}

double ball_volume(double t, Dimension n) {
    if (t < 0) throw PreconditionError("ball radius must be nonnegative");
    if (t == 0) return 0;
    const int k = n.value() - 1;
    // sinh^k is entire; unit-width Gauss-Legendre panels integrate it to round-off.
    const auto& rule = gauss_legendre(24);
    const int panels = static_cast<int>(std::ceil(t));
    const double h = t / panels;
    double sum = 0;
    for (int p = 0; p < panels; ++p) {
        const double a = p * h;
        for (std::size_t j = 0; j < rule.size(); ++j) {
            const double r = a + 0.5 * h * (rule.nodes[j] + 1.0);
            sum += 0.5 * h * rule.weights[j] * std::pow(std::sinh(r), k);
        }
    }
    return sphere_area(n) * sum;
}

}  // namespace hyperlac

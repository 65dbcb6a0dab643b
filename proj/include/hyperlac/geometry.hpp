#pragma once

#include <span>
#include <vector>

namespace hyperlac {

/// Dimension of the hyperbolic space H^n. Always at least 2.
class Dimension {
public:
    explicit Dimension(int n);

    int value() const noexcept { return n_; }
    /// Half the sum of positive roots, (n-1)/2.
    double rho() const noexcept { return 0.5 * (n_ - 1); }

    friend bool operator==(Dimension, Dimension) = default;
    friend auto operator<=>(Dimension, Dimension) = default;

private:
    int n_;
};

/// Surface area of the unit sphere S^{n-1} in R^n.
double sphere_area(Dimension n);

/// A point on the upper sheet of the hyperboloid [x,x] = 1, stored in ambient
/// coordinates (x_0, ..., x_n).
class HyperPoint {
public:
    /// Throws PreconditionError unless [x,x] = 1 to 1e-12 (relative to x_0^2) and x_0 >= 1.
    explicit HyperPoint(std::vector<double> coords);

    static HyperPoint origin(Dimension n);
    /// (cosh r, sigma sinh r). `direction` must be a unit vector of length n.
    static HyperPoint polar(double r, std::span<const double> direction);

    Dimension dimension() const { return Dimension(static_cast<int>(coords_.size()) - 1); }
    std::span<const double> coords() const noexcept { return coords_; }

private:
    std::vector<double> coords_;
};

/// [x,y] = x_0 y_0 - x_1 y_1 - ... - x_n y_n.
double lorentz_form(const HyperPoint& x, const HyperPoint& y);

/// Geodesic distance arcosh([x,y]), evaluated from coordinate differences so that
/// nearby points do not lose precision. Symmetric bit-for-bit.
double distance(const HyperPoint& x, const HyperPoint& y);

/// Distance between two points at distances r and t from the origin whose
/// position vectors make the angle theta (hyperbolic law of cosines).
double two_point_distance(double r, double t, double theta);

/// Riemannian volume of a geodesic ball of radius t.
double ball_volume(double t, Dimension n);

/// arcosh(1 + delta) for delta >= 0 without cancellation near zero.
double acosh1p(double delta);

}  // namespace hyperlac

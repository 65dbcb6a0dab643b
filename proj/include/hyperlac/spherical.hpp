#pragma once

#include <span>
#include <vector>

#include "hyperlac/geometry.hpp"

namespace hyperlac {

/// phi_lambda(r) for real lambda at many radii, without quadrature.
///
/// Uses the hypergeometric series near the origin, the radial ODE in Liouville form at
/// intermediate radii and the Harish-Chandra expansion phi = 2 Re(c(lambda) Phi_lambda)
/// once r >= 1. `radii` must be sorted ascending and nonnegative.
std::vector<double> spherical_phi_profile(double lambda, Dimension n, std::span<const double> radii);

/// Single-radius convenience wrapper around spherical_phi_profile.
double spherical_phi_fast(double lambda, double r, Dimension n);

}  // namespace hyperlac

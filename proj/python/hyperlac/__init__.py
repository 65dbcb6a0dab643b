"""Spherical transforms, multiplier symbols and lacunary maximal operators on hyperbolic space."""

from ._hyperlac import (
    ConfigError,
    Error,
    Grids,
    PreconditionError,
    TailError,
    c_function,
    check_estimate,
    conical_legendre,
    critical_exponent,
    cz_tails,
    i3_sup,
    interpolation_infimum,
    kernel,
    kunze_stein_weight,
    log_gamma,
    plancherel_density,
    region_threshold,
    region_vertices,
    run,
    spherical_phi,
    spherical_phi_profile,
    symbol,
    symbol_derivative,
    validate_config,
)

__all__ = [name for name in dir() if not name.startswith("_")]

import cmath
import math

import pytest

import hyperlac


def test_phi_n3_closed_form():
    for lam in (0.5, 3.0, 40.0):
        for r in (0.2, 2.0, 6.0):
            exact = math.sin(lam * r) / (lam * math.sinh(r))
            assert abs(hyperlac.spherical_phi(lam, r, 3) - exact) < 1e-11


def test_density_and_log_gamma():
    assert abs(hyperlac.plancherel_density(7.0, 3) - 49.0) < 1e-11
    assert abs(hyperlac.log_gamma(0.5).real - 0.5 * math.log(math.pi)) < 1e-14


def test_symbol_at_alpha_zero_is_phi():
    for t in (0.1, 1.0, 3.0):
        m = hyperlac.symbol(0.0, t, 2, 4.0)
        assert abs(m - hyperlac.spherical_phi(4.0, t, 2)) < 1e-9


def test_symbol_is_even():
    assert abs(hyperlac.symbol(0.5 + 1j, 1.5, 3, 2.0) - hyperlac.symbol(0.5 + 1j, 1.5, 3, -2.0)) < 1e-13


def test_bad_multiplier_raises():
    with pytest.raises(ValueError):
        hyperlac.symbol(-0.5, 1.0, 2, 1.0)


def test_grids_and_routes():
    g = hyperlac.Grids(3)
    assert g.plancherel_defect("gaussian", 1.0) < 1e-8
    a = g.spherical_mean("gaussian", 1.0, 1.0, "spectral")
    b = g.spherical_mean("gaussian", 1.0, 1.0, "direct")
    assert max(abs(x - y) for x, y in zip(a, b)) < 1e-7
    norm = g.lacunary_maximal_norm("gaussian", 1.0, 0.0, 4, 4, 2.0)
    assert 1.0 <= norm < 3.0


def test_region_and_interpolation():
    verts = {name: (x, y) for name, x, y in hyperlac.region_vertices(3)}
    assert verts["D"] == (0.5, -1.0)
    assert verts["B"] == (0.5, -0.5)
    assert abs(hyperlac.interpolation_infimum(1.5, 3) - (1 - 3 + 2 / 1.5)) < 1e-3


def test_config_validation():
    echo = hyperlac.validate_config("")
    assert echo["grid.n_r"] == "2048"
    with pytest.raises(hyperlac.ConfigError):
        hyperlac.validate_config("nonsense.key = 1")


def test_run_region_command():
    result = hyperlac.run("region")
    assert result["pass"]
    assert any(r["experiment_id"] == "region-ordering" for r in result["rows"])


def test_cz_tail_scaling():
    j1a, _ = hyperlac.cz_tails(1.0, 2, 8, 2.0 ** -40)
    j1b, _ = hyperlac.cz_tails(1.0, 2, 8, 2.0 ** -41)
    assert abs(j1a / j1b - 2.0) < 1e-3

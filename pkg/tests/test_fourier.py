"""Radial transform layer: blocks, grids, Plancherel, diagonal flows."""

import io
import math

import numpy as np
import pytest

from hlab.fourier import (FrequencyPoint, RadialFunction,
                          SpectralCoefficients, analyze, bump_profile,
                          coefficients_from_csv, coefficients_to_csv,
                          default_lambda_grid, evolve_heat,
                          evolve_schrodinger, forward_coefficient,
                          multiplicity, single_sign_lambda_grid,
                          spatial_norm_sq, spectral_norm_sq, symbol,
                          synthesize, vertical_translate, wigner_general_d1,
                          wigner_radial, sublaplacian_fd)
from hlab.group import GroupPoint


def test_block_profile_closed_forms():
    rho = np.linspace(0.0, 4.0, 23)
    for lam in (0.8, -1.3):
        a = abs(lam)
        np.testing.assert_allclose(wigner_radial(0, lam, rho),
                                   np.exp(-a * rho), rtol=1e-14)
        x = 2.0 * a * rho
        np.testing.assert_allclose(
            wigner_radial(2, lam, rho),
            np.exp(-a * rho) * (1.0 - 2.0 * x + 0.5 * x * x), rtol=1e-12,
            atol=1e-15)


def test_symbol_and_multiplicity():
    assert symbol(0, 2.0) == 8.0
    assert symbol(3, -0.5, d=1) == 4.0 * 0.5 * 7
    assert [multiplicity(ell, 1) for ell in range(5)] == [1, 1, 1, 1, 1]
    assert [multiplicity(ell, 2) for ell in range(4)] == [1, 2, 3, 4]
    assert multiplicity(2, 3) == 6


def test_frequency_point_validation():
    with pytest.raises(ValueError):
        FrequencyPoint(-1, 1.0)
    with pytest.raises(ValueError):
        FrequencyPoint(0, 0.0)


def test_matrix_elements_orthonormal_at_center():
    for lam in (1.3, -0.8):
        for n in range(3):
            for m in range(3):
                w = wigner_general_d1(n, m, lam, 0.0, 0.0)
                want = 1.0 if n == m else 0.0
                assert w == pytest.approx(want, abs=1e-7)


def test_matrix_elements_bounded_by_one():
    rng = np.random.default_rng(3)
    for _ in range(12):
        n, m = rng.integers(0, 3, 2)
        y, eta = rng.uniform(-1.5, 1.5, 2)
        lam = rng.uniform(0.3, 2.0) * rng.choice([-1.0, 1.0])
        assert abs(wigner_general_d1(int(n), int(m), lam, y, eta)) <= 1 + 1e-7
    with pytest.raises(ValueError):
        wigner_general_d1(0, 0, 0.0, 0.1, 0.1)


def test_default_lambda_grid_integrates_plancherel_weight():
    grid, w = default_lambda_grid(1e-3, 50.0, 400)
    assert grid.size == 800 and np.all(np.diff(grid) > 0)
    assert np.all(grid != 0.0)
    got = float(np.sum(w * np.exp(-np.abs(grid)) * np.abs(grid)))
    a = 1e-3
    want = 2.0 * ((1 + a) * math.exp(-a) - 51.0 * math.exp(-50.0))
    assert got == pytest.approx(want, rel=3e-4)
    with pytest.raises(ValueError):
        default_lambda_grid(2.0, 1.0)
    with pytest.raises(ValueError):
        default_lambda_grid(1e-3, 50.0, 1)


def test_coefficient_container_validation():
    grid = np.array([0.5, 1.0, 2.0])
    w = np.ones(3)
    vals = np.zeros((2, 3))
    SpectralCoefficients(d=1, lambda_grid=grid, weights=w, values=vals)
    with pytest.raises(ValueError):
        SpectralCoefficients(d=1, lambda_grid=np.array([-1.0, 0.0, 1.0]),
                             weights=w, values=vals)
    with pytest.raises(ValueError):
        SpectralCoefficients(d=1, lambda_grid=grid[::-1].copy(), weights=w,
                             values=vals)
    with pytest.raises(ValueError):
        SpectralCoefficients(d=1, lambda_grid=grid, weights=-w, values=vals)
    with pytest.raises(ValueError):
        SpectralCoefficients(d=1, lambda_grid=grid, weights=w,
                             values=np.zeros((2, 4)))
    with pytest.raises(ValueError):
        analyze(bump_profile(1.0), lambda_grid=grid)


def test_analyze_matches_single_point_quadrature():
    f = bump_profile(1.2)
    grid = np.array([-2.2, 0.9])
    c = analyze(f, ell_max=3, lambda_grid=grid,
                lambda_weights=np.ones(2), n_rho=200, n_s=160)
    for ell in (0, 1, 3):
        for j, lam in enumerate(grid):
            want = forward_coefficient(f, ell, float(lam), n_rho=256)
            assert c.values[ell, j] == pytest.approx(want, rel=1e-9, abs=1e-13)


def test_real_data_has_hermitian_coefficients():
    f = bump_profile(1.0)
    grid = np.array([-1.7, -0.6, 0.6, 1.7])
    c = analyze(f, ell_max=2, lambda_grid=grid,
                lambda_weights=np.ones(4), n_rho=96, n_s=96)
    np.testing.assert_allclose(c.values[:, :2], np.conj(c.values[:, :0:-2]),
                               rtol=0, atol=1e-12)


def _band_limited():
    """Coefficients supported on lam in (1, 3), ell <= 2, and their field."""
    grid, w = single_sign_lambda_grid(0.5, 3.5, 201)
    u = grid - 2.0
    inside = np.abs(u) < 1.0
    win = np.zeros(grid.size)
    win[inside] = np.exp(-u[inside] ** 2 / (1.0 - u[inside] ** 2))
    vals = np.zeros((3, grid.size), dtype=complex)
    vals[0] = win
    vals[1] = 0.5 * win
    vals[2] = -0.25 * win
    c = SpectralCoefficients(d=1, lambda_grid=grid, weights=w, values=vals)
    f = RadialFunction(profile=lambda rho, s: synthesize(c, rho, s),
                       support_rho=40.0, support_s=60.0)
    return c, f


def test_round_trip_on_band_limited_data():
    c, f = _band_limited()
    c2 = analyze(f, ell_max=4, lambda_grid=c.lambda_grid,
                 lambda_weights=c.weights, n_rho=160, n_s=400)
    scale = float(np.max(np.abs(c.values)))
    err = np.max(np.abs(c2.values[:3] - c.values)) / scale
    assert err < 2e-3
    # rows above the band must come back empty
    assert np.max(np.abs(c2.values[3:])) < 2e-3 * scale


def test_plancherel_identity_on_band_limited_data():
    c, f = _band_limited()
    spec = spectral_norm_sq(c)
    spat = spatial_norm_sq(f, n_rho=160, n_s=400)
    assert spec / spat == pytest.approx(math.pi ** 2, rel=5e-3)


def test_unitary_flow_conserves_spectral_mass():
    c, _ = _band_limited()
    n0 = spectral_norm_sq(c)
    for t in (1e-3, 0.37, 12.0):
        assert spectral_norm_sq(evolve_schrodinger(c, t)) == pytest.approx(
            n0, rel=1e-14)
    assert spectral_norm_sq(vertical_translate(c, 5.3)) == pytest.approx(
        n0, rel=1e-14)
    assert spectral_norm_sq(evolve_heat(c, 0.25)) < n0
    with pytest.raises(ValueError):
        evolve_heat(c, -1e-6)


def test_flow_multipliers_act_blockwise():
    c, _ = _band_limited()
    t = 0.173
    ev = evolve_schrodinger(c, t)
    j = c.lambda_grid.size // 2
    lam = c.lambda_grid[j]
    for ell in range(3):
        want = c.values[ell, j] * np.exp(4j * t * abs(lam) * (2 * ell + 1))
        assert ev.values[ell, j] == pytest.approx(want, rel=1e-13)
    hv = evolve_heat(c, 0.05)
    want = c.values[1, j] * math.exp(-4.0 * 0.05 * abs(lam) * 3)
    assert hv.values[1, j] == pytest.approx(want, rel=1e-13)


def test_vertical_translate_shifts_synthesis():
    c, _ = _band_limited()
    rho = np.array([0.0, 0.4, 2.0])
    s = np.array([-1.2, 0.3, 7.0])
    s0 = 2.75
    a = synthesize(vertical_translate(c, s0), rho, s)
    b = synthesize(c, rho, s - s0)
    np.testing.assert_allclose(a, b, rtol=1e-12)


def test_synthesize_rejects_negative_rho():
    c, _ = _band_limited()
    with pytest.raises(ValueError):
        synthesize(c, np.array([-0.1]), np.array([0.0]))


def test_finite_difference_matches_symbol():
    w = GroupPoint(np.array([0.3]), np.array([-0.2]), 0.4)
    for ell, lam in ((0, 0.7), (1, -0.9)):
        def mode(pt, ell=ell, lam=lam):
            blk = np.asarray(wigner_radial(ell, lam, pt.horizontal_sq()))
            return np.exp(1j * lam * pt.s) * complex(blk.reshape(-1)[0])
        got = sublaplacian_fd(mode, w)
        want = -symbol(ell, lam) * mode(w)
        assert got == pytest.approx(want, rel=5e-4)


def test_coefficient_csv_round_trip(tmp_path):
    c, _ = _band_limited()
    path = str(tmp_path / "coeffs.csv")
    coefficients_to_csv(c, path)
    back = coefficients_from_csv(path)
    assert back.d == c.d and back.ell_max == c.ell_max
    assert np.array_equal(back.lambda_grid, c.lambda_grid)
    assert np.array_equal(back.weights, c.weights)
    assert np.array_equal(back.values, c.values)
    # in-memory handles work too
    buf = io.StringIO()
    coefficients_to_csv(c, buf)
    buf.seek(0)
    again = coefficients_from_csv(buf)
    assert np.array_equal(again.values, c.values)
    with pytest.raises(ValueError):
        coefficients_from_csv(io.StringIO("# schema=1\n"))


def test_spectral_tail_of_bump_decays_like_one_over_ell():
    f = bump_profile(1.0)
    grid, w = default_lambda_grid(1e-3, 50.0, 400)
    c = analyze(f, ell_max=96, lambda_grid=grid, lambda_weights=w,
                n_rho=128)
    total = math.pi ** 2 * spatial_norm_sq(f)
    wl = c.weights * np.abs(c.lambda_grid)
    per_ell = (np.abs(c.values) ** 2) @ wl
    cum = np.cumsum(per_ell)
    tails = {L: (total - cum[L]) / total for L in (16, 32, 64)}
    for L, r in tails.items():
        assert 0.15 < r * L < 0.8, (L, r)
    assert tails[16] > tails[32] > tails[64]


def test_radial_function_table_and_point_eval():
    f = bump_profile(1.1, amplitude=2.0)
    rho = np.linspace(0.0, 1.2, 7)
    s = np.linspace(-1.2, 1.2, 9)
    tab = f.table(rho, s)
    assert tab.shape == (7, 9)
    assert tab.max() == pytest.approx(2.0, rel=1e-12)
    w = GroupPoint(np.array([0.2]), np.array([0.1]), -0.3)
    assert f.at_point(w) == pytest.approx(f.profile(w.horizontal_sq(), w.s))
    # scalar-only profiles are vectorized by the table path
    g = RadialFunction(profile=lambda r, t: math.exp(-r - t * t),
                       support_rho=30.0, support_s=6.0)
    tab2 = g.table(rho, s)
    assert tab2[3, 4] == pytest.approx(math.exp(-rho[3] - s[4] ** 2))
    with pytest.raises(ValueError):
        RadialFunction(profile=lambda r, t: r, support_rho=0.0, support_s=1.0)
    with pytest.raises(ValueError):
        bump_profile(-2.0)

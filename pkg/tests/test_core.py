import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from posmogram import (AngularPoint, DomainError, LambdaGrid, ModeIndex,
                       Parity, Posmogram, QuadratureConfig, amplitude,
                       amplitude_grid, count_nodes, expand_state,
                       expand_state_grid, normalization, posmogram,
                       reconstruct_state, spherical_harmonic, superposition,
                       weight_function)

from oracles import amplitude_i00_at_zero, simpson_dense

M00 = ModeIndex(0, 0)
SMALL_GRID = LambdaGrid(-6.0, 6.0, 241)


# ---------------------------------------------------------------------------
# weight function
# ---------------------------------------------------------------------------

def test_weight_at_origin():
    # N_00/sqrt(2) * 2^(-3/4)
    assert_allclose(weight_function(M00, 0.0), 0.5 * 2.0 ** -0.75, rtol=1e-15)


def test_weight_vanishes_for_m_positive_at_minus_infinity():
    mode = ModeIndex(1, 1)
    assert abs(weight_function(mode, -40.0)) < 1e-17
    assert weight_function(mode, -800.0) == 0.0


def test_weight_integral_matches_beta_reduction():
    # substituting t = e^u gives int dt / (1+t^2)^(3/4) = B(1/4, 1/2)/2
    want = 0.5 * math.gamma(0.25) * math.gamma(0.5) / (2.0 * math.gamma(0.75))
    got = simpson_dense(lambda u: weight_function(M00, u), -90.0, 90.0, n=400001)
    assert_allclose(got, want, rtol=1e-10)


def test_weight_is_finite_everywhere():
    u = np.linspace(-900.0, 900.0, 4001)
    w = weight_function(ModeIndex(7, 4), u)
    assert np.all(np.isfinite(w))


# ---------------------------------------------------------------------------
# amplitudes
# ---------------------------------------------------------------------------

def test_selection_rule_short_circuit():
    assert amplitude(ModeIndex(1, 0), Parity.EVEN, 0.37) == 0.0
    assert amplitude(ModeIndex(2, 1), Parity.EVEN, -1.2) == 0.0


def test_spot_value_at_zero():
    got = amplitude(M00, Parity.EVEN, 0.0)
    assert_allclose(got, amplitude_i00_at_zero(), rtol=1e-12)
    assert_allclose(got, 1.04604962005310165, rtol=1e-12)


def test_forced_integration_agrees_on_physical_sector():
    mode = ModeIndex(3, 2)
    lams = np.linspace(-4.0, 4.0, 17)
    plain = amplitude_grid(mode, Parity.ODD, lams)
    forced = amplitude_grid(mode, Parity.ODD, lams, force_integrate=True)
    assert_allclose(forced, plain, rtol=1e-13)


def test_hermitian_symmetry_of_amplitudes():
    mode = ModeIndex(2, 1)
    lams = np.linspace(0.05, 5.0, 40)
    up = amplitude_grid(mode, Parity.ODD, lams)
    dn = amplitude_grid(mode, Parity.ODD, -lams)
    assert np.max(np.abs(dn - np.conj(up))) < 1e-12


def test_amplitude_converges_under_panel_refinement():
    mode = ModeIndex(4, 1)
    lams = np.linspace(-6.0, 6.0, 25)
    coarse = amplitude_grid(mode, mode.physical_parity, lams,
                            QuadratureConfig(panel_order=16), check=False)
    fine = amplitude_grid(mode, mode.physical_parity, lams,
                          QuadratureConfig(panel_order=32), check=False)
    assert np.max(np.abs(fine - coarse)) < 1e-12


# ---------------------------------------------------------------------------
# posmograms
# ---------------------------------------------------------------------------

def test_parity_autoselection():
    assert posmogram(ModeIndex(5, 4), SMALL_GRID).parity is Parity.ODD
    assert posmogram(ModeIndex(4, 4), SMALL_GRID).parity is Parity.EVEN


def test_density_exactly_even_on_symmetric_grid():
    p = posmogram(ModeIndex(3, 1), SMALL_GRID)
    assert np.array_equal(p.density, p.density[::-1])
    assert np.array_equal(p.amplitudes, np.conj(p.amplitudes[::-1]))


def test_density_is_squared_amplitude():
    p = posmogram(ModeIndex(2, 0), SMALL_GRID)
    assert_allclose(p.density, np.abs(p.amplitudes) ** 2, rtol=0, atol=0)


def test_density_peak_for_ground_mode():
    p = posmogram(M00, LambdaGrid(-8.0, 8.0, 1601))
    k = np.argmax(p.density)
    assert p.lambdas()[k] == 0.0
    assert_allclose(p.density[k], 1.09421980761323832, rtol=1e-10)


def test_m_sign_invariance_of_density():
    for l, m in ((3, 2), (5, 5)):
        up = posmogram(ModeIndex(l, m), SMALL_GRID).density
        dn = posmogram(ModeIndex(l, -m), SMALL_GRID).density
        assert np.max(np.abs(up - dn)) <= 1e-12 * up.max()


def test_forced_parity_gives_zero_gram():
    p = posmogram(ModeIndex(1, 0), SMALL_GRID, parity=Parity.EVEN)
    assert not np.any(p.amplitudes)
    assert normalization(p) == 0.0


def test_asymmetric_grid_supported():
    grid = LambdaGrid(-1.0, 3.0, 101)
    p = posmogram(M00, grid)
    direct = amplitude(M00, Parity.EVEN, grid.values()[3])
    assert_allclose(p.amplitudes[3], direct, rtol=1e-13)


def test_thread_cap_does_not_change_results(monkeypatch):
    grid = LambdaGrid(-6.0, 6.0, 601)
    monkeypatch.setenv("POSMOGRAM_THREADS", "1")
    serial = posmogram(ModeIndex(3, 1), grid).amplitudes
    monkeypatch.setenv("POSMOGRAM_THREADS", "4")
    pooled = posmogram(ModeIndex(3, 1), grid).amplitudes
    assert np.array_equal(serial, pooled)


# ---------------------------------------------------------------------------
# normalization / nodes
# ---------------------------------------------------------------------------

def test_normalization_ground_mode():
    p = posmogram(M00, LambdaGrid(-10.0, 10.0, 2001))
    assert abs(normalization(p) - 1.0) < 1e-6


def test_normalization_warns_on_narrow_grid():
    p = posmogram(ModeIndex(2, 0), LambdaGrid(-4.0, 4.0, 401))
    with pytest.warns(UserWarning, match="grid too narrow"):
        normalization(p)


def test_count_nodes_ground_mode():
    p = posmogram(M00, LambdaGrid(-8.0, 8.0, 1601))
    assert count_nodes(p) == 0


def test_count_nodes_warns_on_coarse_grid():
    p = posmogram(M00, LambdaGrid(-8.0, 8.0, 161))
    with pytest.warns(UserWarning, match="under-resolve"):
        count_nodes(p)


def test_count_nodes_warns_on_plateau():
    grid = LambdaGrid(-1.0, 1.0, 5)
    d = np.array([1.0, 0.0, 0.0, 0.0, 1.0])
    p = Posmogram(M00, Parity.EVEN, grid, np.sqrt(d).astype(complex), d)
    with pytest.warns(UserWarning) as record:  # coarse-spacing warning also fires
        count_nodes(p)
    assert any("plateau" in str(w.message) for w in record)


# ---------------------------------------------------------------------------
# grids / configs
# ---------------------------------------------------------------------------

def test_lambda_grid_antisymmetric_values():
    for count in (7, 8):
        v = LambdaGrid(-3.0, 3.0, count).values()
        assert np.array_equal(v, -v[::-1])
        steps = np.diff(v)
        assert_allclose(steps, steps[0], rtol=1e-12)


def test_lambda_grid_validation():
    with pytest.raises(DomainError):
        LambdaGrid(2.0, 1.0, 10)
    with pytest.raises(DomainError):
        LambdaGrid(0.0, 1.0, 1)


def test_quadrature_config_validation():
    with pytest.raises(DomainError):
        QuadratureConfig(u_max=10.0)
    with pytest.raises(DomainError):
        QuadratureConfig(panel_order=4)
    with pytest.raises(DomainError):
        QuadratureConfig(rel_tol=0.0)


def test_mode_index_validation():
    with pytest.raises(DomainError):
        ModeIndex(-1, 0)
    with pytest.raises(DomainError):
        ModeIndex(2, 3)


# ---------------------------------------------------------------------------
# expansion of general states
# ---------------------------------------------------------------------------

def test_expand_reproduces_harmonic_amplitudes():
    lams = np.linspace(-4.0, 4.0, 33)
    via_expand = expand_state_grid(spherical_harmonic(0, 0), 0, Parity.EVEN, lams)
    via_mode = amplitude_grid(M00, Parity.EVEN, lams)
    assert np.max(np.abs(via_expand - via_mode)) < 1e-8


def test_expand_orthogonal_m_projects_to_zero():
    psi = spherical_harmonic(3, 2)
    for m in (0, 1, -2):
        c = expand_state(psi, m, Parity.ODD, 0.7)
        assert abs(c) < 1e-12


def test_expand_parseval_two_mode_state():
    s = 1.0 / math.sqrt(2.0)
    psi = superposition([(0, 0, s), (1, 0, s)])
    grid = LambdaGrid(-10.0, 10.0, 1001)
    lams = grid.values()
    total = 0.0
    for parity in (Parity.EVEN, Parity.ODD):
        c = expand_state_grid(psi, 0, parity, lams)
        total += np.trapezoid(np.abs(c) ** 2, dx=grid.spacing)
    assert abs(total - 1.0) < 1e-5


def test_expand_single_coefficient_matches_grid():
    psi = spherical_harmonic(1, 1)
    one = expand_state(psi, 1, Parity.EVEN, 0.9)
    row = expand_state_grid(psi, 1, Parity.EVEN, [0.9])
    assert one == complex(row[0])


# ---------------------------------------------------------------------------
# reconstruction
# ---------------------------------------------------------------------------

def test_reconstruct_zero_coefficients():
    grid = LambdaGrid(-5.0, 5.0, 101)
    coeffs = {(0, Parity.EVEN): (grid, np.zeros(101, dtype=complex))}
    assert reconstruct_state(coeffs, AngularPoint(1.0, 0.5)) == 0.0


def test_reconstruct_even_state_is_even():
    grid = LambdaGrid(-10.0, 10.0, 2001)
    c = amplitude_grid(M00, Parity.EVEN, grid.values())
    coeffs = {(0, Parity.EVEN): (grid, c)}
    north = reconstruct_state(coeffs, AngularPoint(0.8, 0.0))
    south = reconstruct_state(coeffs, AngularPoint(math.pi - 0.8, 0.0))
    assert_allclose(north, south, rtol=1e-10)


def test_reconstruct_round_trip_ground_state():
    grid = LambdaGrid(-10.0, 10.0, 2001)
    c = amplitude_grid(M00, Parity.EVEN, grid.values())
    coeffs = {(0, Parity.EVEN): (grid, c)}
    want = 1.0 / math.sqrt(4.0 * math.pi)
    for theta in (0.5, 1.2, 2.3):
        got = reconstruct_state(coeffs, AngularPoint(theta, 1.0))
        assert_allclose(got, want, rtol=1e-5)


def test_reconstruct_warns_on_truncated_coefficients():
    grid = LambdaGrid(-2.0, 2.0, 41)
    c = amplitude_grid(M00, Parity.EVEN, grid.values())
    coeffs = {(0, Parity.EVEN): (grid, c)}
    with pytest.warns(UserWarning, match="truncated"):
        reconstruct_state(coeffs, AngularPoint(1.0, 0.0))


def test_superposition_requires_terms():
    with pytest.raises(DomainError):
        superposition([])

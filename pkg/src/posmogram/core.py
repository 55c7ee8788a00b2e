"""Posmom distributions of states on the sphere.

The amplitude I_lm^{+/-}(lambda_z) of a spherical harmonic in the Q_z
eigenbasis reduces, after the substitution u = ln(tan(theta)), to a plain
Fourier transform on the real line:

    I_lm^{+/-}(lam) = [1 +/- (-1)^(l+m)] *
        integral  e^{i lam u} (2 pi)^(-1/2) W_lm(u) du,

    W_lm(u) = (N_lm / sqrt(2)) P_l^m(1 / sqrt(1 + e^{2u}))
              * e^u (1 + e^{2u})^(-3/4).

W_lm decays at least as exp(-|u|/2), so the line is truncated at
config.u_max and covered with fixed Gauss-Legendre panels whose width
shrinks with the largest |lambda| requested; every result is checked
against a half-width repeat of the same rule.  The same machinery expands
arbitrary smooth states (expand_state) and synthesizes them back
(reconstruct_state).

Everything is deterministic: fixed panels, fixed node order, and symmetric
lambda grids evaluated on the nonnegative half and mirrored through
I(-lam) = conj(I(lam)) (the weight is real), which makes densities exactly
even.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import numpy as np

from .errors import DomainError, QuadratureError
from .modes import (DEFAULT_CONFIG, DEFAULT_GRID, LambdaGrid, ModeIndex,
                    Parity, Posmogram, QuadratureConfig)
from .specfun import SQRT2PI, assoc_legendre, norm_const
from .sphere_ops import EPS_EQUATOR, EPS_POLE, AngularPoint

_SQRT1_2 = 1.0 / math.sqrt(2.0)
_AZIMUTHAL_SAMPLES = 128
_LAMBDA_BLOCK = 256


def _softplus2(u):
    """log(1 + exp(2u)) without overflow."""
    return np.logaddexp(0.0, 2.0 * u)


def _kernel(u):
    """e^u (1 + e^{2u})^(-3/4), stable over the whole line."""
    return np.exp(u - 0.75 * _softplus2(u))


def _x_of_u(u):
    """cos(theta(u)) = 1 / sqrt(1 + e^{2u})."""
    return np.exp(-0.5 * _softplus2(u))


def weight_function(mode: ModeIndex, u):
    """Real u-space weight W_lm(u) whose Fourier transform is the amplitude.

    The parity prefactor [1 +/- (-1)^(l+m)] is *not* included here; the
    amplitude applies it.  Decays as exp(-u/2) for u -> +inf and at least
    as exp(u) for u -> -inf, so values beyond |u| ~ 700 are exactly 0 in
    double precision.
    """
    u = np.asarray(u, dtype=float)
    out = (norm_const(mode.l, mode.m) * _SQRT1_2) * assoc_legendre(mode.l, mode.m, _x_of_u(u)) * _kernel(u)
    if out.ndim == 0:
        return float(out)
    return out


class _PanelRule:
    """Gauss-Legendre nodes/weights covering [-u_max, u_max] in uniform panels.

    Keeps the panel structure (midpoints + in-panel offsets) alongside the
    flat node/weight arrays: the Fourier factor e^{i lam u} splits into
    e^{i lam mid_p} * e^{i lam off_g}, which cuts the transcendental count
    by the panel order.
    """

    __slots__ = ("u", "w", "mid", "offs")

    def __init__(self, u_max, width, order):
        n_panels = int(math.ceil(2.0 * u_max / width))
        edges = np.linspace(-u_max, u_max, n_panels + 1)
        xg, wg = np.polynomial.legendre.leggauss(order)
        half = u_max / n_panels
        self.mid = 0.5 * (edges[:-1] + edges[1:])
        self.offs = half * xg
        self.u = (self.mid[:, None] + self.offs[None, :]).ravel()
        self.w = np.tile(half * wg, n_panels)
        for arr in (self.u, self.w, self.mid, self.offs):
            arr.setflags(write=False)


@lru_cache(maxsize=32)
def _panel_rule(u_max: float, width: float, order: int) -> _PanelRule:
    return _PanelRule(u_max, width, order)


def _thread_cap() -> int:
    try:
        n = int(os.environ.get("POSMOGRAM_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def _fourier_sum(lams: np.ndarray, rule: _PanelRule, f: np.ndarray) -> np.ndarray:
    """sum_j f_j e^{i lam u_j} for every lam, using the panel factorization
    e^{i lam u} = e^{i lam mid} e^{i lam off}; blocked to bound memory."""
    out = np.empty(lams.size, dtype=complex)
    per_panel = f.reshape(rule.mid.size, rule.offs.size)
    blocks = range(0, lams.size, _LAMBDA_BLOCK)

    def run(start):
        lb = lams[start:start + _LAMBDA_BLOCK]
        inner = per_panel @ np.exp(1j * np.outer(rule.offs, lb))
        phases = np.exp(1j * np.outer(rule.mid, lb))
        out[start:start + _LAMBDA_BLOCK] = np.einsum("pb,pb->b", phases, inner)

    cap = _thread_cap()
    if cap > 1 and lams.size > _LAMBDA_BLOCK:
        with ThreadPoolExecutor(max_workers=cap) as pool:
            list(pool.map(run, blocks))
    else:
        for start in blocks:
            run(start)
    return out


def _parity_prefactor(mode: ModeIndex, parity: Parity) -> int:
    return 1 + parity.sign * (-1) ** (mode.l + mode.m)


def _weight_values(mode: ModeIndex, parity: Parity, u: np.ndarray, force: bool) -> np.ndarray:
    """Quadrature-ready weight samples, including the parity structure.

    With force=True the bracket P(x) + sign * P(-x) is evaluated literally
    instead of being reduced through the parity relation, which is the
    honest way to watch the selection rule emerge from cancellation.
    """
    x = _x_of_u(u)
    pre = norm_const(mode.l, mode.m) * _SQRT1_2
    if force:
        bracket = assoc_legendre(mode.l, mode.m, x) + parity.sign * assoc_legendre(mode.l, mode.m, -x)
        return pre * bracket * _kernel(u)
    return _parity_prefactor(mode, parity) * pre * assoc_legendre(mode.l, mode.m, x) * _kernel(u)


def amplitude_grid(mode: ModeIndex, parity: Parity, lams, config: QuadratureConfig = DEFAULT_CONFIG,
                   force_integrate: bool = False, check: bool = True) -> np.ndarray:
    """I_lm^{parity}(lam) for an array of lambda values.

    Panels are sized for the largest |lam| requested and shared by all of
    them (finer panels are only more accurate for the smaller ones).  When
    check is set, the integral is repeated with half-width panels; the
    returned values come from the finer rule and a QuadratureError is
    raised if the two rules disagree beyond config tolerances.
    """
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    if not np.all(np.isfinite(lams)):
        raise DomainError("lambda values must be finite")
    if not force_integrate and _parity_prefactor(mode, parity) == 0:
        return np.zeros(lams.shape, dtype=complex)

    lam_max = float(np.max(np.abs(lams))) if lams.size else 0.0
    width = config.panel_width(lam_max)

    def integrate(w_panel):
        rule = _panel_rule(config.u_max, w_panel, config.panel_order)
        f = rule.w * _weight_values(mode, parity, rule.u, force_integrate) / SQRT2PI
        return _fourier_sum(lams, rule, f)

    fine = integrate(0.5 * width if check else width)
    if check:
        coarse = integrate(width)
        scale = max(float(np.max(np.abs(fine))), 1.0)
        achieved = float(np.max(np.abs(fine - coarse)))
        if achieved > max(config.abs_tol, config.rel_tol * scale):
            raise QuadratureError(
                f"oscillatory quadrature for mode (l={mode.l}, m={mode.m}) did not converge",
                achieved=achieved,
                target=max(config.abs_tol, config.rel_tol * scale),
            )
    return fine


def amplitude(mode: ModeIndex, parity: Parity, lambda_z: float,
              config: QuadratureConfig = DEFAULT_CONFIG, force_integrate: bool = False) -> complex:
    """Single amplitude I_lm^{parity}(lambda_z).

    Returns an exact 0 (no integration) when the parity prefactor
    [1 +/- (-1)^(l+m)] vanishes, unless force_integrate is set.
    """
    return complex(amplitude_grid(mode, parity, [lambda_z], config, force_integrate)[0])


def posmogram(mode: ModeIndex, grid: LambdaGrid = DEFAULT_GRID,
              config: QuadratureConfig = DEFAULT_CONFIG, parity: Parity | None = None) -> Posmogram:
    """Compute the posmom distribution of Y_lm over a lambda grid.

    The physical parity sector (sign (-1)^(l+m)) is selected automatically;
    the vanishing sector is never integrated.  Passing parity explicitly
    overrides the selection (the unphysical sector then short-circuits to
    exact zeros).  On symmetric grids only lam >= 0 is integrated and the
    rest filled by conjugation, so the density is even by construction.
    """
    if parity is None:
        parity = mode.physical_parity
    lams = grid.values()
    if grid.is_symmetric:
        half = (grid.count + 1) // 2
        upper = amplitude_grid(mode, parity, lams[grid.count - half:], config)
        amps = np.concatenate([np.conj(upper[:0:-1]), upper]) if grid.count % 2 else \
            np.concatenate([np.conj(upper[::-1]), upper])
    else:
        amps = amplitude_grid(mode, parity, lams, config)
    density = np.abs(amps) ** 2
    amps.setflags(write=False)
    density.setflags(write=False)
    return Posmogram(mode=mode, parity=parity, grid=grid, amplitudes=amps,
                     density=density, config=config)


def _simpson_uniform(y: np.ndarray, dx: float) -> float:
    n = y.size
    if n % 2 == 1:
        return float((y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-2:2].sum()) * dx / 3.0)
    raise ValueError("Simpson rule needs an odd point count")


def normalization(p: Posmogram) -> float:
    """Integral of the density over the grid (Simpson for odd counts,
    trapezoid otherwise).  Warns when the boundary density exceeds
    config.abs_tol, i.e. the grid is too narrow to hold the distribution."""
    boundary = max(float(p.density[0]), float(p.density[-1]))
    if boundary > p.config.abs_tol:
        warnings.warn(
            f"boundary density {boundary:.3e} exceeds abs_tol {p.config.abs_tol:.0e}; "
            "grid too narrow for an accurate normalization",
            stacklevel=2,
        )
    if p.grid.count % 2 == 1:
        return _simpson_uniform(p.density, p.grid.spacing)
    return float(np.trapezoid(p.density, dx=p.grid.spacing))


def count_nodes(p: Posmogram, rel_threshold: float = 1e-4) -> int:
    """Number of nodes of the density over the full lambda axis.

    A node is an interior strict local minimum whose value lies below
    rel_threshold times the density peak.  Warns when the grid is coarser
    than 0.02 or when a candidate minimum sits on a flat plateau (the
    adjacent-sample curvature test is then ambiguous).
    """
    if p.grid.spacing > 0.02 * (1.0 + 1e-9):
        warnings.warn(f"grid spacing {p.grid.spacing:.3g} > 0.02 may under-resolve nodes", stacklevel=2)
    d = p.density
    peak = float(d.max())
    if peak == 0.0:
        return 0
    thr = rel_threshold * peak
    k = np.arange(1, d.size - 1)
    deep = d[k] < thr
    strict = (d[k] < d[k - 1]) & (d[k] < d[k + 1])
    flat = ((d[k] == d[k - 1]) | (d[k] == d[k + 1])) & deep & ~strict
    if np.any(flat):
        warnings.warn("flat plateau at a below-threshold minimum; node count may be ambiguous", stacklevel=2)
    return int(np.count_nonzero(strict & deep))


# ---------------------------------------------------------------------------
# General states: spherical-harmonic fields, expansion and reconstruction
# ---------------------------------------------------------------------------

def spherical_harmonic(l: int, m: int):
    """Field callable for Y_lm(theta, phi); accepts scalars or broadcastable arrays."""
    mode = ModeIndex(l, m)  # validates

    def field(theta, phi):
        th = np.asarray(theta, dtype=float)
        ph = np.asarray(phi, dtype=float)
        out = norm_const(mode.l, mode.m) * assoc_legendre(mode.l, mode.m, np.cos(th)) \
            * np.exp(1j * mode.m * ph) / SQRT2PI
        if out.ndim == 0:
            return complex(out)
        return out

    return field


def superposition(terms):
    """Field callable sum_k c_k Y_{l_k m_k} from (l, m, coefficient) triples."""
    terms = [(int(l), int(m), complex(c)) for (l, m, c) in terms]
    if not terms:
        raise DomainError("superposition needs at least one (l, m, coefficient) term")
    fields = [(c, spherical_harmonic(l, m)) for (l, m, c) in terms]

    def field(theta, phi):
        return sum(c * f(theta, phi) for c, f in fields)

    return field


def _azimuthal_projection(psi, m: int, thetas: np.ndarray) -> np.ndarray:
    """g_m(theta) = (2 pi)^(-1/2) integral e^{-i m phi} psi(theta, phi) dphi
    by the trapezoid rule on a uniform phi grid (spectrally accurate for
    smooth 2 pi-periodic states)."""
    K = _AZIMUTHAL_SAMPLES
    if abs(m) >= K // 2:
        raise DomainError(f"|m| = {abs(m)} beyond the azimuthal resolution ({K} samples)")
    phis = 2.0 * math.pi * np.arange(K) / K
    phase = np.exp(-1j * m * phis)
    out = np.empty(thetas.size, dtype=complex)
    block = 4096
    for i in range(0, thetas.size, block):
        tb = thetas[i:i + block]
        vals = np.asarray(psi(tb[:, None], phis[None, :]), dtype=complex)
        out[i:i + block] = vals @ phase
    return out * (SQRT2PI / K)


def expand_state_grid(psi, m: int, parity: Parity, lams,
                      config: QuadratureConfig = DEFAULT_CONFIG, check: bool = True) -> np.ndarray:
    """Expansion coefficients c_m^{parity}(lam) of a smooth state for an array of lam.

    The theta integral is taken through u = ln(tan(theta)), which absorbs
    the eigenfunction singularities at the equator and poles; the azimuthal
    projection is done first.  Direct theta quadrature is deliberately not
    offered.
    """
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    lam_max = float(np.max(np.abs(lams))) if lams.size else 0.0
    width = config.panel_width(lam_max)

    def integrate(w_panel):
        rule = _panel_rule(config.u_max, w_panel, config.panel_order)
        theta = np.arctan(np.exp(rule.u))
        g_north = _azimuthal_projection(psi, m, theta)
        g_south = _azimuthal_projection(psi, m, math.pi - theta)
        f = rule.w * (g_north + parity.sign * g_south) * _kernel(rule.u) * (_SQRT1_2 / SQRT2PI)
        return _fourier_sum(lams, rule, f)

    fine = integrate(0.5 * width if check else width)
    if check:
        coarse = integrate(width)
        scale = max(float(np.max(np.abs(fine))), 1.0)
        achieved = float(np.max(np.abs(fine - coarse)))
        if achieved > max(config.abs_tol, config.rel_tol * scale):
            raise QuadratureError("state expansion quadrature did not converge",
                                  achieved=achieved,
                                  target=max(config.abs_tol, config.rel_tol * scale))
    return fine


def expand_state(psi, m: int, parity: Parity, lambda_z: float,
                 config: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """Single expansion coefficient c_m^{parity}(lambda_z) of a smooth state."""
    return complex(expand_state_grid(psi, m, parity, [lambda_z], config)[0])


def reconstruct_state(coeffs, point: AngularPoint) -> complex:
    """Synthesize a state at a point from expansion coefficients.

    coeffs maps (m, parity) to a pair (LambdaGrid, coefficient array); the
    lambda integral is a trapezoid sum over each grid.  Warns when a
    coefficient set has not decayed at its grid boundary (lambda
    truncation).
    """
    th = point.theta
    if th < EPS_POLE or th > math.pi - EPS_POLE or abs(th - math.pi / 2.0) < EPS_EQUATOR:
        raise DomainError(f"theta = {th} is on a singular locus of the eigenbasis")
    north = th < math.pi / 2.0
    th_eff = th if north else math.pi - th
    u = math.log(math.tan(th_eff))
    base = _SQRT1_2 / (math.sin(th_eff) * math.sqrt(math.cos(th_eff)) * SQRT2PI)

    total = 0.0 + 0.0j
    for (m, parity), (grid, c) in coeffs.items():
        c = np.asarray(c, dtype=complex)
        if c.size != grid.count:
            raise DomainError("coefficient array length must equal grid.count")
        cmax = float(np.max(np.abs(c))) if c.size else 0.0
        # all-noise sectors (e.g. the dead parity of a pure harmonic) are exempt
        if cmax > 1e-13 and max(abs(c[0]), abs(c[-1])) > 1e-3 * cmax:
            warnings.warn(f"coefficients for (m={m}, {parity.symbol}) not decayed at the "
                          "grid boundary; reconstruction is lambda-truncated", stacklevel=2)
        lams = grid.values()
        sector = base if north else parity.sign * base
        vals = sector * np.exp(-1j * lams * u)
        total += np.trapezoid(c * vals, dx=grid.spacing) * np.exp(1j * m * point.phi) / SQRT2PI
    return complex(total)

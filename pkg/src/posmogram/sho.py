"""Comparison of posmom densities against 1-D oscillator momentum densities.

The relative momentum scale between the two families is fixed nowhere, so
it is fitted by second-moment matching: the oscillator density is stretched
so that its variance equals the posmogram's.  That convention is
parameter-free and reproducible; closeness numbers quoted by compare()
always refer to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import normalization
from .errors import DomainError
from .modes import ModeIndex, Posmogram
from .specfun import sho_momentum_density


@dataclass(frozen=True)
class ComparisonReport:
    mode: ModeIndex
    sho_level: int
    scale: float
    linf_diff: float
    l1_diff: float
    variance_posmom: float
    variance_sho: float
    peak_density: float
    matched_antinodes: bool


def count_antinodes(density) -> int:
    """Strict interior local maxima of a sampled density."""
    d = np.asarray(density, dtype=float)
    k = np.arange(1, d.size - 1)
    return int(np.count_nonzero((d[k] > d[k - 1]) & (d[k] > d[k + 1])))


def variance(p: Posmogram) -> float:
    """Second moment of the (normalized) density over its grid."""
    lams = p.lambdas()
    norm = float(np.trapezoid(p.density, dx=p.grid.spacing))
    if norm <= 0.0:
        raise DomainError("cannot take the variance of a zero density")
    return float(np.trapezoid(lams * lams * p.density, dx=p.grid.spacing)) / norm


def fit_scale(p: Posmogram, n: int) -> float:
    """Stretch factor s such that s |phi_n(s lam)|^2 has the posmogram's variance.

    The rescaled oscillator density keeps unit norm for any s; its variance
    is (n + 1/2) / s^2, so s = sqrt((n + 1/2) / var(posmogram)).  Requires
    the posmogram to be normalized to 1 within 1e-4 on its grid.
    """
    if n < 0:
        raise DomainError(f"oscillator level must be >= 0, got {n}")
    norm = normalization(p)
    if abs(norm - 1.0) > 1e-4:
        raise DomainError(f"posmogram normalization {norm:.6f} is not 1 within 1e-4; "
                          "widen the grid before fitting")
    var = variance(p)
    if not math.isfinite(var) or var <= 0.0:
        raise DomainError(f"posmogram variance {var!r} unusable for scale fitting")
    return math.sqrt((n + 0.5) / var)


def rescaled_sho_density(n: int, scale: float, lams) -> np.ndarray:
    """s |phi_n(s lam)|^2 sampled on the given lambda values."""
    lams = np.asarray(lams, dtype=float)
    return scale * sho_momentum_density(n, scale * lams)


def compare(p: Posmogram, n: int) -> ComparisonReport:
    """Variance-matched comparison of a posmogram against oscillator level n.

    Reports the L-infinity and L1 distances on the posmogram grid, the two
    variances computed by the same grid quadrature, and whether the two
    densities have the same number of antinodes.
    """
    s = fit_scale(p, n)
    lams = p.lambdas()
    sho = rescaled_sho_density(n, s, lams)
    diff = p.density - sho
    var_sho = float(np.trapezoid(lams * lams * sho, dx=p.grid.spacing)) \
        / float(np.trapezoid(sho, dx=p.grid.spacing))
    return ComparisonReport(
        mode=p.mode,
        sho_level=n,
        scale=s,
        linf_diff=float(np.max(np.abs(diff))),
        l1_diff=float(np.trapezoid(np.abs(diff), dx=p.grid.spacing)),
        variance_posmom=variance(p),
        variance_sho=var_sho,
        peak_density=float(p.density.max()),
        matched_antinodes=count_antinodes(p.density) == count_antinodes(sho),
    )

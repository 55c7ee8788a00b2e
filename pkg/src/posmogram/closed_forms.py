"""Analytic amplitudes for the six lowest modes, as an independent check.

Each expression combines Gauss hypergeometric values at argument -1,
incomplete Beta functions of rank -1 and gamma-function prefactors, and is
transcribed term by term from its source.  One transcription issue is
known: the (2,1) expression is printed with the real denominator
(2 lam + 3) where every analogous prefactor is complex.  Numerically only
the reading (2 lam + 3i) agrees with the quadrature route (the printed
real denominator is off by O(1) everywhere), so that reading is the
default here; set printed_eq_denominator=True to evaluate the literal
printed form.  crossvalidate() records which reading was used.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .modes import LambdaGrid, ModeIndex, QuadratureConfig, DEFAULT_CONFIG
from .specfun import complex_gamma, hyp2f1_at_neg1, incomplete_beta_rank_neg1

SQRT2PI = math.sqrt(2.0 * math.pi)

CLOSED_FORM_MODES = (
    ModeIndex(0, 0), ModeIndex(1, 0), ModeIndex(1, 1),
    ModeIndex(2, 0), ModeIndex(2, 1), ModeIndex(2, 2),
)

_F = hyp2f1_at_neg1
_B = incomplete_beta_rank_neg1


def _i00(lam: float) -> complex:
    return (1.0 / SQRT2PI) * (
        2j / (2 * lam + 1j) * _F(0.75, (1 - 2j * lam) / 4, (5 - 2j * lam) / 4)
        - 1j / (lam - 1j) * _F(0.75, (1j * lam + 1) / 2, (1j * lam + 3) / 2)
    )


def _i10(lam: float) -> complex:
    pre = 1.0 / (4 * lam ** 2 + 2j * lam + 6) * math.sqrt(3.0 / (2.0 * math.pi))
    return pre * (
        -(8 * lam ** 2 + 2j * lam + 15) * _F(0.25, (1j * lam + 1) / 2, (1j * lam + 3) / 2)
        + (15 + 4 * lam * (lam - 1j)) * _F(-0.75, (1j * lam + 1) / 2, (1j * lam + 3) / 2)
        + 4 * (3 + lam * (lam + 2j)) * _F(-0.75, (3 - 2j * lam) / 4, (7 - 2j * lam) / 4)
        - 2 * (7 + lam * (4 * lam + 3j)) * _F(0.25, (3 - 2j * lam) / 4, (7 - 2j * lam) / 4)
    )


def _i11(lam: float) -> complex:
    pre = 0.125 * math.sqrt(3.0 / math.pi)
    epl = cmath.exp(math.pi * lam / 2.0)
    return pre * (
        4 * (4 * lam + 3j) / (2 * lam + 1j) * _F(0.25, (1 - 2j * lam) / 4, (5 - 2j * lam) / 4)
        - 8 * (lam + 2j) / (2 * lam + 1j) * _F(-0.75, (1 - 2j * lam) / 4, (5 - 2j * lam) / 4)
        - epl * (9 + 4j * lam) * _B(1j * lam / 2 + 1, 0.75)
        + epl * (7 + 2j * lam) * _B(1j * lam / 2 + 1, 1.75)
    )


def _i20(lam: float) -> complex:
    pre = -(1.0 / 24.0) * math.sqrt(5.0 / (2.0 * math.pi))
    gamma_ratio = complex_gamma(0.25 - 0.5j * lam) / complex_gamma((5 - 2j * lam) / 4)
    return pre * (
        6 * (-2 * lam + 3j) / (lam - 1j) * _F(-0.25, (1j * lam + 1) / 2, (1j * lam + 3) / 2)
        + 6 * (4 * lam - 1j) / (lam - 1j) * _F(0.75, (1j * lam + 1) / 2, (1j * lam + 3) / 2)
        + gamma_ratio * 6 * (1 - 1j * lam) * _F(-0.25, (1 - 2j * lam) / 4, (5 - 2j * lam) / 4)
        + gamma_ratio * 3 * (-1 + 4j * lam) * _F(0.75, (1 - 2j * lam) / 4, (5 - 2j * lam) / 4)
    )


def _i21(lam: float, printed_denominator: bool = False) -> complex:
    denom = (2 * lam + 3) if printed_denominator else (2 * lam + 3j)
    if denom == 0:
        raise DomainError("(2,1) printed-form prefactor vanishes at lambda = -3/2")
    pre = 0.125 * math.sqrt(5.0 / (3.0 * math.pi))
    epl = cmath.exp(math.pi * lam / 2.0)
    return pre * (
        4 * (4 * lam + 1j) / denom * _F(0.75, (3 - 2j * lam) / 4, (7 - 2j * lam) / 4)
        - 8 * (lam + 2j) / denom * _F(-0.25, (3 - 2j * lam) / 4, (7 - 2j * lam) / 4)
        - epl * (3 + 4j * lam) * _B(1j * lam / 2 + 1, 0.25)
        + epl * (5 + 2j * lam) * _B(1j * lam / 2 + 1, 1.25)
    )


def _i22(lam: float) -> complex:
    pre = 1.0 / (8 * (3 + lam * (2 * lam - 5j))) * math.sqrt(5.0 / (3.0 * math.pi))
    return pre * (
        (7 + 4 * lam * (lam - 3j)) * _F(-0.25, (1j * lam + 3) / 2, (1j * lam + 5) / 2)
        + 4 * (3 + lam * (lam - 2j)) * _F(-0.25, (1 - 2j * lam) / 4, (5 - 2j * lam) / 4)
        + (-7 + 2 * (-4 * lam + 5j) * lam) * _F(0.75, (1j * lam + 3) / 2, (1j * lam + 5) / 2)
        + 2 * (9 + (-4 * lam + 15j) * lam) * _F(0.75, (1 - 2j * lam) / 4, (5 - 2j * lam) / 4)
    )


def closed_form_amplitude(mode: ModeIndex, lambda_z: float,
                          printed_eq_denominator: bool = False) -> complex:
    """Analytic I_lm(lambda_z) for the six modes that have closed forms.

    printed_eq_denominator switches the (2,1) prefactor back to the literal
    printed real denominator (see module docstring); it has no effect on
    the other modes.
    """
    lam = float(lambda_z)
    key = (mode.l, mode.m)
    if key == (0, 0):
        return _i00(lam)
    if key == (1, 0):
        return _i10(lam)
    if key == (1, 1):
        return _i11(lam)
    if key == (2, 0):
        return _i20(lam)
    if key == (2, 1):
        return _i21(lam, printed_eq_denominator)
    if key == (2, 2):
        return _i22(lam)
    raise DomainError(f"no closed form for mode (l={mode.l}, m={mode.m}); "
                      f"available: {[(m.l, m.m) for m in CLOSED_FORM_MODES]}")


@dataclass(frozen=True)
class CrossValidationReport:
    mode: ModeIndex
    grid: LambdaGrid
    tol: float
    max_rel_deviation: float
    passed: bool
    notes: tuple = field(default_factory=tuple)


def crossvalidate(mode: ModeIndex, grid: LambdaGrid, tol: float = 1e-7,
                  config: QuadratureConfig = DEFAULT_CONFIG) -> CrossValidationReport:
    """Compare the closed form against the quadrature amplitude over a grid.

    The deviation is measured relative to the largest quadrature amplitude
    on the grid (the amplitudes have exact zeros, e.g. (2,0) at lambda = 0,
    where a pointwise ratio would be meaningless).
    """
    from .core import amplitude_grid  # local import to keep module load order simple

    lams = grid.values()
    quad = amplitude_grid(mode, mode.physical_parity, lams, config)
    closed = np.array([closed_form_amplitude(mode, lam) for lam in lams])
    scale = float(np.max(np.abs(quad)))
    dev = float(np.max(np.abs(quad - closed))) / scale
    notes = []
    if (mode.l, mode.m) == (2, 1):
        regular = np.abs(2.0 * lams + 3.0) > 1e-9  # printed form has a real pole at -3/2
        printed = np.array([closed_form_amplitude(mode, lam, printed_eq_denominator=True)
                            for lam in lams[regular]])
        dev_printed = float(np.max(np.abs(quad[regular] - printed))) / scale
        notes.append(
            "(2,1) prefactor denominator read as (2 lam + 3i): rel deviation "
            f"{dev:.3e}; the printed real denominator (2 lam + 3) deviates by {dev_printed:.3e} "
            "and has a pole at lam = -3/2"
        )
    return CrossValidationReport(mode=mode, grid=grid, tol=tol,
                                 max_rel_deviation=dev, passed=dev < tol,
                                 notes=tuple(notes))

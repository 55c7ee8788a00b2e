"""Stencil realizations of the geometric momentum, Q_z and L_z on the sphere,
plus the Q_z parity eigenfunctions and the simultaneous (Q_x, Q_y, Q_z)
eigenfunctions.

A scalar field is any callable f(theta, phi) -> complex that is smooth on
the open sphere (poles excluded) and 2*pi-periodic in phi.  Field callables
must be safe for concurrent invocation; every operator here is pure.

Conventions: hbar = 1, unit radius.  Derivatives are central differences of
second order in the step; passing richardson=True combines steps h and h/2
for fourth order.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError, ensure_finite
from .modes import Parity
from .specfun import SQRT2PI

EPS_POLE = 1e-6
EPS_EQUATOR = 1e-6

_SQRT1_2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class AngularPoint:
    """A point (theta, phi) strictly inside the open sphere, phi in [0, 2pi)."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 < self.theta < math.pi):
            raise DomainError(f"theta must lie in (0, pi), got {self.theta}")
        object.__setattr__(self, "phi", self.phi % (2.0 * math.pi))


@dataclass(frozen=True)
class EigenfunctionSpec:
    """Label (lambda_z, parity) of a Q_z eigenfunction."""

    lambda_z: float
    parity: Parity


def psi_I(lambda_z: float, theta: float) -> complex:
    """Half-interval eigenfunction (2pi)^(-1/2) exp(-i lam ln tan(theta)) / (sin(theta) sqrt(cos(theta))),
    valid for theta in (0, pi/2)."""
    return cmath.exp(-1j * lambda_z * math.log(math.tan(theta))) / (
        math.sin(theta) * math.sqrt(math.cos(theta)) * SQRT2PI
    )


def psi_eigenfunction(spec: EigenfunctionSpec, theta: float) -> complex:
    """Parity eigenfunction Psi_lam^{+/-}(theta) on the full interval (0, pi).

    The even/odd combinations place the half-interval solution on each side
    of the equator: for theta < pi/2 the value is psi_I(theta)/sqrt(2), and
    for theta > pi/2 it is sign * psi_I(pi - theta)/sqrt(2).  Points within
    1e-6 of a pole or of the equator are rejected: the function is not
    pointwise normalizable there.
    """
    if theta < EPS_POLE or theta > math.pi - EPS_POLE:
        raise DomainError(f"theta = {theta} too close to a pole")
    if abs(theta - math.pi / 2.0) < EPS_EQUATOR:
        raise DomainError(f"theta = {theta} too close to the equator")
    if theta < math.pi / 2.0:
        return _SQRT1_2 * psi_I(spec.lambda_z, theta)
    return spec.parity.sign * _SQRT1_2 * psi_I(spec.lambda_z, math.pi - theta)


def _coordinate(component: str, theta: float, phi: float) -> float:
    if component == "x":
        return math.sin(theta) * math.cos(phi)
    if component == "y":
        return math.sin(theta) * math.sin(phi)
    if component == "z":
        return math.cos(theta)
    raise DomainError(f"component must be one of 'x', 'y', 'z', got {component!r}")


def _check_stencil_point(point: AngularPoint, step: float) -> None:
    if step <= 0.0:
        raise DomainError(f"step must be positive, got {step}")
    if point.theta < 2.0 * step or point.theta > math.pi - 2.0 * step:
        raise DomainError(f"theta = {point.theta} is within 2*step of a pole")


def _d_theta(field, theta, phi, h):
    return (field(theta + h, phi) - field(theta - h, phi)) / (2.0 * h)


def _d_phi(field, theta, phi, h):
    return (field(theta, phi + h) - field(theta, phi - h)) / (2.0 * h)


def _momentum_once(component, field, theta, phi, h):
    v = field(theta, phi)
    if component == "x":
        dth = _d_theta(field, theta, phi, h)
        dph = _d_phi(field, theta, phi, h)
        return -1j * (
            math.cos(theta) * math.cos(phi) * dth
            - math.sin(phi) / math.sin(theta) * dph
            - math.sin(theta) * math.cos(phi) * v
        )
    if component == "y":
        dth = _d_theta(field, theta, phi, h)
        dph = _d_phi(field, theta, phi, h)
        return -1j * (
            math.cos(theta) * math.sin(phi) * dth
            + math.cos(phi) / math.sin(theta) * dph
            - math.sin(theta) * math.sin(phi) * v
        )
    if component == "z":
        dth = _d_theta(field, theta, phi, h)
        return 1j * (math.sin(theta) * dth + math.cos(theta) * v)
    raise DomainError(f"component must be one of 'x', 'y', 'z', got {component!r}")


def _richardson(apply_once, step):
    coarse = apply_once(step)
    fine = apply_once(0.5 * step)
    return (4.0 * fine - coarse) / 3.0


def geometric_momentum_apply(component: str, field, point: AngularPoint,
                             step: float = 1e-4, richardson: bool = False) -> complex:
    """(p_i psi)(point) for the geometric momentum component i in {x, y, z}.

    The curvature terms (the non-derivative pieces proportional to the
    coordinate itself) are included exactly; only the angular derivatives
    are discretized.
    """
    _check_stencil_point(point, step)
    run = lambda h: _momentum_once(component, field, point.theta, point.phi, h)
    out = _richardson(run, step) if richardson else run(step)
    return ensure_finite(out, "geometric_momentum_apply")


def qz_apply(field, point: AngularPoint, step: float = 1e-4, richardson: bool = False) -> complex:
    """(Q_z psi)(point) = i (sin(theta) cos(theta) d_theta + (3/2) cos^2(theta) - 1/2) psi."""
    _check_stencil_point(point, step)

    def run(h):
        th, ph = point.theta, point.phi
        dth = _d_theta(field, th, ph, h)
        c = math.cos(th)
        return 1j * (math.sin(th) * c * dth + (1.5 * c * c - 0.5) * field(th, ph))

    out = _richardson(run, step) if richardson else run(step)
    return ensure_finite(out, "qz_apply")


def lz_apply(field, point: AngularPoint, step: float = 1e-4, richardson: bool = False) -> complex:
    """(L_z psi)(point) = -i d_phi psi by central difference."""
    _check_stencil_point(point, step)
    run = lambda h: -1j * _d_phi(field, point.theta, point.phi, h)
    out = _richardson(run, step) if richardson else run(step)
    return ensure_finite(out, "lz_apply")


def posmom_apply(component: str, field, point: AngularPoint, step: float = 1e-4) -> complex:
    """(Q_i psi)(point) through the symmetric product (x_i p_i + p_i x_i)/2.

    Built by composing the momentum stencil with multiplication by the
    coordinate, so it is an independent route to Q_z (and the only route to
    Q_x, Q_y) for operator-identity checks.
    """
    _check_stencil_point(point, step)

    def scaled(theta, phi):
        return _coordinate(component, theta, phi) * field(theta, phi)

    xi = _coordinate(component, point.theta, point.phi)
    out = 0.5 * (
        xi * geometric_momentum_apply(component, field, point, step)
        + geometric_momentum_apply(component, scaled, point, step)
    )
    return ensure_finite(out, "posmom_apply")


def qxyz_simultaneous_eigenfunction(a_x: float, a_y: float, point: AngularPoint) -> complex:
    """Simultaneous eigenfunction of (Q_x, Q_y, Q_z) with eigenvalues
    (a_x, a_y, -(a_x + a_y)):

        tan(theta)^{i(a_x+a_y)} cos(phi)^{i a_x} sin(phi)^{i a_y}
        / (sin(theta) sqrt(cos(theta)) sqrt(sin(2 phi)))

    All complex powers are taken on the principal branch.  Points too close
    to a pole, to the equator, or to phi in {0, pi/2, pi, 3pi/2} (where
    sqrt(sin 2 phi) vanishes) are rejected.
    """
    th, ph = point.theta, point.phi
    if th < EPS_POLE or th > math.pi - EPS_POLE or abs(th - math.pi / 2.0) < EPS_EQUATOR:
        raise DomainError(f"theta = {th} is on a singular locus")
    s2 = math.sin(2.0 * ph)
    if abs(s2) < EPS_EQUATOR:
        raise DomainError(f"phi = {ph} is on a singular locus (sin 2 phi = 0)")
    tan_pow = cmath.exp(1j * (a_x + a_y) * cmath.log(complex(math.tan(th))))
    cos_pow = cmath.exp(1j * a_x * cmath.log(complex(math.cos(ph))))
    sin_pow = cmath.exp(1j * a_y * cmath.log(complex(math.sin(ph))))
    denom = math.sin(th) * cmath.sqrt(complex(math.cos(th))) * cmath.sqrt(complex(s2))
    return ensure_finite(tan_pow * cos_pow * sin_pow / denom, "qxyz_simultaneous_eigenfunction")

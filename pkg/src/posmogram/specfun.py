"""Self-contained special-function kernel.

Provides associated Legendre polynomials (Condon-Shortley phase), the
gamma function of complex argument, the Gauss hypergeometric function at
argument -1 with complex parameters, the incomplete Beta function of rank
-1, and harmonic-oscillator momentum densities.  Everything here is a pure
function of its arguments and safe to call from multiple threads.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError, ensure_finite

SQRT2PI = math.sqrt(2.0 * math.pi)

# Lanczos approximation, g = 7, 9 coefficients.  Relative error stays below
# ~2e-13 on the validated strip Re z in [-20, 20], |Im z| <= 30.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _legendre_m_nonneg(l: int, m: int, x):
    """P_l^m for m >= 0 by upward recurrence in l from the diagonal seed.

    Vectorized over x.  Stable for l up to at least 100.
    """
    x = np.asarray(x, dtype=float)
    # (1-x^2)^(1/2) without cancellation at |x| near 1
    somx2 = np.sqrt(np.maximum(0.0, (1.0 - x) * (1.0 + x)))
    # P_m^m = (-1)^m (2m-1)!! (1-x^2)^(m/2)  -- Condon-Shortley phase included
    pmm = np.ones_like(x)
    for k in range(1, m + 1):
        pmm = pmm * (-(2.0 * k - 1.0)) * somx2
    if l == m:
        return pmm
    pm1 = x * (2.0 * m + 1.0) * pmm
    if l == m + 1:
        return pm1
    for ll in range(m + 2, l + 1):
        pmm, pm1 = pm1, (x * (2.0 * ll - 1.0) * pm1 - (ll + m - 1.0) * pmm) / (ll - m)
    return pm1


def assoc_legendre(l: int, m: int, x):
    """Associated Legendre polynomial P_l^m(x) with the Condon-Shortley phase.

    Negative m is reduced through P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m.
    Accepts a scalar or an ndarray for x; |x| <= 1 is required.
    """
    l = int(l)
    m = int(m)
    if l < 0 or abs(m) > l:
        raise DomainError(f"assoc_legendre needs l >= 0 and |m| <= l, got (l={l}, m={m})")
    xs = np.asarray(x, dtype=float)
    if np.any(np.abs(xs) > 1.0):
        raise DomainError("assoc_legendre argument must satisfy |x| <= 1")
    if m >= 0:
        out = _legendre_m_nonneg(l, m, xs)
    else:
        k = -m
        ratio = math.factorial(l - k) / math.factorial(l + k)
        out = ((-1.0) ** k) * ratio * _legendre_m_nonneg(l, k, xs)
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out)
    return out


def norm_const(l: int, m: int) -> float:
    """Spherical-harmonic normalization N_lm = sqrt((2l+1)/2 (l-m)!/(l+m)!)."""
    l = int(l)
    m = int(m)
    if l < 0 or abs(m) > l:
        raise DomainError(f"norm_const needs l >= 0 and |m| <= l, got (l={l}, m={m})")
    return math.sqrt((2 * l + 1) / 2.0 * math.factorial(l - m) / math.factorial(l + m))


def _gamma_right_half(z: complex) -> complex:
    z = z - 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return SQRT2PI * t ** (z + 0.5) * cmath.exp(-t) * acc


def complex_gamma(z) -> complex:
    """Gamma(z) for complex z via Lanczos (g = 7) plus reflection for Re z < 1/2.

    Raises PoleError at the non-positive integers.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == round(z.real):
        raise PoleError(f"gamma pole at z = {z.real:g}")
    if z.real < 0.5:
        s = cmath.sin(math.pi * z)
        if s == 0:
            raise PoleError(f"gamma pole at z = {z!r}")
        return ensure_finite(math.pi / (s * _gamma_right_half(1.0 - z)), "complex_gamma")
    return ensure_finite(_gamma_right_half(z), "complex_gamma")


def hyp2f1_at_neg1(a, b, c, rel_tol: float = 1e-14, max_terms: int = 512) -> complex:
    """Gauss hypergeometric F(a, b; c; -1) for complex parameters.

    The conditionally convergent defining series is transformed with
    Pfaff's identity F(a,b;c;-1) = 2^(-a) F(a, c-b; c; 1/2), whose series
    converges geometrically with ratio 1/2.  Requires Re(c - a - b) > 0
    (true for the closed-form evaluations this package generates) or a
    terminating series.
    """
    a = complex(a)
    b = complex(b)
    c = complex(c)
    if c.imag == 0.0 and c.real <= 0.0 and c.real == round(c.real):
        # allowed only if the numerator terminates first
        if not (a.imag == 0.0 and a.real <= 0.0 and a.real == round(a.real) and a.real > c.real):
            raise PoleError(f"hyp2f1 parameter c = {c!r} is a non-positive integer")
    d = c - b
    term = 1.0 + 0.0j
    total = term
    small_streak = 0
    for n in range(max_terms):
        term *= (a + n) * (d + n) / ((c + n) * (n + 1.0)) * 0.5
        total += term
        if abs(term) <= rel_tol * abs(total):
            small_streak += 1
            if small_streak >= 2:
                break
        else:
            small_streak = 0
    else:
        achieved = abs(term) / max(abs(total), 1e-300)
        raise ConvergenceError(
            f"hyp2f1_at_neg1 did not converge for (a={a}, b={b}, c={c})",
            achieved=achieved,
            target=rel_tol,
        )
    return ensure_finite(cmath.exp(-a * math.log(2.0)) * total, "hyp2f1_at_neg1")


def _euler_sum(terms) -> complex:
    """Sum of sum_n (-1)^n terms[n] by repeated averaging of partial sums.

    Standard Euler transformation for alternating series with smooth term
    sequences; contraction ~2^-k per averaging pass.
    """
    signed = np.asarray(terms, dtype=complex)
    signed[1::2] *= -1.0
    s = np.cumsum(signed)
    while s.size > 1:
        s = 0.5 * (s[:-1] + s[1:])
    return complex(s[0])


def incomplete_beta_rank_neg1(a, b, n_terms: int = 64) -> complex:
    """Incomplete Beta function of rank -1 on the principal branch.

    Evaluates B_z(a, b) = z^a sum_n z^n (1-b)_n / (n! (a+n)) at z = -1 with
    (-1)^a = exp(i pi a).  The alternating series is summed with Euler
    acceleration; b an integer >= 1 makes it terminate exactly.
    """
    a = complex(a)
    b = float(b)
    # a + n = 0 for integer n >= 0 hits a pole of the series
    if a.imag == 0.0 and a.real <= 0.0 and a.real == round(a.real):
        raise PoleError(f"incomplete_beta_rank_neg1 pole: a = {a.real:g} gives a + n = 0")
    terms = np.empty(n_terms, dtype=complex)
    poch = 1.0  # (1-b)_n / n!
    for n in range(n_terms):
        terms[n] = poch / (a + n)
        poch *= (1.0 - b + n) / (n + 1.0)
        if poch == 0.0:  # terminating case (b integer >= 1)
            terms = terms[: n + 1]
            break
    s = _euler_sum(terms)
    return ensure_finite(cmath.exp(1j * math.pi * a) * s, "incomplete_beta_rank_neg1")


def sho_momentum_wavefunction(n: int, p):
    """Momentum-space eigenfunction phi_n(p) of the dimensionless 1-D oscillator.

    Uses the normalized three-term recurrence
    phi_k = sqrt(2/k) p phi_{k-1} - sqrt((k-1)/k) phi_{k-2},
    which needs no factorials and stays in range for every n.
    """
    n = int(n)
    if n < 0:
        raise DomainError(f"oscillator level must be >= 0, got {n}")
    p = np.asarray(p, dtype=float)
    h0 = math.pi ** -0.25 * np.exp(-0.5 * p * p)
    if n == 0:
        return h0
    h1 = math.sqrt(2.0) * p * h0
    for k in range(2, n + 1):
        h0, h1 = h1, math.sqrt(2.0 / k) * p * h1 - math.sqrt((k - 1.0) / k) * h0
    return h1


def sho_momentum_density(n: int, p):
    """|phi_n(p)|^2 for the dimensionless 1-D harmonic oscillator."""
    phi = sho_momentum_wavefunction(n, p)
    out = phi * phi
    if np.isscalar(p) or np.ndim(p) == 0:
        return float(out)
    return out

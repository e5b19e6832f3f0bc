"""Hypergeometric and gamma kernels used by the wave-equation modules.

Everything here is computed from Taylor series of the hypergeometric
families pFq plus the classical connection/transformation formulas
(DLMF chapters 13 and 15) and a Lanczos approximation for Gamma.

Precision strategy
------------------
Series are accumulated in extended precision (``numpy.clongdouble``)
while tracking the largest term.  The ratio peak/|sum| measures the
digits lost to cancellation; when the running estimate exceeds the
requested tolerance the same series loop is re-run in ``mpmath``
arbitrary-precision arithmetic with the working precision sized from
that estimate.  Only mpmath *arithmetic* is used - no mpmath special
functions are called, so independent cross-checks against mpmath's own
implementations remain meaningful.
"""

from __future__ import annotations

import math
import cmath
from dataclasses import dataclass

import numpy as np
import mpmath

from .errors import DomainError, NonConvergence, PoleError

__all__ = [
    "SeriesControl",
    "gamma_complex",
    "reciprocal_gamma",
    "gauss_2f1",
    "kummer_1f1",
    "hyp0f1",
    "bessel_j_fractional",
]

_EPS_LD = float(np.finfo(np.clongdouble).eps)


@dataclass(frozen=True)
class SeriesControl:
    """Knobs for the series engines.

    max_terms      hard cap on summed terms before NonConvergence
    tol            relative truncation/roundoff budget (>= 10*eps)
    direct_radius  |x| below which the Gauss series is used untransformed
    """

    max_terms: int = 700
    tol: float = 1e-14
    direct_radius: float = 0.5

    def __post_init__(self) -> None:
        if self.tol < 10 * np.finfo(float).eps:
            raise ValueError("tol below 10*machine epsilon is not honest")
        if self.max_terms < 10:
            raise ValueError("max_terms too small to be useful")


_DEFAULT_CTL = SeriesControl()


def _near_nonpositive_int(z: complex, tol: float = 1e-12) -> bool:
    """True when z sits (numerically) on a pole of Gamma."""
    zr, zi = float(np.real(z)), float(np.imag(z))
    if abs(zi) > tol:
        return False
    n = round(zr)
    return n <= 0 and abs(zr - n) <= tol * max(1.0, abs(zr))


def _near_int(z: complex, tol: float = 1e-8) -> bool:
    zr, zi = float(np.real(z)), float(np.imag(z))
    return abs(zi) <= tol and abs(zr - round(zr)) <= tol


# ---------------------------------------------------------------------------
# Gamma: Lanczos approximation (g = 607/128, 15 terms; Godfrey's fit of the
# Lanczos (1964) scheme; relative error close to double roundoff).
# ---------------------------------------------------------------------------

_LANCZOS_G = 4.7421875
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    3.3994649984811888699e-5,
    4.6523628927048575665e-5,
    -9.8374475304879564677e-5,
    1.5808870322491248884e-4,
    -2.1026444172410488319e-4,
    2.1743961811521264320e-4,
    -1.6431810653676389022e-4,
    8.4418223983852743293e-5,
    -2.6190838401581408670e-5,
    3.6899182659531622704e-6,
)


def gamma_complex(z: complex) -> complex:
    """Gamma function for complex argument.

    Lanczos sum for Re z >= 1/2, reflection formula otherwise.
    Raises PoleError at (numerically) nonpositive integers.
    """
    z = complex(z)
    if _near_nonpositive_int(z):
        raise PoleError(f"gamma pole at z = {z}")
    if z.real < 0.5:
        # Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return math.pi / (cmath.sin(math.pi * z) * gamma_complex(1.0 - z))
    w = z - 1.0
    acc = _LANCZOS_C[0]
    for k in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[k] / (w + k)
    t = w + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (w + 0.5) * cmath.exp(-t) * acc


def reciprocal_gamma(z: complex) -> complex:
    """1/Gamma(z), returning exactly 0 at the poles (entire function)."""
    if _near_nonpositive_int(z):
        return 0.0 + 0.0j
    return 1.0 / gamma_complex(z)


# ---------------------------------------------------------------------------
# Generic pFq Taylor loop, extended precision first, mpmath arithmetic when
# cancellation eats the budget.
# ---------------------------------------------------------------------------

def _series_float(nums, dens, x, ctl: SeriesControl):
    """Sum pFq in clongdouble.  Returns (value, peak, ok)."""
    xl = np.clongdouble(x)
    term = np.clongdouble(1.0)
    total = np.clongdouble(1.0)
    peak = 1.0
    small_streak = 0
    for k in range(ctl.max_terms):
        ratio = np.clongdouble(1.0)
        for p in nums:
            ratio *= np.clongdouble(p) + k
        for q in dens:
            ratio /= np.clongdouble(q) + k
        term = term * ratio * xl / (k + 1)
        if term == 0:  # terminating (polynomial) case
            total_c = complex(total)
            return total_c, peak, True
        total += term
        a = abs(complex(term))
        peak = max(peak, a)
        if a <= ctl.tol * max(abs(complex(total)), 1e-300):
            small_streak += 1
            if small_streak >= 2:
                total_c = complex(total)
                lost = _EPS_LD * peak * math.sqrt(k + 1.0)
                ok = lost <= ctl.tol * max(abs(total_c), 1e-300)
                return total_c, peak, ok
        else:
            small_streak = 0
    raise NonConvergence(
        f"pFq series did not converge in {ctl.max_terms} terms (|x| = {abs(x):.3g})"
    )


def _series_mp(nums, dens, x, ctl: SeriesControl, peak: float) -> complex:
    """Same Taylor loop in mpmath arithmetic, sized to beat the cancellation."""
    digits_lost = math.log10(max(peak, 1.0)) + 16.0
    dps = min(140, int(digits_lost) + 25)
    with mpmath.workdps(dps):
        xm = mpmath.mpc(x)
        nm = [mpmath.mpc(p) for p in nums]
        dm = [mpmath.mpc(q) for q in dens]
        term = mpmath.mpc(1)
        total = mpmath.mpc(1)
        for k in range(ctl.max_terms):
            ratio = mpmath.mpc(1)
            for p in nm:
                ratio *= p + k
            for q in dm:
                ratio /= q + k
            term = term * ratio * xm / (k + 1)
            if term == 0:
                return complex(total)
            total += term
            if abs(term) <= mpmath.mpf(10) ** (-dps + 5) * max(abs(total), mpmath.mpf(1e-300)):
                return complex(total)
        raise NonConvergence(
            f"pFq series (mp) did not converge in {ctl.max_terms} terms"
        )


def _hyp_series(nums, dens, x, ctl: SeriesControl) -> complex:
    for q in dens:
        if _near_nonpositive_int(q):
            raise PoleError(f"lower parameter {q} is a nonpositive integer")
    value, peak, ok = _series_float(nums, dens, x, ctl)
    if ok:
        return value
    return _series_mp(nums, dens, x, ctl, peak)


def hyp0f1(c: complex, x: complex, ctl: SeriesControl | None = None) -> complex:
    """Confluent limit function 0F1(; c; x) = sum x^k / ((c)_k k!)."""
    ctl = ctl or _DEFAULT_CTL
    if x == 0:
        return 1.0 + 0.0j
    return _hyp_series((), (c,), x, ctl)


# ---------------------------------------------------------------------------
# Kummer confluent hypergeometric M(a, c, x) = 1F1(a; c; x)
# ---------------------------------------------------------------------------

def kummer_1f1(a: complex, c: complex, x: complex, ctl: SeriesControl | None = None) -> complex:
    """Confluent hypergeometric 1F1(a; c; x) for complex arguments.

    The Kummer transformation M(a,c,x) = e^x M(c-a,c,-x) routes the sum
    to the half-plane Re x >= 0, which removes the dominant cancellation;
    residual cancellation (oscillatory, imaginary x) is absorbed by the
    extended-precision/mpmath ladder of the series engine.
    """
    ctl = ctl or _DEFAULT_CTL
    a = complex(a)
    c = complex(c)
    x = complex(x)
    if _near_nonpositive_int(c):
        raise PoleError(f"1F1 lower parameter c = {c} is a nonpositive integer")
    if x == 0:
        return 1.0 + 0.0j
    if x.real < 0.0:
        return cmath.exp(x) * _hyp_series((c - a,), (c,), -x, ctl)
    return _hyp_series((a,), (c,), x, ctl)


# ---------------------------------------------------------------------------
# Gauss hypergeometric 2F1(a, b; c; x) on the real line, x < 1 (and x = 1
# when the Gauss sum converges).
# ---------------------------------------------------------------------------

def _gauss_series(a, b, c, x, ctl) -> complex:
    return _hyp_series((a, b), (c,), x, ctl)


def gauss_2f1(a, b, c, x: float, ctl: SeriesControl | None = None):
    """Gauss hypergeometric function for real x <= 1.

    Parameters may be complex (conjugate pairs arise in the oscillatory
    radial solutions); the argument must be real.  Real parameters
    return a float, complex parameters the complex value.

    Region map (DLMF 15.8): direct series for |x| <= direct_radius;
    the 1-x connection (15.8.4) for x near 1; the Pfaff transformation
    (15.8.1) for moderately negative x; the 1/x connection (15.8.2) for
    x < -2.  Connection formulas raise PoleError when their gamma
    prefactors sit on a pole (integer parameter differences).
    """
    ctl = ctl or _DEFAULT_CTL
    a, b, c, x = complex(a), complex(b), complex(c), float(x)
    real_params = a.imag == 0.0 and b.imag == 0.0 and c.imag == 0.0
    if _near_nonpositive_int(c):
        raise PoleError(f"2F1 lower parameter c = {c} is a nonpositive integer")
    if x > 1.0:
        raise DomainError("gauss_2f1 is defined on the real line only for x <= 1")
    if x == 1.0:
        if (c - a - b).real <= 0:
            raise DomainError("2F1 diverges at x = 1 unless Re(c - a - b) > 0")
        val = (
            gamma_complex(c)
            * gamma_complex(c - a - b)
            * reciprocal_gamma(c - a)
            * reciprocal_gamma(c - b)
        )
    elif abs(x) <= ctl.direct_radius:
        val = _gauss_series(a, b, c, x, ctl)
    elif x > 0.0:
        # 0.5 < x < 1: connection in powers of 1 - x  (DLMF 15.8.4)
        if _near_int(c - a - b):
            raise PoleError(
                "1-x connection formula degenerates: c - a - b is an integer"
            )
        y = 1.0 - x
        t1 = (
            gamma_complex(c)
            * gamma_complex(c - a - b)
            * reciprocal_gamma(c - a)
            * reciprocal_gamma(c - b)
            * _gauss_series(a, b, a + b - c + 1.0, y, ctl)
        )
        t2 = (
            complex(y) ** (c - a - b)
            * gamma_complex(c)
            * gamma_complex(a + b - c)
            * reciprocal_gamma(a)
            * reciprocal_gamma(b)
            * _gauss_series(c - a, c - b, c - a - b + 1.0, y, ctl)
        )
        val = t1 + t2
    elif x >= -2.0:
        # Pfaff: F(a,b;c;x) = (1-x)^(-a) F(a, c-b; c; x/(x-1))
        u = x / (x - 1.0)
        val = complex(1.0 - x) ** (-a) * _gauss_series(a, c - b, c, u, ctl)
    else:
        # x < -2: connection in powers of 1/x  (DLMF 15.8.2)
        if _near_int(b - a):
            raise PoleError("1/x connection formula degenerates: b - a is an integer")
        u = 1.0 / x
        t1 = (
            gamma_complex(c)
            * gamma_complex(b - a)
            * reciprocal_gamma(b)
            * reciprocal_gamma(c - a)
            * complex(-x) ** (-a)
            * _gauss_series(a, a - c + 1.0, a - b + 1.0, u, ctl)
        )
        t2 = (
            gamma_complex(c)
            * gamma_complex(a - b)
            * reciprocal_gamma(a)
            * reciprocal_gamma(c - b)
            * complex(-x) ** (-b)
            * _gauss_series(b, b - c + 1.0, b - a + 1.0, u, ctl)
        )
        val = t1 + t2
    return float(val.real) if real_params else val


# ---------------------------------------------------------------------------
# Bessel J of fractional (real) order at complex argument
# ---------------------------------------------------------------------------

def bessel_j_fractional(nu_order: float, y: complex, ctl: SeriesControl | None = None) -> complex:
    """Bessel function J_nu(y) for real (typically fractional) order.

    Uses the ascending series in its 0F1 form,
        J_nu(y) = (y/2)^nu / Gamma(nu+1) * 0F1(; nu+1; -y^2/4),
    with the principal branch of the complex power.  The equivalent
    1F1 representation is exercised by the test suite as an independent
    route through the same engine.
    """
    ctl = ctl or _DEFAULT_CTL
    nu = float(nu_order)
    y = complex(y)
    if _near_nonpositive_int(nu + 1.0):
        raise PoleError(f"order nu = {nu} has 1/Gamma(nu+1) on a pole; use integer-order routines")
    if y == 0:
        if nu == 0:
            return 1.0 + 0.0j
        if nu > 0:
            return 0.0 + 0.0j
        raise DomainError("J_nu(0) diverges for negative order")
    pref = cmath.exp(nu * cmath.log(y / 2.0)) * reciprocal_gamma(nu + 1.0)
    return pref * hyp0f1(nu + 1.0, -y * y / 4.0, ctl)

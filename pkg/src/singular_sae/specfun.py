"""Self-contained complex special functions for the spectral solvers.

Provides double-precision implementations of

* ``ln_gamma`` / ``gamma``     -- complex log-Gamma (Lanczos, g=7, 9 terms),
* ``digamma``                  -- recurrence shift to |z| >= 8 plus a 6-term
                                  asymptotic tail,
* ``kummer_f``                 -- the confluent hypergeometric F(a, c; z),
  power series inside a switch radius and the full two-sector asymptotic
  expansion outside it,
* ``whittaker_m`` / ``whittaker_w`` -- the regular and irregular Whittaker
  functions with second index 1/2, the solution basis of both solvable
  models handled by this package.

All functions are pure and deterministic: no caching, no global state, safe
under concurrent calls.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import NonConvergence, PoleError

EULER_GAMMA = 0.5772156649015328606065121
PSI_ONE = -EULER_GAMMA          # digamma(1)
PSI_TWO = 1.0 - EULER_GAMMA     # digamma(2)

_LN_SQRT_TWO_PI = 0.9189385332046727417803297
_LN_PI = math.log(math.pi)

# Lanczos coefficients, g = 7, 9-term set (double precision ~1e-13).
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

# Coefficients of the digamma asymptotic tail: psi(z) ~ ln z - 1/(2z)
# - sum_k c_k / z^(2k), six correction terms (|z| >= 8 keeps the truncation
# error near 1e-14).
_DIGAMMA_TAIL = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
)


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control for the series evaluators.

    max_terms      -- hard cap on summed terms before NonConvergence
    rel_tol        -- relative tolerance that stops the summation
    switch_radius  -- |z| beyond which kummer_f switches to its asymptotic form
    """

    max_terms: int = 500
    rel_tol: float = 1e-13
    switch_radius: float = 30.0

    def __post_init__(self):
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError("rel_tol must lie in (0, 1)")
        if self.switch_radius <= 0.0:
            raise ValueError("switch_radius must be positive")


DEFAULT_SERIES = SeriesControl()


def _near_nonpositive_integer(z: complex, tol: float = 1e-12) -> bool:
    return (
        abs(z.imag) < tol
        and z.real < 0.5
        and abs(z.real - round(z.real)) < tol
    )


def _sinpi(x: float) -> float:
    """sin(pi*x) with argument reduction that survives large |x|."""
    r = math.remainder(x, 2.0)
    return math.sin(math.pi * r)


def _cospi(x: float) -> float:
    r = math.remainder(x, 2.0)
    return math.cos(math.pi * r)


def _lanczos_sum(zz: complex) -> complex:
    acc = complex(_LANCZOS[0])
    for k in range(1, len(_LANCZOS)):
        acc += _LANCZOS[k] / (zz + k)
    return acc


def ln_gamma(z: complex) -> complex:
    """Principal-branch log-Gamma.

    Direct Lanczos evaluation for Re z >= 0.5; the reflection formula
    otherwise (there the result is correct modulo the usual 2*pi*i ambiguity
    of the continued branch, so exp(ln_gamma(z)) == Gamma(z) everywhere).

    Raises PoleError at non-positive integers.
    """
    z = complex(z)
    if _near_nonpositive_integer(z):
        raise PoleError(f"ln_gamma pole at z = {z}")
    if z.real < 0.5:
        return _LN_PI - cmath.log(cmath.sin(math.pi * z)) - ln_gamma(1.0 - z)
    zz = z - 1.0
    t = zz + _LANCZOS_G + 0.5
    return (
        _LN_SQRT_TWO_PI
        + (zz + 0.5) * cmath.log(t)
        - t
        + cmath.log(_lanczos_sum(zz))
    )


def gamma(z: complex) -> complex:
    """Complex Gamma via exp(ln_gamma). Raises PoleError at the poles."""
    return cmath.exp(ln_gamma(z))


def rgamma(z: complex) -> complex:
    """Entire reciprocal Gamma; returns exactly 0 at non-positive integers."""
    z = complex(z)
    if _near_nonpositive_integer(z):
        return 0.0 + 0.0j
    return cmath.exp(-ln_gamma(z))


def _ln_abs_gamma_real(x: float) -> tuple[float, float]:
    """(ln|Gamma(x)|, sign of Gamma(x)) for real non-pole x."""
    if x >= 0.5:
        zz = x - 1.0
        t = zz + _LANCZOS_G + 0.5
        acc = _LANCZOS[0]
        for k in range(1, len(_LANCZOS)):
            acc += _LANCZOS[k] / (zz + k)
        return _LN_SQRT_TWO_PI + (zz + 0.5) * math.log(t) - t + math.log(acc), 1.0
    s = _sinpi(x)
    if s == 0.0:
        raise PoleError(f"Gamma pole at x = {x}")
    lg1mx, _ = _ln_abs_gamma_real(1.0 - x)
    return _LN_PI - math.log(abs(s)) - lg1mx, math.copysign(1.0, s)


def gamma_real(x: float) -> float:
    """Real Gamma for non-pole arguments (signed on the negative axis)."""
    if x == round(x) and x <= 0.0:
        raise PoleError(f"Gamma pole at x = {x}")
    ln_abs, sign = _ln_abs_gamma_real(x)
    return sign * math.exp(ln_abs)


def rgamma_real(x: float) -> float:
    """Real 1/Gamma; exactly zero at non-positive integers."""
    if x == round(x) and x <= 0.0:
        return 0.0
    ln_abs, sign = _ln_abs_gamma_real(x)
    try:
        return sign * math.exp(-ln_abs)
    except OverflowError:
        return sign * math.inf


def gamma_ratio_real(x: float, y: float) -> float:
    """Gamma(x)/Gamma(y) via log differences, stable for large arguments."""
    lx, sx = _ln_abs_gamma_real(x)
    ly, sy = _ln_abs_gamma_real(y)
    return sx * sy * math.exp(lx - ly)


def digamma(z: complex) -> complex:
    """Complex digamma: reflect to Re z >= 0, shift to |z| >= 8, sum the tail.

    Raises PoleError at non-positive integers.
    """
    z = complex(z)
    if _near_nonpositive_integer(z):
        raise PoleError(f"digamma pole at z = {z}")
    if z.real < 0.0:
        # psi(z) = psi(1-z) - pi*cot(pi*z)
        return digamma(1.0 - z) - math.pi / cmath.tan(math.pi * z)
    acc = 0.0 + 0.0j
    while abs(z) < 8.0:
        acc -= 1.0 / z
        z += 1.0
    w = 1.0 / (z * z)
    tail = 0.0 + 0.0j
    p = w
    for c in _DIGAMMA_TAIL:
        tail += c * p
        p *= w
    return acc + cmath.log(z) - 0.5 / z - tail


def digamma_real(x: float) -> float:
    """Real digamma with well-reduced reflection (accurate for x << 0)."""
    if x == round(x) and x <= 0.0:
        raise PoleError(f"digamma pole at x = {x}")
    if x < 0.0:
        return digamma_real(1.0 - x) - math.pi * _cospi(x) / _sinpi(x)
    acc = 0.0
    while x < 8.0:
        acc -= 1.0 / x
        x += 1.0
    w = 1.0 / (x * x)
    tail = 0.0
    p = w
    for c in _DIGAMMA_TAIL:
        tail += c * p
        p *= w
    return acc + math.log(x) - 0.5 / x - tail


def _kummer_series(alpha: complex, gamma_c: complex, z: complex,
                   ctl: SeriesControl) -> complex:
    total = 1.0 + 0.0j
    term = 1.0 + 0.0j
    for n in range(1, ctl.max_terms + 1):
        term *= (alpha + (n - 1)) / (gamma_c + (n - 1)) * z / n
        total += term
        if abs(term) <= ctl.rel_tol * abs(total):
            return total
        if term == 0.0:            # polynomial case, alpha a non-positive integer
            return total
    raise NonConvergence(
        f"Kummer series did not converge in {ctl.max_terms} terms at z = {z}"
    )


def _kummer_asymptotic(alpha: complex, gamma_c: complex, z: complex,
                       ctl: SeriesControl) -> complex:
    # F(a,c;z) ~ G(c)/G(a) e^z z^(a-c) S1 + G(c)/G(c-a) (-z)^(-a) S2,
    # S1 = sum (c-a)_n (1-a)_n / (n! z^n), S2 = sum (a)_n (a-c+1)_n / (n! (-z)^n),
    # each truncated at its smallest term.
    def asymp_sum(p: complex, q: complex, x: complex) -> complex:
        total = 1.0 + 0.0j
        term = 1.0 + 0.0j
        smallest = 1.0
        for n in range(1, ctl.max_terms + 1):
            term *= (p + (n - 1)) * (q + (n - 1)) / (n * x)
            mag = abs(term)
            if mag > smallest:
                break
            smallest = mag
            total += term
            if mag <= ctl.rel_tol:
                break
        return total

    s1 = asymp_sum(gamma_c - alpha, 1.0 - alpha, z)
    s2 = asymp_sum(alpha, alpha - gamma_c + 1.0, -z)
    lead1 = rgamma(alpha) * cmath.exp(z + (alpha - gamma_c) * cmath.log(z))
    lead2 = rgamma(gamma_c - alpha) * cmath.exp(-alpha * cmath.log(-z))
    return gamma(gamma_c) * (lead1 * s1 + lead2 * s2)


def kummer_f(alpha: complex, gamma_c: complex, z: complex,
             ctl: SeriesControl = DEFAULT_SERIES) -> complex:
    """Confluent hypergeometric F(alpha, gamma_c; z).

    Power series for |z| <= ctl.switch_radius, the two-sector asymptotic
    expansion beyond it.  Raises PoleError when gamma_c is a non-positive
    integer and NonConvergence when the term budget runs out.
    """
    alpha = complex(alpha)
    gamma_c = complex(gamma_c)
    z = complex(z)
    if _near_nonpositive_integer(gamma_c):
        raise PoleError(f"kummer_f parameter pole at gamma_c = {gamma_c}")
    if z == 0.0:
        return 1.0 + 0.0j
    if abs(z) > ctl.switch_radius:
        return _kummer_asymptotic(alpha, gamma_c, z, ctl)
    if z.real < 0.0:
        # Kummer transformation keeps the summed series cancellation-free
        return cmath.exp(z) * _kummer_series(gamma_c - alpha, gamma_c, -z, ctl)
    if abs(z) - z.real > 16.0 and abs(z) >= 20.0:
        # strongly imaginary arguments: the alternating series loses
        # ~exp(|z| - Re z) digits, the asymptotic form is the lesser evil
        return _kummer_asymptotic(alpha, gamma_c, z, ctl)
    return _kummer_series(alpha, gamma_c, z, ctl)


def whittaker_m(alpha: complex, z: complex,
                ctl: SeriesControl = DEFAULT_SERIES) -> complex:
    """Regular Whittaker function with second index 1/2:
    M(z) = z * exp(-z/2) * F(1 - alpha, 2; z)."""
    z = complex(z)
    return z * cmath.exp(-z / 2.0) * kummer_f(1.0 - complex(alpha), 2.0, z, ctl)


def whittaker_w(alpha: complex, z: complex,
                ctl: SeriesControl = DEFAULT_SERIES) -> complex:
    """Irregular Whittaker function with second index 1/2 (log-series form).

    W(z) = exp(-z/2) * { [z F(1-alpha,2;z) (ln z + psi(1-alpha) - psi(1)
           - psi(2)) + sum_{r>=1} (1-alpha)_r / (r!(r+1)!) A_r z^(r+1)]
           / Gamma(-alpha)  +  1/Gamma(1-alpha) },
    A_r = sum_{n=0}^{r-1} [1/(n+1-alpha) - 1/(n+1) - 1/(n+2)].

    The constant term is grouped as 1/Gamma(1-alpha) (identical to the
    -1/alpha form away from alpha = 0 but finite there too).  Direct use is
    restricted to dist(alpha, {1, 2, ...}) > 1e-6; at those points the
    prefactor and the digamma pole compete and callers are expected to use
    the analytic sigma = 0 condition instead.
    """
    alpha = complex(alpha)
    z = complex(z)
    if (
        abs(alpha.imag) < 1e-6
        and alpha.real >= 0.5
        and abs(alpha.real - round(alpha.real)) < 1e-6
    ):
        raise PoleError(
            f"whittaker_w series form is singular near positive integer alpha = {alpha}"
        )
    if z == 0.0:
        return rgamma(1.0 - alpha)
    f_val = kummer_f(1.0 - alpha, 2.0, z, ctl)
    log_part = cmath.log(z) + digamma(1.0 - alpha) - PSI_ONE - PSI_TWO
    total = 0.0 + 0.0j
    poch = 1.0 + 0.0j          # (1-alpha)_r, updated per term
    a_r = 0.0 + 0.0j           # A_r running sum
    fact = 1.0                 # r!
    fact1 = 1.0                # (r+1)!
    zp = z                     # z^(r+1), updated per term
    scale = abs(z * f_val * log_part) + 1.0
    converged = False
    for r in range(1, ctl.max_terms + 1):
        poch *= 1.0 - alpha + (r - 1)
        a_r += 1.0 / (r - alpha) - 1.0 / r - 1.0 / (r + 1.0)
        fact *= r
        fact1 *= r + 1
        zp *= z
        term = poch / (fact * fact1) * a_r * zp
        total += term
        if abs(term) <= ctl.rel_tol * (abs(total) + scale):
            converged = True
            break
    if not converged:
        raise NonConvergence(
            f"whittaker_w series did not converge in {ctl.max_terms} terms at z = {z}"
        )
    bracket = z * f_val * log_part + total
    return cmath.exp(-z / 2.0) * (rgamma(-alpha) * bracket + rgamma(1.0 - alpha))

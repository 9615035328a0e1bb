"""Independent oracles used to derive expected test values.

Nothing here calls into singular_sae's numerical paths: series are summed
with exact rationals or mpmath, roots are located by a plain dense-grid
sign scan with midpoint refinement, Gamma values on the negative axis come
straight from the reflection formula.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath as mp

mp.mp.dps = 40


def rational_kummer(a: Fraction, c: Fraction, z: Fraction,
                    nterms: int = 400) -> Fraction:
    """Exact-rational confluent hypergeometric series."""
    total = Fraction(1)
    term = Fraction(1)
    for n in range(1, nterms + 1):
        term *= (a + n - 1) / (c + n - 1) * z / n
        total += term
    return total


def a_r(r: int, alpha) -> complex:
    """A_r = sum_{n=0}^{r-1} [1/(n+1-alpha) - 1/(n+1) - 1/(n+2)]."""
    total = 0.0
    for n in range(r):
        total += 1.0 / (n + 1 - alpha) - 1.0 / (n + 1) - 1.0 / (n + 2)
    return total


def gamma_reflection(x: float) -> float:
    """Gamma(x) for x < 0 via the reflection formula and mpmath's Gamma of
    the positive partner."""
    return float(mp.pi / (mp.sin(mp.pi * x) * mp.gamma(1 - x)))


def central_difference(f, z: complex, h: float = 1e-5) -> complex:
    return (f(z + h) - f(z - h)) / (2.0 * h)


def grid_scan_roots(f, lo: float, hi: float, n: int = 4000,
                    refine: int = 100) -> list[float]:
    """Dense uniform sign scan plus midpoint bisection refinement."""
    xs = [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    vals = [f(x) for x in xs]
    roots = []
    for i in range(n - 1):
        f0, f1 = vals[i], vals[i + 1]
        if not (math.isfinite(f0) and math.isfinite(f1)):
            continue
        if f0 == 0.0:
            roots.append(xs[i])
            continue
        if math.copysign(1.0, f0) != math.copysign(1.0, f1):
            a, b, fa = xs[i], xs[i + 1], f0
            for _ in range(refine):
                mmid = 0.5 * (a + b)
                fm = f(mmid)
                if fm == 0.0:
                    a = b = mmid
                    break
                if math.copysign(1.0, fm) == math.copysign(1.0, fa):
                    a, fa = mmid, fm
                else:
                    b = mmid
            root = 0.5 * (a + b)
            # discard pole jumps: the function must actually be small there
            if abs(f(root)) < 1e-3 * (abs(f0) + abs(f1)):
                roots.append(root)
    return roots


def wronskian_fd(f, g, x: float, h: float | None = None) -> complex:
    """W[f, g](x) by central differences."""
    if h is None:
        h = 1e-6 * max(abs(x), 1.0)
    fp = (f(x + h) - f(x - h)) / (2.0 * h)
    gp = (g(x + h) - g(x - h)) / (2.0 * h)
    return f(x) * gp - fp * g(x)

"""Harmonic oscillator with repulsive inverse-square core:
V(x) = (m omega^2 / 2) x^2 + g / x^2.

The coupling window 0 < g < 3 hbar^2 / (8 m) keeps the origin limit-circle,
so the full U(2) family of connection conditions applies.  With

    a  = (1/2) sqrt(1 + 8 m g / hbar^2)   in (1/2, 1),
    c1 = 1 + a,   c2 = 1 - a,             lambda = E / (hbar omega),

the spectral function is the Gamma ratio

    xi(lambda) = (1/(c2 - c1)) sqrt(m omega / hbar)
                 * Gamma((c1 - lambda)/2) / Gamma((c2 - lambda)/2)
                 * Gamma(c2) / Gamma(c1),

with poles on the lattice lambda = c1 + 2n and zeros on lambda = c2 + 2n.
Eigenphase theta = pi therefore gives the ladder 2n + c1 (the quantization
used since the classic treatments), theta = 0 gives 2n + c2, and a generic
theta interlaces roots between consecutive poles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import specfun
from .errors import CouplingOutOfRange, PoleError, WindowTooSmall
from .results import Level, SpectrumResult, merge_levels
from .rootfind import roots_in_bracket
from .u2ext import ExtensionSpec, named_extension, spectral_condition

_PI = math.pi
_LAMBDA_FLOOR = -1e12      # hard stop for the downward bracket expansion


def _a_from_g(g: float, hbar: float, m: float) -> float:
    return 0.5 * math.sqrt(1.0 + 8.0 * m * g / hbar**2)


@dataclass(frozen=True)
class OscillatorModel:
    """omega > 0, coupling g inside the open window (0, 3 hbar^2 / 8m)."""

    omega: float = 1.0
    g: float = 0.1
    hbar: float = 1.0
    m: float = 1.0

    def __post_init__(self):
        if self.omega <= 0.0:
            raise ValueError("omega must be positive")
        if self.hbar <= 0.0 or self.m <= 0.0:
            raise ValueError("hbar and m must be positive")
        if not 0.0 < self.g < 3.0 * self.hbar**2 / (8.0 * self.m):
            raise CouplingOutOfRange(
                f"g = {self.g} outside the open window (0, {3.0 * self.hbar**2 / (8.0 * self.m)})"
            )

    @classmethod
    def from_a(cls, a: float, omega: float = 1.0, hbar: float = 1.0,
               m: float = 1.0) -> "OscillatorModel":
        """Build the model from the exponent parameter a in (1/2, 1)."""
        g = hbar**2 * (4.0 * a * a - 1.0) / (8.0 * m)
        return cls(omega=omega, g=g, hbar=hbar, m=m)

    @property
    def a(self) -> float:
        return _a_from_g(self.g, self.hbar, self.m)

    @property
    def c1(self) -> float:
        return 1.0 + self.a

    @property
    def c2(self) -> float:
        return 1.0 - self.a

    @property
    def length_scale(self) -> float:
        """sqrt(hbar / m omega)."""
        return math.sqrt(self.hbar / (self.m * self.omega))

    def to_json(self) -> dict:
        return {"type": "oscinv", "omega": self.omega, "g": self.g,
                "hbar": self.hbar, "m": self.m, "a": self.a}


def a_param(model: OscillatorModel) -> float:
    """a = (1/2) sqrt(1 + 8 m g / hbar^2), strictly inside (1/2, 1)."""
    return model.a


def xi_bound(lam: float, model: OscillatorModel) -> float:
    """Spectral function xi(lambda); PoleError on the lattice c1 + 2n.

    The Gamma ratio is evaluated through log-Gamma differences when both
    arguments are positive (deep lambda stays finite) and through the
    signed reciprocal otherwise; zeros at lambda = c2 + 2n are exact.
    """
    c1, c2 = model.c1, model.c2
    x1 = (c1 - lam) / 2.0
    x2 = (c2 - lam) / 2.0
    if x1 < 0.25 and abs(x1 - round(x1)) < 5e-10:
        raise PoleError(f"xi pole at lambda = {lam}")
    pref = (1.0 / (c2 - c1)) * math.sqrt(model.m * model.omega / model.hbar)
    pref *= specfun.gamma_ratio_real(c2, c1)
    if x1 > 0.0 and x2 > 0.0:
        return pref * specfun.gamma_ratio_real(x1, x2)
    return pref * specfun.gamma_real(x1) * specfun.rgamma_real(x2)


def _branch_lambdas(model: OscillatorModel, theta: float, L0: float,
                    count: int) -> list[float]:
    """Dimensionless levels on one eigenphase branch, ascending."""
    theta = theta % (2.0 * _PI)
    c1, c2 = model.c1, model.c2
    if abs(theta - _PI) < 1e-12:
        return [c1 + 2.0 * n for n in range(count)]
    if theta < 1e-12 or theta > 2.0 * _PI - 1e-12:
        return [c2 + 2.0 * n for n in range(count)]

    def w(lam: float) -> float:
        try:
            return spectral_condition(theta, L0, xi_bound(lam, model))
        except PoleError:
            return math.nan

    lambdas: list[float] = []
    # First interval (-inf, c1): expand the left edge until w changes sign.
    lo = c2 - 2.0
    hi = c1
    w_hi_side = w(c1 - 1e-7 * max(abs(c1), 1.0))
    found_first = False
    while lo > _LAMBDA_FLOOR:
        if math.isfinite(w(lo)) and math.isfinite(w_hi_side) and \
                math.copysign(1.0, w(lo)) != math.copysign(1.0, w_hi_side):
            found_first = True
            break
        lo = c1 - 2.0 * (c1 - lo)
    if found_first:
        lambdas += roots_in_bracket(w, lo, hi, edge_rel=1e-9)
    # Subsequent intervals between consecutive poles c1 + 2n.
    n = 0
    while len(lambdas) < count:
        a = c1 + 2.0 * n
        b = c1 + 2.0 * (n + 1)
        got = roots_in_bracket(w, a, b, edge_rel=1e-9)
        if not got:
            raise WindowTooSmall(
                f"no root located in pole interval ({a}, {b}) for theta = {theta}"
            )
        lambdas += got
        n += 1
    return sorted(lambdas)[:count]


def bound_spectrum(model: OscillatorModel, spec: ExtensionSpec,
                   count: int) -> SpectrumResult:
    """Lowest `count` levels for the extension, merged across branches.

    theta = pi and theta = 0 branches use the exact pole/zero lattices; any
    other eigenphase is solved by pole-aware bracketing and bisection.
    Levels coinciding within 1e-9 in lambda are merged with degeneracy 2.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    hw = model.hbar * model.omega
    raw: list[tuple[float, str]] = []
    if spec.is_degenerate():
        for lam in _branch_lambdas(model, spec.theta_plus, spec.L0, count):
            raw.append((lam, "+"))
            raw.append((lam, "-"))
    else:
        for label, theta in spec.branches:
            for lam in _branch_lambdas(model, theta, spec.L0, count):
                raw.append((lam, label))
    merged = merge_levels(raw, rel_tol=1e-9)
    if len(merged) < count:
        raise WindowTooSmall(f"found {len(merged)} levels, requested {count}")
    levels = tuple(
        Level(E=lv.E * hw, branch=lv.branch, degeneracy=lv.degeneracy, lam=lv.E)
        for lv in merged[:count]
    )
    return SpectrumResult(levels=levels, model=model.to_json(),
                          extension=spec.to_json())


def free_case_spectrum(model: OscillatorModel, count: int) -> SpectrumResult:
    """Spectrum at U = sigma_1 (eigenphases 0 and pi).

    As the coupling window closes (a -> 1/2) the two ladders 2n + c2 and
    2n + c1 interleave into the plain harmonic-oscillator spectrum
    (n + 1/2) hbar omega.
    """
    return bound_spectrum(model, named_extension("sx"), count)


__all__ = [
    "OscillatorModel", "a_param", "xi_bound", "bound_spectrum",
    "free_case_spectrum",
]

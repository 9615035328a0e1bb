"""Independent ODE engine for parity-invariant potentials with one singular point.

This module never uses the closed-form spectral functions of the two
solvable models; it rebuilds xi(E) from numerics alone and therefore serves
as their oracle and as the numerical verification of the eigenphase-only
dependence of the spectrum:

* Frobenius series start-up at the limit-circle origin (with an x*ln(x)
  partner solution when the indicial exponents differ by an integer),
* high-order integration of the two basis solutions along the half line,
* discrimination of the decaying direction at the limit-point end by
  backward log-derivative (Riccati) integration from deep inside the
  classically forbidden region,
* Wronskians of the basis solutions against fixed reference modes in the
  limit x -> +0, taken term by term from the series products (an eps/2^j
  ladder guards against drift), assembled into

      xi(E) = (W[p1, m2] + alpha W[p2, m2]) / (W[p1, m1] + alpha W[p2, m1]),

* per-branch root finding of sin(theta/2) + L0 xi(E) cos(theta/2) with the
  pole lattice located numerically from sign changes of 1/xi.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from . import specfun
from .errors import (
    ExtrapolationFailure,
    NoDecaySeparation,
    SeriesFailure,
    StepFailure,
    WindowTooSmall,
)
from .results import Level, SpectrumResult, merge_levels
from .rootfind import roots_in_bracket
from .u2ext import ExtensionSpec, spectral_condition

_ACTION_TARGET = 18.0        # e-foldings separating decaying from growing
_SERIES_ORDERS = 4           # Frobenius coefficients kept beyond the leading one


@dataclass(frozen=True)
class FrobeniusData:
    """Indicial exponents at x -> 0+ (s1 > s2) and the integer-gap flag."""

    s1: float
    s2: float
    log_case: bool = False


@dataclass
class CustomPotential:
    """Parity-invariant potential with a single singularity at x = 0.

    v           -- V(x) for x != 0 (must accept negative x)
    frobenius   -- declared indicial data (validated against v2)
    v2, v1      -- coefficients of 1/x^2 and 1/x in V near the origin
    v0, v0_slope, v0_curv -- Taylor data of the regular part
                   V(x) - v2/x^2 - v1/x ~ v0 + v0_slope*x + v0_curv*x^2
    lp_check_x  -- minimum outer radius for decay discrimination
    length_scale-- typical length used to size grids and epsilons
    reference_amplitudes -- optional E_ref -> (A1, A2, mix) fixing the
                   reference-mode normalization (defaults reproduce a
                   canonical unit-Wronskian pair)
    """

    v: Callable[[float], float]
    frobenius: FrobeniusData
    v2: float = 0.0
    v1: float = 0.0
    v0: float = 0.0
    v0_slope: float = 0.0
    v0_curv: float = 0.0
    hbar: float = 1.0
    m: float = 1.0
    lp_check_x: float = 5.0
    length_scale: float = 1.0
    name: str = "custom"
    reference_amplitudes: Callable[[float], tuple[float, float, float]] | None = None
    default_window: tuple[float, float] | None = None
    default_ref_energy: float | None = None

    def __post_init__(self):
        if self.hbar <= 0.0 or self.m <= 0.0:
            raise ValueError("hbar and m must be positive")
        self._check_parity()
        self._check_indicial()

    def _check_parity(self):
        xs = np.linspace(0.07, 4.7, 50) * self.length_scale
        for x in xs:
            vp, vm = self.v(float(x)), self.v(float(-x))
            scale = max(abs(vp), abs(vm), 1.0)
            if abs(vp - vm) > 1e-12 * scale:
                raise ValueError(f"potential is not parity invariant at x = {x}")

    def _check_indicial(self):
        c2 = 2.0 * self.m * self.v2 / self.hbar**2
        disc = 0.25 + c2
        if disc < 0.0:
            raise SeriesFailure("indicial discriminant negative (not limit-circle data)")
        s1 = 0.5 + math.sqrt(disc)
        s2 = 0.5 - math.sqrt(disc)
        fb = self.frobenius
        if abs(s1 - fb.s1) > 1e-6 or abs(s2 - fb.s2) > 1e-6:
            raise SeriesFailure(
                f"declared exponents ({fb.s1}, {fb.s2}) inconsistent with "
                f"v2 (expected ({s1}, {s2}))"
            )
        gap_int = abs((fb.s1 - fb.s2) - round(fb.s1 - fb.s2)) < 1e-9
        if fb.log_case != gap_int:
            raise SeriesFailure("log_flag inconsistent with the exponent gap")
        if fb.log_case and not (abs(fb.s1 - 1.0) < 1e-9 and abs(fb.s2) < 1e-9):
            raise SeriesFailure("log-case start-up implemented for exponents (1, 0) only")

    # -- local ODE data ----------------------------------------------------

    def q_of(self, E: float) -> Callable[[float], float]:
        """Q(x) = (2m/hbar^2) (V(x) - E); the ODE is psi'' = Q psi."""
        pref = 2.0 * self.m / self.hbar**2

        def q(x: float) -> float:
            return pref * (self.v(x) - E)

        return q

    def q_coeffs(self, E: float) -> tuple[float, float, float, float, float]:
        """(C2, C1, Q0, Q1, Q2) of Q(x) = C2/x^2 + C1/x + Q0 + Q1 x + Q2 x^2."""
        pref = 2.0 * self.m / self.hbar**2
        return (
            pref * self.v2,
            pref * self.v1,
            pref * (self.v0 - E),
            pref * self.v0_slope,
            pref * self.v0_curv,
        )

    def to_json(self) -> dict:
        return {
            "type": "custom", "name": self.name,
            "frobenius": {"s1": self.frobenius.s1, "s2": self.frobenius.s2,
                          "log_flag": self.frobenius.log_case},
            "hbar": self.hbar, "m": self.m,
        }


# -- Frobenius series ------------------------------------------------------
#
# A local solution is a list of terms (power, logpow, coef) meaning
# coef * x^power * (ln x)^logpow.  Products and derivatives of such lists
# stay in the same family, which is what makes the x -> +0 Wronskian limits
# exact instead of a cancellation-prone numeric difference.

Terms = list[tuple[float, int, float]]


def _power_coeffs(pot: CustomPotential, E: float, s: float) -> list[float]:
    c2, c1, q0, q1, q2 = pot.q_coeffs(E)
    b = [1.0]
    rhs_coeffs = (c1, q0, q1, q2)
    for n in range(1, _SERIES_ORDERS + 1):
        rhs = 0.0
        for k, qk in enumerate(rhs_coeffs):
            j = n - 1 - k
            if 0 <= j < len(b):
                rhs += qk * b[j]
        b.append(rhs / (n * (n + 2.0 * s - 1.0)))
    return b


def _log_partner_coeffs(pot: CustomPotential, E: float,
                        b: list[float]) -> tuple[float, list[float]]:
    # Exponents (1, 0): psi2 = K psi1 ln x + P, P = 1 + d2 x^2 + d3 x^3,
    # K = C1 and the d's follow from matching powers (d1 = 0 canonical).
    c2, c1, q0, q1, q2 = pot.q_coeffs(E)
    k = c1
    d0, d1 = 1.0, 0.0
    d2 = (c1 * d1 + q0 * d0 - 3.0 * k * b[1]) / 2.0
    d3 = (c1 * d2 + q0 * d1 + q1 * d0 - 5.0 * k * b[2]) / 6.0
    return k, [d0, d1, d2, d3]


def solution_terms(pot: CustomPotential, E: float) -> tuple[Terms, Terms]:
    """Canonical term lists of the two local solutions at energy E.

    Solution 1 behaves as x^s1 (1 + ...), solution 2 as x^s2 (1 + ...) or,
    in the integer-gap case, as K*psi1*ln x + (1 + ...).
    """
    fb = pot.frobenius
    b1 = _power_coeffs(pot, E, fb.s1)
    t1: Terms = [(fb.s1 + j, 0, c) for j, c in enumerate(b1) if c != 0.0]
    if not fb.log_case:
        b2 = _power_coeffs(pot, E, fb.s2)
        t2: Terms = [(fb.s2 + j, 0, c) for j, c in enumerate(b2) if c != 0.0]
        return t1, t2
    k, d = _log_partner_coeffs(pot, E, b1)
    t2 = [(1.0 + j, 1, k * c) for j, c in enumerate(b1) if c != 0.0]
    t2 += [(float(j), 0, c) for j, c in enumerate(d) if c != 0.0]
    return t1, t2


def eval_terms(terms: Terms, x: float) -> tuple[float, float]:
    """(value, derivative) of a term list at x > 0."""
    lx = math.log(x)
    val = 0.0
    dval = 0.0
    for p, l, c in terms:
        xp = x**p
        lp = lx**l if l else 1.0
        val += c * xp * lp
        dval += c * (p * xp / x) * lp
        if l:
            dval += c * xp * l * (lx ** (l - 1)) / x
    return val, dval


def scale_terms(terms: Terms, factor: float) -> Terms:
    return [(p, l, factor * c) for p, l, c in terms]


def add_terms(a: Terms, b: Terms) -> Terms:
    return list(a) + list(b)


def wronskian_terms(f: Terms, g: Terms) -> dict[tuple[float, int], float]:
    """Term list of W[f, g] = f g' - f' g, grouped by (power, logpow)."""
    out: dict[tuple[float, int], float] = {}

    def put(p: float, l: int, c: float):
        if c == 0.0:
            return
        key = (round(p, 9), l)
        out[key] = out.get(key, 0.0) + c

    for p, l, c in f:
        for q, m, d in g:
            put(p + q - 1.0, l + m, c * d * (q - p))
            if m != l:
                put(p + q - 1.0, l + m - 1, c * d * (m - l))
    return out


def _eval_wronskian_terms(terms: dict[tuple[float, int], float], x: float) -> float:
    lx = math.log(x)
    tot = 0.0
    for (p, l), c in terms.items():
        tot += c * x**p * (lx**l if l else 1.0)
    return tot


def wronskian_limit(f: Terms, g: Terms, eps: float) -> float:
    """lim_{x->0+} W[f, g], exact from the series plus a ladder drift check.

    The limit is the sum of the (power 0, no log) coefficients; surviving
    negative powers or log terms mean the two term lists do not belong to
    the same singular problem.  The eps*2^-j ladder (j = 0..4) must settle
    onto the limit, otherwise ExtrapolationFailure is raised.
    """
    terms = wronskian_terms(f, g)
    scale = max((abs(c) for c in terms.values()), default=0.0) or 1.0
    limit = 0.0
    for (p, l), c in terms.items():
        if abs(c) <= 1e-11 * scale:
            continue
        if p < -1e-9 or (abs(p) <= 1e-9 and l > 0):
            raise ExtrapolationFailure(
                f"divergent Wronskian term x^{p} ln^{l} survives with coef {c}"
            )
        if abs(p) <= 1e-9:
            limit += c
    ladder = [_eval_wronskian_terms(terms, eps * 0.5**j) for j in range(5)]
    drifts = [abs(v - limit) for v in ladder]
    span = max(abs(limit), max(abs(v) for v in ladder), 1e-12)
    if drifts[-1] > 1e-6 * span and drifts[-1] > 0.75 * drifts[0]:
        raise ExtrapolationFailure(
            f"Wronskian ladder does not settle: drifts {drifts}"
        )
    return limit


# -- series start-up and integration ---------------------------------------


@dataclass(frozen=True)
class FrobeniusSeeds:
    """Evaluated start-up data at x = eps for both local solutions."""

    eps: float
    seed1: tuple[float, float]
    seed2: tuple[float, float]
    terms1: Terms
    terms2: Terms


def frobenius_start(pot: CustomPotential, E: float,
                    eps: float | None = None) -> FrobeniusSeeds:
    """Series seeds at a start radius small enough to be converged.

    eps is shrunk until dropping the highest kept order moves neither seed
    by more than 1e-11 relative; SeriesFailure if that never happens.
    """
    t1, t2 = solution_terms(pot, E)

    def drop_highest(terms: Terms) -> Terms | None:
        # comparison list without the highest kept order; None marks an
        # exact low-order polynomial (nothing left to truncate)
        max_p = max(p for p, _, _ in terms)
        low = [t for t in terms if t[0] < max_p - 1e-12]
        return low or None

    t1_lo = drop_highest(t1)
    t2_lo = drop_highest(t2)
    eps = eps if eps is not None else 1e-3 * pot.length_scale
    for _ in range(40):
        ok = True
        for full, low in ((t1, t1_lo), (t2, t2_lo)):
            if low is None:
                continue
            v, dv = eval_terms(full, eps)
            vl, dvl = eval_terms(low, eps)
            sv = max(abs(v), abs(vl), 1e-290)
            sd = max(abs(dv), abs(dvl), 1e-290)
            if abs(v - vl) > 1e-11 * sv or abs(dv - dvl) > 1e-11 * sd:
                ok = False
                break
        if ok:
            return FrobeniusSeeds(eps, eval_terms(t1, eps), eval_terms(t2, eps),
                                  t1, t2)
        eps *= 0.25
    raise SeriesFailure(f"Frobenius start-up did not converge by eps = {eps}")


@dataclass(frozen=True)
class HalfLineSolution:
    """Samples (x, psi, psi') of one solution on [eps, x_max]."""

    E: float
    xs: np.ndarray
    psi: np.ndarray
    dpsi: np.ndarray

    def at(self, x: float) -> tuple[float, float]:
        i = int(np.searchsorted(self.xs, x))
        i = min(max(i, 0), len(self.xs) - 1)
        return float(self.psi[i]), float(self.dpsi[i])

    def wronskian_with(self, other: "HalfLineSolution") -> np.ndarray:
        return self.psi * other.dpsi - self.dpsi * other.psi


def integrate_halfline(pot: CustomPotential, E: float,
                       seed: tuple[float, float], eps: float, x_max: float,
                       x_eval: np.ndarray | None = None,
                       rtol: float = 1e-11,
                       max_step: float = np.inf) -> HalfLineSolution:
    """Integrate psi'' = Q psi from (eps, seed) out to x_max (DOP853)."""
    q = pot.q_of(E)

    def rhs(x, y):
        return (y[1], q(x) * y[0])

    atol = 1e-14 * max(abs(seed[0]), abs(seed[1]), 1.0)
    sol = solve_ivp(rhs, (eps, x_max), np.array(seed, dtype=float),
                    method="DOP853", rtol=rtol, atol=atol, t_eval=x_eval,
                    max_step=max_step, dense_output=False)
    if not sol.success:
        raise StepFailure(f"integration failed at E = {E}: {sol.message}")
    if not np.all(np.isfinite(sol.y)):
        raise StepFailure(f"integration overflowed at E = {E}")
    return HalfLineSolution(E=E, xs=sol.t, psi=sol.y[0], dpsi=sol.y[1])


# -- outer-region geometry ---------------------------------------------------


def _outer_turning_point(pot: CustomPotential, E: float) -> float | None:
    """Largest zero of Q on the half line, None if Q > 0 everywhere sampled."""
    q = pot.q_of(E)
    ls = pot.length_scale
    xs = np.geomspace(1e-3 * ls, 1e4 * ls, 160)
    vals = [q(float(x)) for x in xs]
    idx = None
    for i in range(len(xs) - 1):
        if vals[i] <= 0.0 < vals[i + 1]:
            idx = i
    if idx is None:
        if all(v > 0.0 for v in vals):
            return None
        raise NoDecaySeparation(
            f"no classically forbidden outer region found at E = {E}"
        )
    a, b = float(xs[idx]), float(xs[idx + 1])
    for _ in range(80):
        mticks = 0.5 * (a + b)
        if q(mticks) <= 0.0:
            a = mticks
        else:
            b = mticks
    return 0.5 * (a + b)


def _match_and_outer(pot: CustomPotential, E: float) -> tuple[float, float]:
    """(x_match, x_max): match point just inside the forbidden region and an
    outer radius carrying ~_ACTION_TARGET e-foldings of WKB action."""
    q = pot.q_of(E)
    ls = pot.length_scale
    xt = _outer_turning_point(pot, E)
    if xt is None:
        x_m = ls
    else:
        x_m = xt * 1.02 + 0.05 * ls
        for _ in range(200):
            if q(x_m) > 0.0:
                break
            x_m += 0.05 * ls
        else:
            raise NoDecaySeparation(f"cannot enter forbidden region at E = {E}")
    action = 0.0
    x_lo = x_m
    x_hi = max(x_m * 1.25, x_m + 0.5 * ls, pot.lp_check_x)
    for _ in range(200):
        xs = np.linspace(x_lo, x_hi, 48)
        integ = np.trapezoid([math.sqrt(max(q(float(x)), 0.0)) for x in xs], xs)
        action += float(integ)
        if action >= _ACTION_TARGET:
            return x_m, x_hi
        x_lo = x_hi
        x_hi *= 1.35
    raise NoDecaySeparation(
        f"forbidden region too shallow: action {action:.2f} by x = {x_lo:.3g}"
    )


def _decay_ratio_from_seeds(pot: CustomPotential, E: float,
                            seeds: "FrobeniusSeeds",
                            x_max: float | None = None) -> float:
    x_m, x_out = _match_and_outer(pot, E)
    if x_max is not None:
        x_out = max(x_out, x_max)
    q = pot.q_of(E)

    q_out = q(x_out)
    h = 1e-6 * max(x_out, 1.0)
    dq_out = (q(x_out + h) - q(x_out - h)) / (2.0 * h)
    r0 = -math.sqrt(q_out) - dq_out / (4.0 * q_out)

    def riccati(x, y):
        return [q(x) - y[0] * y[0]]

    sol = solve_ivp(riccati, (x_out, x_m), [r0], method="DOP853",
                    rtol=1e-12, atol=1e-13 * max(abs(r0), 1.0))
    if not sol.success:
        raise StepFailure(f"backward log-derivative integration failed at E = {E}")
    r_m = float(sol.y[0][-1])

    # both basis solutions forward in one system
    def rhs(x, y):
        qq = q(x)
        return (y[1], qq * y[0], y[3], qq * y[2])

    y0 = np.array([*seeds.seed1, *seeds.seed2], dtype=float)
    fwd = solve_ivp(rhs, (seeds.eps, x_m), y0, method="DOP853",
                    rtol=1e-12, atol=1e-15 * float(np.max(np.abs(y0)) + 1.0))
    if not fwd.success or not np.all(np.isfinite(fwd.y)):
        raise StepFailure(f"forward basis integration failed at E = {E}")
    v1, d1, v2, d2 = (float(fwd.y[i][-1]) for i in range(4))
    num = v1 * r_m - d1
    den = v2 * r_m - d2
    scale = max(abs(v1 * r_m) + abs(d1), abs(v2 * r_m) + abs(d2), 1e-290)
    if abs(den) <= 1e-13 * scale:
        return math.inf
    return -num / den


def decay_ratio(pot: CustomPotential, E: float, eps: float | None = None,
                x_max: float | None = None) -> float:
    """alpha such that (solution 1) + alpha (solution 2) decays at infinity.

    The decaying direction is fixed by integrating the log-derivative
    r = u'/u backward (Riccati r' = Q - r^2) from deep inside the forbidden
    region, which is the stable direction; the two forward-integrated basis
    solutions are matched against r at x_match.  Returns math.inf when the
    decaying combination is pure solution 2.
    """
    seeds = frobenius_start(pot, E, eps)
    return _decay_ratio_from_seeds(pot, E, seeds, x_max)


# -- reference modes and xi ---------------------------------------------------


class ReferenceModes:
    """Fixed pair of real eigenmodes at E_ref with unit Wronskian.

    phi1 carries the parity-odd full-line extension, phi2 the parity-even
    one; near the origin both are represented by their Frobenius term lists
    (scaled by the model's reference amplitudes), outward by integrated
    samples.  Also memoizes xi(E) evaluations for spectrum scans.
    """

    def __init__(self, pot: CustomPotential, E_ref: float,
                 terms1: Terms, terms2: Terms, eps: float,
                 phi1: HalfLineSolution, phi2: HalfLineSolution):
        self.pot = pot
        self.E_ref = E_ref
        self.terms1 = terms1
        self.terms2 = terms2
        self.eps = eps
        self.phi1 = phi1
        self.phi2 = phi2
        self._xi_cache: dict[float, float] = {}
        self._alpha_cache: dict[float, float] = {}
        self._pole_cache: dict[tuple[float, float, int], list[float]] = {}

    @classmethod
    def build(cls, pot: CustomPotential, E_ref: float,
              x_out: float | None = None) -> "ReferenceModes":
        seeds = frobenius_start(pot, E_ref)
        if pot.reference_amplitudes is not None:
            a1, a2, mix = pot.reference_amplitudes(E_ref)
        else:
            fb = pot.frobenius
            a1 = 1.0
            a2 = -1.0 if fb.log_case else 1.0 / (fb.s2 - fb.s1)
            mix = 0.0
        t1 = scale_terms(seeds.terms1, a1)
        t2 = scale_terms(add_terms(seeds.terms2, scale_terms(seeds.terms1, mix)), a2)
        w0 = wronskian_limit(t1, t2, seeds.eps)
        if abs(w0 - 1.0) > 1e-9:
            raise SeriesFailure(
                f"reference amplitudes give W[phi1, phi2] = {w0}, expected 1"
            )
        if x_out is None:
            xt = _outer_turning_point(pot, E_ref)
            x_out = (xt if xt is not None else pot.length_scale) + pot.length_scale
        grid = np.geomspace(seeds.eps, x_out, 200)
        s1 = eval_terms(t1, seeds.eps)
        s2 = eval_terms(t2, seeds.eps)
        phi1 = integrate_halfline(pot, E_ref, s1, seeds.eps, x_out, x_eval=grid)
        phi2 = integrate_halfline(pot, E_ref, s2, seeds.eps, x_out, x_eval=grid)
        return cls(pot, E_ref, t1, t2, seeds.eps, phi1, phi2)

    def wronskian_samples(self) -> np.ndarray:
        return self.phi1.wronskian_with(self.phi2)

    def xi(self, E: float) -> float:
        if E not in self._xi_cache:
            self._xi_cache[E] = xi_of_energy(self.pot, E, self)
        return self._xi_cache[E]

    def alpha(self, E: float) -> float:
        if E not in self._alpha_cache:
            self._alpha_cache[E] = decay_ratio(self.pot, E)
        return self._alpha_cache[E]


def xi_of_energy(pot: CustomPotential, E: float, modes: ReferenceModes,
                 eps: float | None = None) -> float:
    """xi(E) from Wronskians of the basis solutions against the reference
    modes at +0 and the decay ratio alpha."""
    seeds = frobenius_start(pot, E, eps)
    alpha = modes._alpha_cache.get(E)
    if alpha is None:
        alpha = _decay_ratio_from_seeds(pot, E, seeds)
        modes._alpha_cache[E] = alpha
    lad_eps = min(seeds.eps, modes.eps)
    w11 = wronskian_limit(seeds.terms1, modes.terms1, lad_eps)
    w12 = wronskian_limit(seeds.terms1, modes.terms2, lad_eps)
    w21 = wronskian_limit(seeds.terms2, modes.terms1, lad_eps)
    w22 = wronskian_limit(seeds.terms2, modes.terms2, lad_eps)
    if math.isinf(alpha):
        return w22 / w21
    return (w12 + alpha * w22) / (w11 + alpha * w21)


# -- spectrum -----------------------------------------------------------------


def _pole_lattice(xi: Callable[[float], float], e_lo: float, e_hi: float,
                  n_grid: int) -> list[float]:
    """Poles of xi in the window: accepted roots of 1/xi on a uniform scan."""

    def u(E: float) -> float:
        try:
            x = xi(E)
        except (StepFailure, NoDecaySeparation, SeriesFailure):
            return math.nan
        return 1.0 / x if x != 0.0 else math.inf

    grid = [float(x) for x in np.linspace(e_lo, e_hi, n_grid)]
    return roots_in_bracket(u, e_lo, e_hi, rel_tol=1e-13, grid=grid)


def _branch_roots(xi: Callable[[float], float], theta: float, L0: float,
                  e_lo: float, e_hi: float, poles: list[float],
                  count: int) -> list[float]:
    theta = theta % (2.0 * math.pi)

    def w(E: float) -> float:
        try:
            return spectral_condition(theta, L0, xi(E))
        except (StepFailure, NoDecaySeparation, SeriesFailure):
            return math.nan

    if abs(theta - math.pi) < 1e-12:
        return sorted(poles)[:count]
    segments = [e_lo] + sorted(poles) + [e_hi]
    roots: list[float] = []
    for a, b in zip(segments, segments[1:]):
        if b - a <= 1e-12 * max(abs(a), abs(b), 1.0):
            continue
        roots += roots_in_bracket(w, a, b, n_sub=48, edge_rel=1e-7,
                                  rel_tol=1e-11)
    return sorted(roots)[:count]


def spectrum(pot: CustomPotential, spec: ExtensionSpec, modes: ReferenceModes,
             count: int, E_window: tuple[float, float],
             n_grid: int = 512) -> SpectrumResult:
    """Bound levels of the extension from the ODE engine alone.

    The window is scanned on n_grid points for sign changes of 1/xi (the
    pole lattice); each inter-pole segment is then searched for roots of the
    branch condition.  Raises WindowTooSmall when fewer than `count` merged
    levels lie inside the window.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    e_lo, e_hi = E_window
    if not e_lo < e_hi:
        raise ValueError("empty energy window")
    key = (e_lo, e_hi, n_grid)
    poles = modes._pole_cache.get(key)
    if poles is None:
        poles = _pole_lattice(modes.xi, e_lo, e_hi, n_grid)
        modes._pole_cache[key] = poles
    raw: list[tuple[float, str]] = []
    if spec.is_degenerate():
        for e in _branch_roots(modes.xi, spec.theta_plus, spec.L0, e_lo, e_hi,
                               poles, count):
            raw.append((e, "+"))
            raw.append((e, "-"))
    else:
        for label, theta in spec.branches:
            for e in _branch_roots(modes.xi, theta, spec.L0, e_lo, e_hi,
                                   poles, count):
                raw.append((e, label))
    levels = merge_levels(raw, rel_tol=1e-8)
    if len(levels) < count:
        raise WindowTooSmall(
            f"ODE engine found {len(levels)} levels in {E_window}, requested {count}"
        )
    return SpectrumResult(levels=tuple(levels[:count]), model=pot.to_json(),
                          extension=spec.to_json())


def probability_current(psi: complex, psi_prime: complex, model) -> float:
    """j = (hbar/m) Im(conj(psi) psi'); zero for any real solution."""
    return (model.hbar / model.m) * (psi.conjugate() * psi_prime).imag


# -- built-in potential descriptors ------------------------------------------


def coulomb_potential(model) -> CustomPotential:
    """Descriptor of V(x) = -e^2/|x| with the Whittaker reference modes."""
    e2, hbar, m = model.e2, model.hbar, model.m
    c1_coef = -2.0 * m * e2 / hbar**2

    def ref_amps(E_ref: float) -> tuple[float, float, float]:
        beta = model.alpha_of(E_ref)
        kappa = model.eta_of(E_ref)
        # x-coefficient of the scaled irregular Whittaker mode: the digamma
        # block plus -kappa from the x-linear part of its exp(-kappa x) factor
        mix = c1_coef * (math.log(2.0 * kappa)
                         + specfun.digamma_real(1.0 - beta)
                         - specfun.PSI_ONE - specfun.PSI_TWO) - kappa
        return 1.0, -1.0, mix

    return CustomPotential(
        v=lambda x: -e2 / abs(x),
        frobenius=FrobeniusData(1.0, 0.0, log_case=True),
        v1=-e2,
        hbar=hbar, m=m,
        lp_check_x=5.0 * hbar**2 / (m * abs(e2)),
        length_scale=hbar**2 / (m * abs(e2)),
        name="coulomb",
        reference_amplitudes=ref_amps,
    )


def oscillator_potential(model) -> CustomPotential:
    """Descriptor of V = (m w^2/2) x^2 + g/x^2 with the Kummer reference modes."""
    om, g, hbar, m = model.omega, model.g, model.hbar, model.m
    a = model.a
    s = math.sqrt(m * om / hbar)
    s1, s2 = a + 0.5, 0.5 - a

    def ref_amps(E_ref: float) -> tuple[float, float, float]:
        return s ** (s1 - 1.0), s**s2 / (model.c2 - model.c1), 0.0

    return CustomPotential(
        v=lambda x: 0.5 * m * om**2 * x * x + g / (x * x),
        frobenius=FrobeniusData(s1, s2),
        v2=g,
        v0_curv=0.5 * m * om**2,
        hbar=hbar, m=m,
        lp_check_x=5.0 / s,
        length_scale=1.0 / s,
        name="oscinv",
        reference_amplitudes=ref_amps,
    )


def load_custom_potential(source) -> CustomPotential:
    """Build a CustomPotential from a JSON descriptor (path, text or dict).

    Two forms are accepted.  A registry expression selects a built-in
    analytic family:

        {"type": "custom", "expression": "oscinv_perturbed",
         "params": {"a": 0.75, "omega": 1.0, "amp": 0.1, "width": 1.0},
         "window": [-4.0, 7.0], "ref_energy": 0.35}

    (expressions: "coulomb", "oscinv", "oscinv_perturbed"), or raw samples
    of V on the positive half line with declared singular data:

        {"type": "custom",
         "frobenius": {"s1": 1.25, "s2": -0.25, "log_flag": false},
         "taylor": {"v2": 0.15625, "v1": 0.0, "v0": 0.0,
                    "v0_slope": 0.0, "v0_curv": 0.5},
         "samples": [[x1, V1], [x2, V2], ...],
         "window": [lo, hi], "ref_energy": 0.35}

    Sampled potentials are cubic-interpolated in |x| between the first and
    last sample; inside the first sample the declared singular + Taylor
    data take over.
    """
    import json
    import os

    if isinstance(source, dict):
        obj = source
    elif isinstance(source, str) and os.path.exists(source):
        with open(source) as fh:
            obj = json.load(fh)
    else:
        obj = json.loads(source)
    if obj.get("type", "custom") != "custom":
        raise ValueError("descriptor type must be 'custom'")
    hbar = float(obj.get("hbar", 1.0))
    m = float(obj.get("m", 1.0))
    window = tuple(obj["window"]) if "window" in obj else None
    ref_energy = float(obj["ref_energy"]) if "ref_energy" in obj else None

    expr = obj.get("expression")
    if expr is not None:
        from .coulomb import CoulombModel
        from .oscillator import OscillatorModel

        params = obj.get("params", {})
        if expr == "coulomb":
            pot = coulomb_potential(CoulombModel(
                e2=float(params.get("e2", 1.0)), hbar=hbar, m=m))
        elif expr in ("oscinv", "oscinv_perturbed"):
            omega = float(params.get("omega", 1.0))
            if "a" in params:
                om = OscillatorModel.from_a(float(params["a"]), omega=omega,
                                            hbar=hbar, m=m)
            else:
                om = OscillatorModel(omega=omega, g=float(params.get("g", 0.15625)),
                                     hbar=hbar, m=m)
            if expr == "oscinv":
                pot = oscillator_potential(om)
            else:
                pot = perturbed_oscillator_potential(
                    om, amp=float(params.get("amp", 0.1)),
                    width=float(params.get("width", 1.0)))
        else:
            raise ValueError(f"unknown expression {expr!r}")
        pot.default_window = window
        pot.default_ref_energy = ref_energy
        return pot

    if "samples" not in obj:
        raise ValueError("custom descriptor needs 'expression' or 'samples'")
    from scipy.interpolate import CubicSpline

    fb = obj["frobenius"]
    taylor = obj.get("taylor", {})
    v2 = float(taylor.get("v2", 0.0))
    v1 = float(taylor.get("v1", 0.0))
    v0 = float(taylor.get("v0", 0.0))
    v0_slope = float(taylor.get("v0_slope", 0.0))
    v0_curv = float(taylor.get("v0_curv", 0.0))
    pts = sorted((float(x), float(val)) for x, val in obj["samples"])
    xs = np.array([p[0] for p in pts])
    vs = np.array([p[1] for p in pts])
    if xs[0] <= 0.0:
        raise ValueError("samples must lie on the positive half line")
    spline = CubicSpline(xs, vs)
    x_in = float(xs[0])

    def v(x: float) -> float:
        ax = abs(x)
        if ax < x_in:
            return (v2 / (ax * ax) + v1 / ax + v0 + v0_slope * ax
                    + v0_curv * ax * ax)
        return float(spline(ax))

    return CustomPotential(
        v=v,
        frobenius=FrobeniusData(float(fb["s1"]), float(fb["s2"]),
                                bool(fb.get("log_flag", False))),
        v2=v2, v1=v1, v0=v0, v0_slope=v0_slope, v0_curv=v0_curv,
        hbar=hbar, m=m,
        lp_check_x=float(obj.get("lp_check_x", xs[-1] * 0.5)),
        length_scale=float(obj.get("length_scale", 1.0)),
        name=str(obj.get("name", "custom")),
        default_window=window,
        default_ref_energy=ref_energy,
    )


def perturbed_oscillator_potential(model, amp: float = 0.1,
                                   width: float = 1.0) -> CustomPotential:
    """Oscillator + inverse-square core + a smooth even bump
    amp * hbar * omega * exp(-(x/width)^2); no closed form exists for it."""
    om, g, hbar, m = model.omega, model.g, model.hbar, model.m
    a = model.a
    s = math.sqrt(m * om / hbar)
    bump = amp * hbar * om

    return CustomPotential(
        v=lambda x: 0.5 * m * om**2 * x * x + g / (x * x)
        + bump * math.exp(-((x / width) ** 2)),
        frobenius=FrobeniusData(a + 0.5, 0.5 - a),
        v2=g,
        v0=bump,
        v0_curv=0.5 * m * om**2 - bump / width**2,
        hbar=hbar, m=m,
        lp_check_x=5.0 / s,
        length_scale=1.0 / s,
        name="oscinv_perturbed",
    )

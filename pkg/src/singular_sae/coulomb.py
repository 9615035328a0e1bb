"""One-dimensional hydrogen atom V(x) = -e^2/|x|.

Bound states at energy E < 0 are built from the irregular Whittaker function
on each half line; the boundary vectors against the Whittaker reference
modes at a fixed reference energy are proportional, Psi' = xi * Psi, with

    sigma = 1/Gamma(1 - alpha),
    xi    = (2 m e^2 / hbar^2) [ln(alpha/beta) - psi(1-alpha) + psi(1-beta)],

alpha, beta the Coulomb quantum numbers of E and of the reference energy.
Bound levels on an eigenphase branch theta solve
sin(theta/2) + L0 xi(E) cos(theta/2) = 0; the theta = pi (Friedrichs-type)
branch instead needs sigma = 0, i.e. alpha = 1, 2, ...

For E_k > 0 the module computes the transmission/reflection pair (T, R) for
an arbitrary extension, both from the closed form in the eigenphase angles
and by solving the 2x2 connection-condition system directly (the two routes
are kept independent so they can cross-check each other).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import PoleError, WindowTooSmall
from .results import Level, ScatteringResult, SpectrumResult, merge_levels
from .rootfind import roots_in_bracket
from .u2ext import ExtensionSpec, recompose, scale_of, spectral_condition

_PI = math.pi


@dataclass(frozen=True)
class CoulombModel:
    """Coupling e^2 (negative = repulsive) plus hbar and mass."""

    e2: float = 1.0
    hbar: float = 1.0
    m: float = 1.0

    def __post_init__(self):
        if self.hbar <= 0.0 or self.m <= 0.0:
            raise ValueError("hbar and m must be positive")
        if self.e2 == 0.0:
            raise ValueError("e2 must be nonzero")

    @property
    def kappa_b(self) -> float:
        """Inverse Bohr-like length m e^2 / hbar^2 (signed with e2)."""
        return self.m * self.e2 / self.hbar**2

    @property
    def energy_scale(self) -> float:
        """m e^4 / hbar^2 (positive)."""
        return self.m * self.e2**2 / self.hbar**2

    def alpha_of(self, E: float) -> float:
        if E >= 0.0:
            raise ValueError("bound channel requires E < 0")
        return (self.e2 / self.hbar) * math.sqrt(-self.m / (2.0 * E))

    def energy_of_alpha(self, alpha: float) -> float:
        return -self.energy_scale / (2.0 * alpha**2)

    def eta_of(self, E: float) -> float:
        return math.sqrt(-2.0 * self.m * E) / self.hbar

    def to_json(self) -> dict:
        return {"type": "coulomb", "e2": self.e2, "hbar": self.hbar, "m": self.m}


@dataclass(frozen=True)
class BoundChannel:
    """Bound-state channel data at E < 0."""

    E: float
    alpha: float
    eta: float

    @classmethod
    def from_energy(cls, E: float, model: CoulombModel) -> "BoundChannel":
        return cls(E=E, alpha=model.alpha_of(E), eta=model.eta_of(E))


@dataclass(frozen=True)
class ScatterChannel:
    """Scattering channel data at E_k > 0."""

    E_k: float
    k: float
    gamma: float
    eta0: float

    @classmethod
    def from_energy(cls, E_k: float, model: CoulombModel) -> "ScatterChannel":
        if E_k <= 0.0:
            raise ValueError("scattering requires E_k > 0")
        k = math.sqrt(2.0 * model.m * E_k) / model.hbar
        g = -(model.e2 / model.hbar) * math.sqrt(model.m / (2.0 * E_k))
        return cls(E_k=E_k, k=k, gamma=g, eta0=coulomb_phase(g))


def sigma_bound(ch: BoundChannel) -> float:
    """sigma = 1/Gamma(1 - alpha); exactly zero at alpha = 1, 2, ..."""
    return specfun.rgamma_real(1.0 - ch.alpha)


def _xi_from_alphas(alpha: float, beta: float, model: CoulombModel) -> float:
    # The digamma combination plus the x-linear cross terms of the
    # exp(-eta x) / exp(-kappa x) prefactors of the state and of the
    # irregular reference mode: those contribute (kappa - eta), i.e.
    # kappa_b*(1/beta - 1/alpha).  Dropping them would desynchronize this
    # closed form from the Wronskians the ODE engine actually measures.
    return 2.0 * model.kappa_b * (
        math.log(alpha / beta)
        - specfun.digamma_real(1.0 - alpha)
        + specfun.digamma_real(1.0 - beta)
    ) + model.kappa_b * (1.0 / beta - 1.0 / alpha)


def _near_positive_integer(x: float, tol: float) -> bool:
    return x >= 0.5 and abs(x - round(x)) < tol


def xi_bound(ch: BoundChannel, ref_E: float, model: CoulombModel) -> float:
    """Proportionality xi with Psi' = xi * Psi, for reference energy ref_E < 0.

    xi = (2 m e^2/hbar^2) [ln(alpha/beta) - psi(1-alpha) + psi(1-beta)]
         + kappa - eta,

    the exact x -> +0 Wronskian ratio for the Whittaker reference modes at
    ref_E (kappa, beta) against the bound solution at E (eta, alpha).
    Poles sit exactly at alpha in {1, 2, ...} (digamma poles); xi vanishes
    at E = ref_E.  A reference energy whose own beta is a positive integer
    makes the reference-mode pair degenerate (the regular and irregular
    Whittaker functions become proportional) and is rejected the same way.
    """
    if ref_E >= 0.0:
        raise ValueError("ref_E must be negative")
    beta = model.alpha_of(ref_E)
    if _near_positive_integer(ch.alpha, 1e-9):
        raise PoleError(f"xi pole at alpha = {ch.alpha}")
    if _near_positive_integer(beta, 1e-9):
        raise PoleError(f"degenerate reference modes at beta = {beta}")
    return _xi_from_alphas(ch.alpha, beta, model)


def coulomb_phase(gamma: float) -> float:
    """s-wave Coulomb phase arg Gamma(1 + i*gamma), continuous through 0."""
    if gamma == 0.0:
        return 0.0
    return specfun.ln_gamma(complex(1.0, gamma)).imag


def gamma1_abs(gamma: float) -> float:
    """|Gamma(1 + i*gamma)| = sqrt(pi*gamma / sinh(pi*gamma))."""
    x = _PI * gamma
    if x == 0.0:
        return 1.0
    return math.sqrt(x / math.sinh(x))


def scatter_f(E: float, model: CoulombModel) -> complex:
    """f(s) = 2 ln gamma(s) - psi(1 - i gamma(s)) - psi(1 + i gamma(s)).

    Complex-valued (the log picks up i*pi for attractive coupling); only
    differences of f at two energies are physical and those are real.
    """
    if E <= 0.0:
        raise ValueError("scatter_f requires E > 0")
    g = -(model.e2 / model.hbar) * math.sqrt(model.m / (2.0 * E))
    return (
        2.0 * cmath.log(complex(g))
        - specfun.digamma(complex(1.0, -g))
        - specfun.digamma(complex(1.0, g))
    )


def rho_factor(ref_E: float, E_k: float, model: CoulombModel) -> float:
    """rho = (m e^2/hbar^2) [f(ref_E) - f(E_k)], evaluated in a real form."""
    if ref_E <= 0.0 or E_k <= 0.0:
        raise ValueError("rho_factor requires positive energies")
    if ref_E == E_k:
        return 0.0

    def gam(E):
        return -(model.e2 / model.hbar) * math.sqrt(model.m / (2.0 * E))

    gr, gk = gam(ref_E), gam(E_k)
    # psi(1-ig) + psi(1+ig) = 2 Re psi(1+ig); ln-ratio of same-sign gammas is real
    fr = 2.0 * math.log(gr / gk)
    fr -= 2.0 * specfun.digamma(complex(1.0, gr)).real
    fr += 2.0 * specfun.digamma(complex(1.0, gk)).real
    return model.kappa_b * fr


def omega_factor(ch: ScatterChannel, rho: float) -> complex:
    """omega = k e^(-pi*gamma/2) |Gamma(1+i gamma)|^2 + i rho e^(pi*gamma/2)."""
    g = ch.gamma
    mod2 = gamma1_abs(g) ** 2
    return complex(ch.k * math.exp(-_PI * g / 2.0) * mod2,
                   rho * math.exp(_PI * g / 2.0))


def _chi_of(theta: float, L0: float, omega: complex) -> float:
    """Half phase shift of one eigenphase branch: chi = -arg(1 + i*omega*L).

    L = L0*cot(theta/2); the theta = 0 branch takes the L -> +inf limit
    -arg(i*omega), and theta = pi (L = 0) gives chi = 0.  The sign makes the
    closed form below identical to the direct solve of the connection
    condition.
    """
    L = scale_of(theta % (2.0 * _PI), L0)
    if L == 0.0:
        return 0.0
    if math.isinf(L):
        w = 1j * omega if L > 0 else -1j * omega
    else:
        w = 1.0 + 1j * omega * L
    return -cmath.phase(w)


def scattering(model: CoulombModel, spec: ExtensionSpec, E_k: float,
               ref_E: float | None = None) -> ScatteringResult:
    """(T, R) from the closed form in (chi_pm, mu, nu).

    ref_E defaults to E_k, which sets rho = 0; any other positive reference
    energy shifts omega through rho (the reference-mode dependence the
    connection scheme leaves open).
    """
    ch = ScatterChannel.from_energy(E_k, model)
    rho = 0.0 if (ref_E is None or ref_E == E_k) else rho_factor(ref_E, E_k, model)
    omega = omega_factor(ch, rho)
    chi_p = _chi_of(spec.theta_plus, spec.L0, omega)
    chi_m = _chi_of(spec.theta_minus, spec.L0, omega)
    pre = -cmath.exp(1j * (2.0 * ch.eta0 + chi_p + chi_m))
    delta = chi_p - chi_m
    t = pre * 1j * math.sin(delta) * math.sin(spec.mu) * cmath.exp(-1j * spec.nu)
    r = pre * (math.cos(delta) - 1j * math.sin(delta) * math.cos(spec.mu))
    return ScatteringResult(k=ch.k, T=t, R=r)


def scattering_matrix_form(model: CoulombModel, u: np.ndarray, L0: float,
                           E_k: float, ref_E: float | None = None
                           ) -> ScatteringResult:
    """(T, R) by direct linear solve of the connection-condition system

        [(U-I) - omega L0 (U+I)] (T,R)^T =
            -e^(2 i eta0) [(U-I) + conj(omega) L0 (U+I)] (0,1)^T.

    Independent of the closed form above; used as its cross-check.
    """
    ch = ScatterChannel.from_energy(E_k, model)
    rho = 0.0 if (ref_E is None or ref_E == E_k) else rho_factor(ref_E, E_k, model)
    omega = omega_factor(ch, rho)
    u = np.asarray(u, dtype=complex)
    eye = np.eye(2, dtype=complex)
    lhs = (u - eye) - omega * L0 * (u + eye)
    rhs = -cmath.exp(2j * ch.eta0) * ((u - eye) + omega.conjugate() * L0 * (u + eye)) @ np.array([0.0, 1.0])
    t, r = np.linalg.solve(lhs, rhs)
    return ScatteringResult(k=ch.k, T=complex(t), R=complex(r))


def _branch_levels(model: CoulombModel, theta: float, L0: float, ref_E: float,
                   count: int, alpha_window: tuple[float, float]) -> list[float]:
    """Bound energies on one eigenphase branch, ascending."""
    theta = theta % (2.0 * _PI)
    attractive = model.e2 > 0.0
    if abs(theta - _PI) < 1e-12:
        # Friedrichs-type branch: Psi = 0, so sigma = 0, alpha = 1, 2, ...
        if not attractive:
            return []
        return [model.energy_of_alpha(float(n)) for n in range(1, count + 1)]

    beta = model.alpha_of(ref_E)

    def w_of_alpha(a: float) -> float:
        try:
            xi = _xi_from_alphas(a, beta, model)
        except PoleError:
            return math.nan
        return spectral_condition(theta, L0, xi)

    a_lo, a_hi = alpha_window
    roots: list[float] = []
    if attractive:
        cuts = [a_lo] + [float(n) for n in range(math.ceil(a_lo), math.floor(a_hi) + 1)
                         if a_lo < n < a_hi] + [a_hi]
        for lo, hi in zip(cuts, cuts[1:]):
            roots += roots_in_bracket(w_of_alpha, lo, hi, edge_rel=1e-8)
    else:
        roots += roots_in_bracket(w_of_alpha, a_lo, a_hi, n_sub=256, edge_rel=1e-8)
    return sorted(model.energy_of_alpha(a) for a in roots)


def bound_spectrum(model: CoulombModel, spec: ExtensionSpec, ref_E: float,
                   count: int, E_window: tuple[float, float] | None = None
                   ) -> SpectrumResult:
    """Lowest `count` bound levels for the extension, branch-merged.

    Roots are bracketed in the alpha variable between consecutive poles of
    xi (alpha integer) and bisected to |dE/E| ~ 1e-12.  Coincident levels
    from the two branches are merged with degeneracy 2.  Raises
    WindowTooSmall when the search window holds fewer than `count` levels.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if ref_E >= 0.0:
        raise ValueError("ref_E must be negative")
    if E_window is not None:
        e_lo, e_hi = E_window
        if not (e_lo < e_hi < 0.0):
            raise ValueError("E_window must satisfy E_lo < E_hi < 0")
        if model.e2 > 0.0:
            alpha_window = (model.alpha_of(e_lo), model.alpha_of(e_hi))
        else:
            alpha_window = (model.alpha_of(e_hi), model.alpha_of(e_lo))
    else:
        if model.e2 > 0.0:
            alpha_window = (0.05, float(count) + 2.0)
        else:
            alpha_window = (-(float(count) + 2.0), -0.05)

    raw: list[tuple[float, str]] = []
    if spec.is_degenerate():
        for e in _branch_levels(model, spec.theta_plus, spec.L0, ref_E, count,
                                alpha_window):
            raw.append((e, "+"))
            raw.append((e, "-"))
    else:
        for label, theta in spec.branches:
            for e in _branch_levels(model, theta, spec.L0, ref_E, count,
                                    alpha_window):
                raw.append((e, label))
    if E_window is not None:
        raw = [t for t in raw if E_window[0] <= t[0] <= E_window[1]]
    levels = merge_levels(raw)
    if len(levels) < count:
        raise WindowTooSmall(
            f"found {len(levels)} levels, requested {count}; widen the window"
        )
    return SpectrumResult(
        levels=tuple(levels[:count]),
        model=model.to_json(),
        extension=spec.to_json(),
    )


def scattering_for_matrix(model: CoulombModel, u: np.ndarray, L0: float,
                          E_k: float, ref_E: float | None = None
                          ) -> ScatteringResult:
    """Closed-form scattering for a raw unitary (decomposes first)."""
    from .u2ext import decompose

    return scattering(model, decompose(u, L0), E_k, ref_E)


__all__ = [
    "CoulombModel", "BoundChannel", "ScatterChannel",
    "sigma_bound", "xi_bound", "coulomb_phase", "gamma1_abs", "scatter_f",
    "rho_factor", "omega_factor", "scattering", "scattering_matrix_form",
    "scattering_for_matrix", "bound_spectrum",
]

"""U(2) characteristic-matrix machinery.

A self-adjoint connection condition at the singular point is labelled by a
unitary 2x2 matrix U together with a length scale L0:

    (U - I) Psi + i L0 (U + I) Psi' = 0,

where Psi, Psi' are the boundary vectors of Wronskians against a fixed pair
of reference modes.  This module owns the eigen-decomposition of U into
(theta_plus, theta_minus, mu, nu), the scale parameters L = L0*cot(theta/2),
the residual of the connection condition, and the scalar spectral condition

    w = sin(theta/2) + L0 * xi * cos(theta/2)

whose roots (per eigenphase branch) are the bound states once a model
supplies its spectral function xi(E).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NotUnitaryError

UNITARITY_TOL = 1e-12

_TWO_PI = 2.0 * math.pi

SIGMA_1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class ExtensionSpec:
    """Eigenphase parameterization of a U(2) extension plus the length unit.

    theta_plus, theta_minus in [0, 2*pi); mu in [0, pi]; nu in [0, 2*pi);
    L0 > 0.  recompose() maps this back to U = V^-1 D V with
    D = diag(e^{i theta_plus}, e^{i theta_minus}) and
    V = exp(i mu sigma_2 / 2) exp(i nu sigma_3 / 2).
    """

    theta_plus: float
    theta_minus: float
    mu: float = 0.0
    nu: float = 0.0
    L0: float = 1.0

    def __post_init__(self):
        for name in ("theta_plus", "theta_minus", "nu"):
            v = getattr(self, name)
            if not 0.0 <= v < _TWO_PI + 1e-15:
                raise ValueError(f"{name} = {v} outside [0, 2*pi)")
        if not 0.0 <= self.mu <= math.pi + 1e-15:
            raise ValueError(f"mu = {self.mu} outside [0, pi]")
        if not self.L0 > 0.0:
            raise ValueError("L0 must be positive")

    @property
    def branches(self) -> tuple[tuple[str, float], tuple[str, float]]:
        return (("+", self.theta_plus), ("-", self.theta_minus))

    def is_degenerate(self, tol: float = 1e-12) -> bool:
        d = abs(
            cmath.exp(1j * self.theta_plus) - cmath.exp(1j * self.theta_minus)
        )
        return d < tol

    def to_json(self) -> dict:
        return {
            "theta_plus": self.theta_plus,
            "theta_minus": self.theta_minus,
            "mu": self.mu,
            "nu": self.nu,
            "L0": self.L0,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ExtensionSpec":
        return cls(
            theta_plus=float(obj["theta_plus"]),
            theta_minus=float(obj["theta_minus"]),
            mu=float(obj.get("mu", 0.0)),
            nu=float(obj.get("nu", 0.0)),
            L0=float(obj.get("L0", 1.0)),
        )


@dataclass(frozen=True)
class BoundaryPair:
    """Boundary vectors: Wronskians of a state against the reference modes.

    psi        -- (W[psi, phi1]_{+0}, W[psi, phi1]_{-0})
    psi_prime  -- (W[psi, phi2]_{+0}, -W[psi, phi2]_{-0})
    """

    psi: np.ndarray
    psi_prime: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.psi, dtype=complex).reshape(2)
        q = np.asarray(self.psi_prime, dtype=complex).reshape(2)
        if not (np.all(np.isfinite(p.view(float))) and np.all(np.isfinite(q.view(float)))):
            raise ValueError("boundary vectors must be finite")
        object.__setattr__(self, "psi", p)
        object.__setattr__(self, "psi_prime", q)


@dataclass(frozen=True)
class ScaleParams:
    """Scale parameters L_pm = L0 * cot(theta_pm / 2); +inf at theta = 0."""

    l_plus: float
    l_minus: float


def validate_unitary(u: np.ndarray, tol: float = UNITARITY_TOL) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise NotUnitaryError(f"expected a 2x2 matrix, got shape {u.shape}")
    defect = np.max(np.abs(u.conj().T @ u - IDENTITY))
    if defect >= tol:
        raise NotUnitaryError(f"unitarity defect {defect:.3e} exceeds {tol:.1e}")
    return u


def matrix_to_json(u: np.ndarray) -> list:
    """Row-major list of four [re, im] pairs."""
    u = np.asarray(u, dtype=complex)
    return [[float(v.real), float(v.imag)] for v in u.reshape(4)]


def matrix_from_json(entries) -> np.ndarray:
    vals = [complex(re, im) for re, im in entries]
    return np.array(vals, dtype=complex).reshape(2, 2)


def _principal_phase(lam: complex) -> float:
    """Argument of a unimodular eigenvalue folded into [0, 2*pi)."""
    p = cmath.phase(lam)
    if p < 0.0:
        p += _TWO_PI
    if p >= _TWO_PI - 1e-15:
        p = 0.0
    return p


def decompose(u: np.ndarray, L0: float = 1.0, *,
              degeneracy_tol: float = 1e-12) -> ExtensionSpec:
    """Eigen-decompose a unitary U into an ExtensionSpec.

    Eigenphases are sorted ascending in [0, 2*pi) (theta_plus <= theta_minus
    when distinct).  Degenerate U is canonicalized to mu = nu = 0; diagonal U
    gets mu = 0 (or mu = pi when the sort swaps the diagonal order).
    """
    u = validate_unitary(u)
    lam, vec = np.linalg.eig(u)
    p0, p1 = _principal_phase(lam[0]), _principal_phase(lam[1])
    if abs(lam[0] - lam[1]) < degeneracy_tol:
        theta = _principal_phase((lam[0] + lam[1]) / 2.0)
        return ExtensionSpec(theta, theta, 0.0, 0.0, L0)
    if p0 <= p1:
        theta_p, theta_m = p0, p1
        v = vec[:, 0]
    else:
        theta_p, theta_m = p1, p0
        v = vec[:, 1]
    v = v / np.linalg.norm(v)
    a0, a1 = abs(v[0]), abs(v[1])
    mu = 2.0 * math.atan2(a1, a0)
    if a0 < 1e-13:
        # plus-eigenvector is e_2: swapped-diagonal U; nu is unphysical here
        return ExtensionSpec(theta_p, theta_m, math.pi, 0.0, L0)
    v = v * (v[0].conjugate() / a0)       # fix overall phase: v[0] real > 0
    nu = cmath.phase(v[1]) if a1 > 1e-13 else 0.0
    if nu < 0.0:
        nu += _TWO_PI
    if nu >= _TWO_PI - 1e-15:
        nu = 0.0
    return ExtensionSpec(theta_p, theta_m, mu, nu, L0)


def recompose(spec: ExtensionSpec) -> np.ndarray:
    """U = V^-1 D V for the stored angles."""
    c = math.cos(spec.mu / 2.0)
    s = math.sin(spec.mu / 2.0)
    rot = np.array([[c, s], [-s, c]], dtype=complex)
    ph = np.diag([cmath.exp(1j * spec.nu / 2.0), cmath.exp(-1j * spec.nu / 2.0)])
    v = rot @ ph
    d = np.diag([cmath.exp(1j * spec.theta_plus), cmath.exp(1j * spec.theta_minus)])
    return v.conj().T @ d @ v


def scale_params(spec: ExtensionSpec) -> ScaleParams:
    return ScaleParams(scale_of(spec.theta_plus, spec.L0),
                       scale_of(spec.theta_minus, spec.L0))


def scale_of(theta: float, L0: float) -> float:
    """L = L0 * cot(theta/2); +inf at theta = 0, 0 at theta = pi."""
    if abs(theta) < 1e-15 or abs(theta - _TWO_PI) < 1e-15:
        return math.inf
    if abs(theta - math.pi) < 1e-15:
        return 0.0
    t = math.tan(theta / 2.0)
    if t == 0.0:
        return math.inf
    return L0 / t


def connection_residual(u: np.ndarray, bp: BoundaryPair, L0: float) -> np.ndarray:
    """(U - I) Psi + i L0 (U + I) Psi'; zero iff the state is in the domain."""
    u = np.asarray(u, dtype=complex)
    return (u - IDENTITY) @ bp.psi + 1j * L0 * (u + IDENTITY) @ bp.psi_prime


def spectral_condition(theta: float, L0: float, xi: float) -> float:
    """w = sin(theta/2) + L0 * xi * cos(theta/2).

    Roots in the energy variable (through xi(E)) are the bound states on the
    eigenphase-theta branch.  The sin/cos form stays finite at theta = 0 and
    theta = pi where L = L0*cot(theta/2) degenerates.
    """
    return math.sin(theta / 2.0) + L0 * xi * math.cos(theta / 2.0)


def is_separated(u: np.ndarray, tol: float = 1e-12) -> bool:
    """True iff U is diagonal to tolerance (two decoupled half lines)."""
    u = validate_unitary(u)
    return bool(abs(u[0, 1]) < tol and abs(u[1, 0]) < tol)


def named_extension(name: str, L0: float = 1.0) -> ExtensionSpec:
    """Named extensions used by the CLI and tests: I, -I, sx, diag:a,b."""
    key = name.strip()
    if key in ("I", "+I", "id"):
        return ExtensionSpec(0.0, 0.0, 0.0, 0.0, L0)
    if key == "-I":
        return ExtensionSpec(math.pi, math.pi, 0.0, 0.0, L0)
    if key in ("sx", "sigma1", "free"):
        return ExtensionSpec(0.0, math.pi, math.pi / 2.0, 0.0, L0)
    if key.startswith("diag:"):
        parts = key[5:].split(",")
        if len(parts) != 2:
            raise ValueError("diag extension needs two angles: diag:a,b")
        a, b = (float(p) % _TWO_PI for p in parts)
        if a <= b:
            return ExtensionSpec(a, b, 0.0, 0.0, L0)
        return ExtensionSpec(b, a, math.pi, 0.0, L0)
    raise ValueError(f"unknown extension name {name!r}")

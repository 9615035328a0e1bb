"""Shared result containers for spectra and scattering tables."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Level:
    """One bound-state level.

    E          -- energy (model units)
    lam        -- dimensionless E/(hbar*omega) when the model defines one
    branch     -- '+' or '-' eigenphase branch that produced the root
    degeneracy -- 1, or 2 when both branches coincide on the level
    """

    E: float
    branch: str
    degeneracy: int = 1
    lam: float | None = None


@dataclass(frozen=True)
class SpectrumResult:
    levels: tuple[Level, ...]
    model: dict = field(default_factory=dict)
    extension: dict = field(default_factory=dict)

    @property
    def energies(self) -> list[float]:
        return [lv.E for lv in self.levels]

    @property
    def lambdas(self) -> list[float | None]:
        return [lv.lam for lv in self.levels]


@dataclass(frozen=True)
class ScatteringResult:
    """Transmission/reflection amplitudes at one wavenumber."""

    k: float
    T: complex
    R: complex

    @property
    def unitarity_defect(self) -> float:
        return abs(abs(self.T) ** 2 + abs(self.R) ** 2 - 1.0)


def merge_levels(raw: list[tuple[float, str]], rel_tol: float = 1e-9,
                 lam_of=None) -> list[Level]:
    """Sort (E, branch) pairs ascending and merge coincident levels.

    Two levels within rel_tol (relative, with an absolute floor) collapse to
    one entry with degeneracy 2.
    """
    out: list[Level] = []
    for e, branch in sorted(raw, key=lambda t: t[0]):
        if out:
            prev = out[-1]
            scale = max(abs(prev.E), abs(e), 1e-30)
            if abs(e - prev.E) <= rel_tol * scale + 1e-300:
                out[-1] = Level(
                    E=prev.E,
                    branch=prev.branch,
                    degeneracy=2,
                    lam=prev.lam,
                )
                continue
        out.append(Level(E=e, branch=branch,
                         lam=None if lam_of is None else lam_of(e)))
    return out

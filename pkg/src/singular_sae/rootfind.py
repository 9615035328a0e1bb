"""Bracketing and bisection helpers for the transcendental spectral conditions.

The spectral functions xi(E) of the models are sawtooth-like: monotone
between consecutive poles, sweeping the whole real line on each interval.
Root finding therefore works bracket by bracket.  Inside a bracket the
spectral condition w(E) is sampled on a subgrid whose points crowd both
edges geometrically (roots migrate toward a pole as the eigenphase
approaches pi), every sign change is bisected, and bisection limits that
are really pole jumps of w are rejected by a residual test.
"""

from __future__ import annotations

import math
from collections.abc import Callable


def edge_weighted_subgrid(a: float, b: float, n: int = 64,
                          edge_rel: float = 1e-10) -> list[float]:
    """n points in (a, b): geometric stacks toward both edges + uniform middle."""
    if not b > a:
        raise ValueError("empty bracket")
    span = b - a
    n_edge = n // 4
    n_mid = n - 2 * n_edge
    ratio = (0.25 / edge_rel) ** (1.0 / max(n_edge - 1, 1))
    pts = []
    f = edge_rel
    for _ in range(n_edge):
        pts.append(a + span * f)
        pts.append(b - span * f)
        f *= ratio
    for i in range(n_mid):
        pts.append(a + span * (0.3 + 0.4 * (i + 0.5) / n_mid))
    return sorted(set(pts))


def bisect(f: Callable[[float], float], a: float, b: float, fa: float,
           fb: float, *, rel_tol: float = 1e-12, max_iter: int = 200) -> float:
    """Plain bisection on a sign-changing bracket; returns the midpoint."""
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if math.copysign(1.0, fa) == math.copysign(1.0, fb):
        raise ValueError("bracket does not change sign")
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        if (b - a) <= rel_tol * max(abs(a), abs(b), 1e-30):
            return m
        fm = f(m)
        if not math.isfinite(fm):
            return m
        if fm == 0.0:
            return m
        if math.copysign(1.0, fm) == math.copysign(1.0, fa):
            a, fa = m, fm
        else:
            b, fb = m, fm
    return 0.5 * (a + b)


def roots_in_bracket(f: Callable[[float], float], a: float, b: float, *,
                     n_sub: int = 64, rel_tol: float = 1e-12,
                     max_iter: int = 200, residual_ratio: float = 1e-2,
                     edge_rel: float = 1e-10,
                     grid: list[float] | None = None) -> list[float]:
    """All accepted roots of f inside the open bracket (a, b).

    The bracket is sampled on an edge-weighted subgrid (or a caller-supplied
    grid).  A converged bisection point is accepted as a root only if |f|
    there is small compared to the sampled values at its subgrid cell edges,
    which discards sign changes caused by a pole of f inside the cell.
    """
    if grid is None:
        grid = edge_weighted_subgrid(a, b, n_sub, edge_rel=edge_rel)
    vals = [f(x) for x in grid]
    roots = []
    for (x0, f0), (x1, f1) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
        if not (math.isfinite(f0) and math.isfinite(f1)):
            continue
        if f0 == 0.0:
            roots.append(x0)
            continue
        if math.copysign(1.0, f0) != math.copysign(1.0, f1):
            r = bisect(f, x0, x1, f0, f1, rel_tol=rel_tol, max_iter=max_iter)
            fr = f(r)
            if abs(fr) <= residual_ratio * (abs(f0) + abs(f1)):
                roots.append(r)
    return roots

"""Outward Numerov shooting for u'' + (2M/hbar^2)(E - V_eff(r)) u = 0.

Eigenvalues are located by bisection on the energy using the total number
of sign changes of the outward solution: below the n-th level the solution
has n nodes and diverges; just above it an extra node appears near r_max.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import _kernels
from .hulthen import (
    EigenResult,
    HulthenParams,
    Method,
    QuantumState,
    energy_closed,
    v_effective,
)

DEFAULT_R_MIN = 1e-6
DEFAULT_POINTS = 40001
DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class RadialGrid:
    r_min: float
    r_max: float
    points: int

    def __post_init__(self):
        if not self.r_min > 0:
            raise ValueError("r_min must be positive")
        if not self.r_max > self.r_min:
            raise ValueError("r_max must exceed r_min")
        if self.points < 3:
            raise ValueError("need at least 3 grid points")

    @property
    def h(self) -> float:
        return (self.r_max - self.r_min) / (self.points - 1)

    @property
    def r(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.points)

    def refined(self) -> "RadialGrid":
        """Same span with the spacing halved."""
        return RadialGrid(self.r_min, self.r_max, 2 * self.points - 1)

    @classmethod
    def for_energy(cls, energy: float, M: float = 1.0, hbar: float = 1.0,
                   points: int = DEFAULT_POINTS, r_min: float = DEFAULT_R_MIN):
        """Grid reaching 40 decay lengths past the origin (at least r = 50)."""
        kappa = math.sqrt(-2.0 * M * energy) / hbar if energy < 0 else 0.0
        r_max = max(50.0, 40.0 / kappa) if kappa > 0 else 50.0
        return cls(r_min, r_max, points)


class OutwardSolution(NamedTuple):
    r: np.ndarray
    u: np.ndarray
    nodes: int
    rescales: int


Potential = Callable[[np.ndarray], np.ndarray]


def integrate_outward(potential: Potential, l: int, E: float, grid: RadialGrid,
                      M: float = 1.0, hbar: float = 1.0) -> OutwardSolution:
    """Numerov integration from r_min with regular small-r behaviour.

    ``potential`` is the full effective potential (centrifugal part included).
    The start uses u ~ r^{l+1} (1 + c r), where c = (M/hbar^2) r V_0 / (l+1)
    and r V_0 is the Coulomb-like residue of the potential at the origin once
    the exact centrifugal term is removed.
    """
    r = grid.r
    V = np.asarray(potential(r), dtype=float)
    if not np.all(np.isfinite(V)):
        raise ValueError("potential is not finite on the grid")
    k2 = (2.0 * M / hbar**2) * (E - V)

    r0 = r[0]
    cent0 = l * (l + 1) * hbar**2 / (2.0 * M * r0**2)
    c = (M / hbar**2) * r0 * (V[0] - cent0) / (l + 1)

    def start(x):
        return x ** (l + 1) * (1.0 + c * x)

    u, nodes, rescales = _kernels.numerov_outward(
        np.ascontiguousarray(k2), grid.h, start(r[0]), start(r[1])
    )
    return OutwardSolution(r, u, int(nodes), int(rescales))


def _count(potential, l, E, grid, M, hbar) -> int:
    return integrate_outward(potential, l, E, grid, M, hbar).nodes


def _bracket(potential, l, target, lo, hi, grid, M, hbar, max_widen=60):
    """Widen [lo, hi] (both negative) until the node count crosses ``target``."""
    for _ in range(max_widen):
        n_lo = _count(potential, l, lo, grid, M, hbar)
        n_hi = _count(potential, l, hi, grid, M, hbar)
        if n_lo <= target < n_hi:
            return lo, hi
        if n_lo > target:
            lo *= 2.0
        if n_hi <= target:
            hi *= 0.5
    return None


def eigenvalue_numerov(
    potential: Potential,
    l: int,
    target_nodes: int,
    E_bracket: tuple[float, float],
    grid: RadialGrid,
    tol: float = DEFAULT_TOL,
    M: float = 1.0,
    hbar: float = 1.0,
    method: Method = Method.NUMEROV_TRUE,
) -> EigenResult:
    """Bisect E until the node count steps from ``target_nodes`` to one more.

    The bracket is widened geometrically when it does not straddle the
    transition. A failed search comes back with ``bound=False`` and
    ``meta["found"] = False`` instead of raising.
    """
    lo, hi = sorted(E_bracket)
    if not hi < 0:
        raise ValueError("energy bracket must lie below zero")
    if not tol > 0:
        raise ValueError("tol must be positive")
    br = _bracket(potential, l, target_nodes, lo, hi, grid, M, hbar)
    meta = {"grid_points": grid.points, "r_max": grid.r_max, "target_nodes": target_nodes}
    if br is None:
        meta["found"] = False
        return EigenResult(math.nan, method, bound=False, meta=meta)
    lo, hi = br
    iterations = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if _count(potential, l, mid, grid, M, hbar) <= target_nodes:
            lo = mid
        else:
            hi = mid
        iterations += 1
    E = 0.5 * (lo + hi)
    meta.update(found=True, iterations=iterations, width=hi - lo)
    return EigenResult(E, method, bound=True, meta=meta)


def hulthen_potential(p: HulthenParams, l: int, approx: bool) -> Potential:
    return lambda r: v_effective(r, p, l, approx)


def solve_state(
    state: QuantumState,
    p: HulthenParams,
    approx: bool = False,
    points: int = DEFAULT_POINTS,
    tol: float = DEFAULT_TOL,
    r_min: float = DEFAULT_R_MIN,
) -> EigenResult:
    """Numerov eigenvalue of a Hulthen state with default bracket and grid.

    The closed-form energy seeds the bracket [1.2 E, 0.8 E]; the grid is then
    rebuilt from the located energy and the search repeated on a narrow
    bracket so the box size matches the state's decay length.
    """
    method = Method.NUMEROV_APPROX if approx else Method.NUMEROV_TRUE
    pot = hulthen_potential(p, state.l, approx)
    seed = energy_closed(state, p)
    E0 = seed.energy if seed.bound and seed.energy < 0 else (
        -p.M * (p.Z * p.e**2) ** 2 / (2 * p.hbar**2 * state.principal**2) * 1e-3
    )
    grid = RadialGrid.for_energy(E0, p.M, p.hbar, points, r_min)
    first = eigenvalue_numerov(pot, state.l, state.n, (1.2 * E0, 0.8 * E0), grid,
                               tol, p.M, p.hbar, method)
    if not first.bound:
        return first
    E1 = first.energy
    grid = RadialGrid.for_energy(E1, p.M, p.hbar, points, r_min)
    res = eigenvalue_numerov(pot, state.l, state.n, (E1 * 1.001, E1 * 0.999), grid,
                             tol, p.M, p.hbar, method)
    res.meta["state"] = state.label
    return res

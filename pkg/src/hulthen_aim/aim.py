"""Asymptotic iteration method for y'' = lambda0(x) y' + s0(x) y.

The recurrence

    lambda_k = lambda_{k-1}' + s_{k-1} + lambda0 * lambda_{k-1}
    s_k      = s_{k-1}'      + s0 * lambda_{k-1}

is carried on Taylor jets at a single evaluation point, starting from
``lambda_{-1} = 1, s_{-1} = 0``. Each step consumes one derivative order, so
``k_max`` iterations need input jets of order ``k_max + 1``. Eigenvalues are
the zeros of ``delta_k = lambda_k s_{k-1} - lambda_{k-1} s_k`` as a function
of the energy parameter.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .jet import Jet

EvalJet = Callable[[float, int], Jet]

ROOT_RTOL = 1e-12
MERGE_RTOL = 1e-8
DEFAULT_GRID = 2000


class AimConvergenceWarning(UserWarning):
    """A root seen at the highest iteration never settled within tolerance."""


@dataclass(frozen=True)
class AimProblem:
    """``y'' = lambda0 y' + s0 y`` on an open interval.

    ``lambda0`` and ``s0`` map ``(point, order)`` to a :class:`Jet` centred at
    ``point``. When the problem is parameterised by an energy array the
    returned jets are batched over that array.
    """

    lambda0: EvalJet
    s0: EvalJet
    domain: tuple[float, float] = (-math.inf, math.inf)

    def contains(self, x: float) -> bool:
        lo, hi = self.domain
        return lo < x < hi


class TraceRow(NamedTuple):
    k: int
    lam: np.ndarray | float
    s: np.ndarray | float
    delta: np.ndarray | float


@dataclass
class AimTrace:
    """Values of lambda_k, s_k and delta_k at ``x0``.

    ``rows[0]`` is the k = 0 start (lambda0, s0) with ``delta_0 = -s0``, which
    follows from the ``lambda_{-1} = 1, s_{-1} = 0`` convention.
    """

    x0: float
    k_max: int
    rows: list[TraceRow] = field(default_factory=list)

    @property
    def delta(self):
        return self.rows[-1].delta

    def alpha(self, k: int):
        """The ratio s_k / lambda_k, which settles for large k."""
        row = self.rows[k]
        return np.asarray(row.s) / np.asarray(row.lam)

    def normalized_delta(self, k: int | None = None):
        """delta_k scaled by max(|lambda_k s_{k-1}|, |lambda_{k-1} s_k|)."""
        k = self.k_max if k is None else k
        if k < 1:
            raise ValueError("normalized delta needs k >= 1")
        cur, prev = self.rows[k], self.rows[k - 1]
        t1 = np.abs(np.asarray(cur.lam) * np.asarray(prev.s))
        t2 = np.abs(np.asarray(prev.lam) * np.asarray(cur.s))
        scale = np.maximum(t1, t2)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(scale > 0, np.asarray(cur.delta) / scale, 0.0)
        return float(out) if out.ndim == 0 else out


def aim_trace(problem: AimProblem, x0: float, k_max: int) -> AimTrace:
    """Run the AIM recurrence at ``x0`` up to iteration ``k_max``.

    ``k_max = 0`` is allowed and yields only the start row.
    """
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    if not problem.contains(x0):
        raise ValueError(f"x0={x0} lies outside the problem domain {problem.domain}")
    order = k_max + 1
    lam0 = problem.lambda0(x0, order)
    s0 = problem.s0(x0, order)
    for name, j in (("lambda0", lam0), ("s0", s0)):
        if j.center != float(x0) or j.order != order:
            raise ValueError(
                f"{name} returned a jet at ({j.center}, order {j.order}); "
                f"expected ({x0}, order {order})"
            )
    if np.any(np.asarray(lam0.value) == 0.0):
        raise ValueError(f"lambda0 vanishes at x0={x0}; AIM requires lambda0 != 0")

    def _val(j: Jet):
        return j.value

    trace = AimTrace(x0=float(x0), k_max=k_max)
    lam, s = lam0, s0
    trace.rows.append(TraceRow(0, _val(lam), _val(s), -np.asarray(_val(s)) + 0.0))
    for k in range(1, k_max + 1):
        m = lam.order - 1
        lam_next = lam.derivative() + s.truncate(m) + lam0.truncate(m) * lam.truncate(m)
        s_next = s.derivative() + s0.truncate(m) * lam.truncate(m)
        prev = trace.rows[-1]
        lv, sv = _val(lam_next), _val(s_next)
        delta = lv * np.asarray(prev.s) - np.asarray(prev.lam) * sv
        trace.rows.append(TraceRow(k, lv, sv, delta if np.ndim(delta) else float(delta)))
        lam, s = lam_next, s_next
    return trace


def _delta_on(family: Callable, energies: np.ndarray, x0: float, k: int) -> np.ndarray:
    trace = aim_trace(family(energies), x0, k)
    return np.broadcast_to(np.asarray(trace.delta, dtype=float), energies.shape)


def quantization_roots(
    family: Callable[[np.ndarray], AimProblem],
    x0: float,
    k: int,
    bracket: tuple[float, float],
    grid: int = DEFAULT_GRID,
) -> list[float]:
    """Energies where delta_k(x0) changes sign, ascending.

    ``family`` is called with a 1-D array of energies and must return a
    problem whose jets are batched over it. Sign changes on a uniform grid are
    refined by simultaneous bisection to relative width ``1e-12``.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not hi > lo:
        raise ValueError(f"empty energy bracket {bracket}")
    if grid < 2:
        raise ValueError("grid must have at least two points")
    if k < 0:
        raise ValueError("k must be >= 0")

    e = np.linspace(lo, hi, grid)
    d = _delta_on(family, e, x0, k)
    sign = np.sign(d)
    roots = list(e[sign == 0.0])
    cells = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    if cells.size:
        roots.extend(_bisect_all(family, x0, k, e[cells], e[cells + 1], sign[cells]))
    return _merge(sorted(roots))


def _bisect_all(family, x0, k, a, b, sign_a) -> list[float]:
    a, b = a.copy(), b.copy()
    for _ in range(200):
        width = b - a
        scale = np.maximum(np.abs(a), np.abs(b))
        if np.all(width <= ROOT_RTOL * np.where(scale > 0, scale, 1.0)):
            break
        mid = 0.5 * (a + b)
        # stop once floating point can no longer split an interval
        if np.all((mid == a) | (mid == b)):
            break
        sm = np.sign(_delta_on(family, mid, x0, k))
        exact = sm == 0.0
        left = (sm * sign_a) < 0
        b = np.where(left | exact, mid, b)
        a = np.where(left | exact, a, mid)
        a = np.where(exact, mid, a)
    return list(0.5 * (a + b))


def _merge(roots: list[float]) -> list[float]:
    merged: list[float] = []
    for r in roots:
        if merged and abs(r - merged[-1]) < MERGE_RTOL * (1.0 + abs(r)):
            continue
        merged.append(float(r))
    return merged


class StableRoot(NamedTuple):
    root: float
    k_stabilized: int
    k_first: int


def root_history(family, x0, k_lo: int, k_hi: int, bracket, grid: int = DEFAULT_GRID):
    """``{k: quantization_roots(..., k, ...)}`` for every k in [k_lo, k_hi]."""
    return {
        k: quantization_roots(family, x0, k, bracket, grid) for k in range(k_lo, k_hi + 1)
    }


def stable_from_history(history: dict[int, list[float]], tol: float) -> list[StableRoot]:
    """Roots present at the last iteration that persisted from an earlier k.

    Walking back from the last k, a root is followed through its nearest
    neighbour at each previous k while the step is within
    ``tol * max(1, |root|)``; round-off in delta_k grows with k roughly in
    proportion to the root's size. ``k_first`` is where the unbroken run
    starts and ``k_stabilized`` the first k whose change from the previous k
    was within tolerance (``k_first + 1``). The reported root is the value at
    ``k_stabilized``, the least contaminated by round-off. Roots with no such
    run trigger an :class:`AimConvergenceWarning` carrying the last two values.
    """
    ks = sorted(history)
    if len(ks) < 2:
        raise ValueError("need at least two iteration depths to judge stability")
    out: list[StableRoot] = []
    for r in history[ks[-1]]:
        first = ks[-1]
        chain = [r]
        for k in reversed(ks[:-1]):
            cand = history[k]
            if not cand:
                break
            near = min(cand, key=lambda c: abs(c - chain[-1]))
            if abs(near - chain[-1]) <= tol * max(1.0, abs(chain[-1])):
                first = k
                chain.append(near)
            else:
                break
        if first < ks[-1]:
            out.append(StableRoot(float(chain[-2]), first + 1, first))
            continue
        prev = history[ks[-2]]
        last = min(prev, key=lambda c: abs(c - r)) if prev else None
        warnings.warn(
            f"root near {r!r} not converged: k={ks[-2]} gave {last!r}, k={ks[-1]} gave {r!r}",
            AimConvergenceWarning,
            stacklevel=3,
        )
    return out


def stable_roots(
    family,
    x0: float,
    k_lo: int,
    k_hi: int,
    bracket,
    grid: int = DEFAULT_GRID,
    tol: float = 1e-9,
) -> list[StableRoot]:
    """Roots of delta_k that stay put (within ``tol``) as k increases."""
    if not k_lo < k_hi:
        raise ValueError(f"need k_lo < k_hi, got {k_lo}, {k_hi}")
    return stable_from_history(root_history(family, x0, k_lo, k_hi, bracket, grid), tol)

"""Hulthen potential bound states.

With x = delta r, z = exp(-x), and the centrifugal substitution
1/r^2 -> delta^2 e^{-delta r} / (1 - e^{-delta r})^2, the ansatz
u(z) = z^eps (1 - z)^{l+1} f(z) turns the radial equation into the AIM form
with

    lambda0(z) = ((2 eps + 2l + 3) z - (2 eps + 1)) / (z (1 - z))
    s0(z)      = ((2 eps + l + 2) l + 2 eps - beta^2 + 1) / (z (1 - z))

where -eps^2 = 2 M E / (hbar^2 delta^2) and beta^2 = 2 M Z e^2 / (hbar^2 delta).
"""

from __future__ import annotations

import enum
import math
import re
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.special import roots_jacobi

from . import aim
from .jet import Jet, jet_identity, jet_polynomial
from .special import hyp2f1_coefficients, hyp2f1_terminating

SPECTROSCOPIC = "spdfghiklmnoqrtuvwxyz"


@dataclass(frozen=True)
class HulthenParams:
    """Potential and unit parameters; defaults are atomic units with Z = 1."""

    delta: float
    Z: float = 1.0
    M: float = 1.0
    hbar: float = 1.0
    e: float = 1.0

    def __post_init__(self):
        for name in ("delta", "Z", "M", "hbar", "e"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")

    @property
    def beta_sq(self) -> float:
        return 2.0 * self.M * self.Z * self.e**2 / (self.hbar**2 * self.delta)

    def energy_from_epsilon(self, eps):
        return -(eps**2) * self.hbar**2 * self.delta**2 / (2.0 * self.M)


class QuantumState(NamedTuple):
    n: int
    l: int

    @property
    def principal(self) -> int:
        return self.n + self.l + 1

    @property
    def label(self) -> str:
        return f"{self.principal}{SPECTROSCOPIC[self.l]}"


class Method(str, enum.Enum):
    CLOSED = "closed-form"
    AIM = "aim-iterative"
    NUMEROV_TRUE = "numerov-true"
    NUMEROV_APPROX = "numerov-approx"


@dataclass
class EigenResult:
    energy: float
    method: Method
    bound: bool = True
    meta: dict = field(default_factory=dict)

    @property
    def binding(self) -> float:
        return -self.energy

    def as_dict(self) -> dict:
        return {
            "energy": self.energy,
            "binding": self.binding,
            "method": self.method.value,
            "bound": self.bound,
            **self.meta,
        }


def spectroscopic(label: str) -> QuantumState:
    """Parse e.g. ``"3d"`` into ``QuantumState(n=0, l=2)``."""
    m = re.fullmatch(r"\s*(\d+)\s*([A-Za-z])\s*", label)
    if not m:
        raise ValueError(f"malformed state label {label!r}")
    nu = int(m.group(1))
    letter = m.group(2).lower()
    if letter not in SPECTROSCOPIC:
        raise ValueError(f"unknown orbital letter {letter!r} in {label!r}")
    l = SPECTROSCOPIC.index(letter)
    if nu < 1 or l >= nu:
        raise ValueError(f"state {label!r} needs l < principal number")
    return QuantumState(nu - l - 1, l)


# -- potentials ---------------------------------------------------------


def _check_r(r):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("r must be positive")
    return r


def _out(v):
    return float(v) if np.ndim(v) == 0 else v


def v_hulthen(r, p: HulthenParams):
    """-Z e^2 delta e^{-delta r} / (1 - e^{-delta r})."""
    r = _check_r(r)
    x = p.delta * r
    # e^{-x}/(1-e^{-x}) = 1/expm1(x), accurate at small x
    return _out(-p.Z * p.e**2 * p.delta / np.expm1(x))


def centrifugal(r, p: HulthenParams, l: int, approx: bool = False):
    r = _check_r(r)
    c = l * (l + 1) * p.hbar**2 / (2.0 * p.M)
    if not approx:
        return _out(c / r**2)
    x = p.delta * r
    em1 = np.expm1(x)
    # delta^2 e^{-x}/(1-e^{-x})^2 = delta^2 e^{x}/(e^{x}-1)^2
    return _out(c * p.delta**2 * (em1 + 1.0) / em1**2)


def v_effective(r, p: HulthenParams, l: int, approx: bool = False):
    """Effective radial potential, exact or with the approximated centrifugal term."""
    return _out(np.asarray(v_hulthen(r, p)) + np.asarray(centrifugal(r, p, l, approx)))


# -- AIM form -----------------------------------------------------------


def to_aim_problem(l: int, p: HulthenParams, epsilon) -> aim.AimProblem:
    """lambda0/s0 in z on (0, 1); ``epsilon`` may be an array (batched jets)."""
    eps = np.asarray(epsilon, dtype=float)
    # eps = 0 is the binding threshold; the coefficients stay finite there
    if np.any(eps < 0):
        raise ValueError("epsilon must be non-negative")
    if l < 0:
        raise ValueError("l must be non-negative")
    A = 2 * eps + 2 * l + 3
    B = 2 * eps + 1
    C = (2 * eps + l + 2) * l + 2 * eps - p.beta_sq + 1

    def _den(z0, order):
        if not 0.0 < z0 < 1.0:
            raise ValueError(f"z0={z0} outside (0, 1)")
        return jet_polynomial([0.0, 1.0, -1.0], z0, order)

    def lambda0(z0: float, order: int) -> Jet:
        return jet_polynomial([-B, A], z0, order) / _den(z0, order)

    def s0(z0: float, order: int) -> Jet:
        return (_den(z0, order) * 0.0 + C) / _den(z0, order)

    return aim.AimProblem(lambda0, s0, domain=(0.0, 1.0))


def aim_family(l: int, p: HulthenParams):
    """Energy-parameterised family ``epsilon -> AimProblem`` for root scans."""
    return lambda eps: to_aim_problem(l, p, eps)


def epsilon_closed(state: QuantumState, beta_sq: float) -> float:
    N = state.n + state.l + 1
    return (beta_sq - N**2) / (2.0 * N)


def critical_screening(state: QuantumState, p: HulthenParams) -> float:
    """Largest delta for which the state is bound in the approximated model."""
    N = state.n + state.l + 1
    return 2.0 * p.M * p.Z * p.e**2 / (p.hbar**2 * N**2)


def energy_closed(state: QuantumState, p: HulthenParams) -> EigenResult:
    N = state.n + state.l + 1
    bracket = p.M * p.Z * p.e**2 / (p.hbar**2 * N) - N * p.delta / 2.0
    energy = -(p.hbar**2) / (2.0 * p.M) * bracket**2
    eps = epsilon_closed(state, p.beta_sq)
    return EigenResult(energy, Method.CLOSED, bound=bracket > 0, meta={"epsilon": eps})


def energy_aim(
    state: QuantumState,
    p: HulthenParams,
    z0: float = 0.5,
    extra_iterations: int = 1,
    grid: int = aim.DEFAULT_GRID,
    tol: float = 1e-9,
) -> EigenResult:
    """Eigenvalue from the iterated quantization condition.

    delta_k vanishes at eps_0 .. eps_k, so the state's root enters at k = n
    and is confirmed at k = n + 1. Scans k = n .. n+1+extra_iterations over
    eps in (0, beta^2/2], takes the (n+1)-th largest root of delta_n and
    accepts it if it stays stable through the last iteration.
    """
    k_lo = state.n
    k_hi = k_lo + 1 + max(0, extra_iterations)
    bracket = (0.0, p.beta_sq / 2.0)
    history = aim.root_history(aim_family(state.l, p), z0, k_lo, k_hi, bracket, grid)
    with warnings.catch_warnings():
        # roots that only enter at k_hi are expected here
        warnings.simplefilter("ignore", aim.AimConvergenceWarning)
        stable = aim.stable_from_history(history, tol)
    meta = {"k": k_lo + 1, "k_checked": k_hi, "z0": z0}
    entered = sorted(history[k_lo], reverse=True)
    if len(entered) <= state.n:
        return EigenResult(math.nan, Method.AIM, bound=False, meta=meta)
    candidate = entered[state.n]
    tol_abs = tol * max(1.0, abs(candidate))
    match = [r for r in stable if r.k_first == k_lo and abs(r.root - candidate) <= tol_abs]
    if not match:
        return EigenResult(math.nan, Method.AIM, bound=False, meta=meta)
    eps = match[0].root
    meta["epsilon"] = eps
    return EigenResult(float(p.energy_from_epsilon(eps)), Method.AIM, True, meta)


# -- wavefunctions -------------------------------------------------------


def _bound_epsilon(state: QuantumState, p: HulthenParams) -> float:
    eps = epsilon_closed(state, p.beta_sq)
    if not eps > 0:
        raise ValueError(f"state {state.label} is unbound at delta={p.delta}")
    return eps


def _radial_poly(state: QuantumState, eps: float):
    """Coefficients (ascending in z) of the 2F1 factor of u."""
    n, l = state
    return hyp2f1_coefficients(n, 2 * (eps + l + 1) + n, 2 * eps + 1)


def normalization_constant(state: QuantumState, p: HulthenParams) -> float:
    """N such that the integral of (N u)^2 over r in (0, inf) equals 1.

    Uses int_0^inf u^2 dr = (1/delta) int_0^1 z^{2 eps - 1} (1-z)^{2l+2} F(z)^2 dz;
    Gauss-Jacobi with weight z^{2 eps - 1} integrates the polynomial rest exactly.
    """
    eps = _bound_epsilon(state, p)
    n, l = state
    degree = 2 * n + 2 * l + 2
    nodes = max(64, degree // 2 + 2)
    x, w = roots_jacobi(nodes, 0.0, 2.0 * eps - 1.0)
    z = 0.5 * (1.0 + x)
    F = hyp2f1_terminating(n, 2 * (eps + l + 1) + n, 2 * eps + 1, z)
    g = (1.0 - z) ** (2 * l + 2) * F**2
    integral = 2.0 ** (-2.0 * eps) * float(np.dot(w, g))
    return 1.0 / math.sqrt(integral / p.delta)


def wavefunction_z(state: QuantumState, p: HulthenParams, z, normalize: bool = False):
    """u as a function of z = e^{-delta r} in (0, 1)."""
    eps = _bound_epsilon(state, p)
    n, l = state
    z = np.asarray(z, dtype=float)
    F = hyp2f1_terminating(n, 2 * (eps + l + 1) + n, 2 * eps + 1, z)
    u = z**eps * (1.0 - z) ** (l + 1) * F
    if normalize:
        u = u * normalization_constant(state, p)
    return _out(u)


def wavefunction_u(state: QuantumState, p: HulthenParams, r, normalize: bool = True):
    """Radial function u_nl(r) = N z^eps (1-z)^{l+1} 2F1(-n, 2(eps+l+1)+n; 2eps+1; z)."""
    r = _check_r(r)
    z = np.exp(-p.delta * r)
    return wavefunction_z(state, p, z, normalize)


def transformed_ode_residual(state: QuantumState, p: HulthenParams, z: float,
                             epsilon: float | None = None) -> float:
    """Scaled residual of u'' + u'/z + [-eps^2/z^2 + beta^2/(z(1-z)) - l(l+1)/(z(1-z)^2)] u.

    Writing u = z^eps g(z) with g rational, the common factor z^eps cancels
    and the derivatives of g come from an order-2 jet. The result is divided
    by the largest individual term. ``epsilon`` overrides the closed-form
    value (for probing off-eigenvalue behaviour).
    """
    eps = _bound_epsilon(state, p) if epsilon is None else float(epsilon)
    n, l = state
    z = float(z)
    if not 0.0 < z < 1.0:
        raise ValueError("z must lie in (0, 1)")
    zj = jet_identity(z, 2)
    F = jet_polynomial(_radial_poly(state, eps), z, 2)
    g = (1.0 - zj) ** (l + 1) * F
    g0, g1, g2 = g.derivative_values()
    u2 = g2 + 2 * eps * g1 / z + eps * (eps - 1) * g0 / z**2
    u1 = g1 + eps * g0 / z
    terms = (
        u2,
        u1 / z,
        -(eps**2) / z**2 * g0,
        p.beta_sq / (z * (1 - z)) * g0,
        -l * (l + 1) / (z * (1 - z) ** 2) * g0,
    )
    scale = max(abs(t) for t in terms)
    return math.fsum(terms) / scale if scale > 0 else 0.0

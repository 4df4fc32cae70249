"""Exactly solvable family y'' = 2(a x^{N+1}/(1 - b x^{N+2}) - (t+1)/x) y' - w x^N/(1 - b x^{N+2}) y.

Polynomial solutions exist for ``w = w_general(family, n)`` and are

    y_n(x) = (-1)^n C2 (N+2)^n (sigma)_n 2F1(-n, rho + n; sigma; b x^{N+2})

with ``sigma = (2t + N + 3)/(N + 2)`` and ``rho = ((2t + 1) b + 2a)/((N + 2) b)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .jet import Jet, jet_identity


@dataclass(frozen=True)
class SolvableFamily:
    a: float
    b: float
    t: float
    N: int

    def __post_init__(self):
        if self.b == 0:
            raise ValueError("b must be nonzero")
        if int(self.N) != self.N or self.N < -1:
            raise ValueError(f"N must be an integer >= -1, got {self.N!r}")

    @property
    def sigma(self) -> float:
        return (2 * self.t + self.N + 3) / (self.N + 2)

    @property
    def rho(self) -> float:
        return ((2 * self.t + 1) * self.b + 2 * self.a) / ((self.N + 2) * self.b)

    @property
    def pole(self) -> float:
        """Singular point x = b^(-1/(N+2)) of the coefficients (nan if b < 0)."""
        return self.b ** (-1.0 / (self.N + 2)) if self.b > 0 else math.nan


def w_general(family: SolvableFamily, k: int) -> float:
    """Eigenvalue parameter w_k^t(N) = b (N+2)^2 k (k + rho)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    f = family
    return f.b * (f.N + 2) ** 2 * k * (k + ((2 * f.t + 1) * f.b + 2 * f.a) / ((f.N + 2) * f.b))


def pochhammer(sigma: float, n: int) -> float:
    """Rising factorial sigma (sigma+1) ... (sigma+n-1)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return math.prod(sigma + j for j in range(n)) if n else 1.0


def hyp2f1_coefficients(n: int, second: float, sigma: float) -> list[float]:
    """Power-series coefficients of 2F1(-n, second; sigma; x), a degree-n polynomial."""
    if n < 0:
        raise ValueError("n must be non-negative")
    coeffs = [1.0]
    for j in range(n):
        if sigma + j == 0:
            raise ZeroDivisionError(f"2F1 lower parameter hits a pole: sigma + {j} = 0")
        coeffs.append(coeffs[-1] * (-n + j) * (second + j) / ((sigma + j) * (j + 1)))
    return coeffs


def hyp2f1_terminating(n: int, second: float, sigma: float, x):
    """Terminating Gauss series 2F1(-n, second; sigma; x).

    ``x`` may be a float (summed with :func:`math.fsum`), an array, or a
    :class:`Jet`.
    """
    coeffs = hyp2f1_coefficients(n, second, sigma)
    if isinstance(x, Jet):
        acc = x * 0.0 + coeffs[-1]
        for c in reversed(coeffs[:-1]):
            acc = acc * x + c
        return acc
    if np.ndim(x) == 0:
        x = float(x)
        return math.fsum(c * x**j for j, c in enumerate(coeffs))
    x = np.asarray(x, dtype=float)
    terms = np.stack([c * x**j for j, c in enumerate(coeffs)])
    return np.apply_along_axis(math.fsum, 0, terms.reshape(len(coeffs), -1)).reshape(x.shape)


def y_n_closed(family: SolvableFamily, n: int, x, c2: float = 1.0):
    """Closed-form polynomial solution y_n at ``x`` (float, array or Jet)."""
    f = family
    prefactor = (-1) ** n * c2 * (f.N + 2) ** n * pochhammer(f.sigma, n)
    arg = f.b * x ** (f.N + 2)
    return hyp2f1_terminating(n, f.rho + n, f.sigma, arg) * prefactor


def ode_residual(family: SolvableFamily, n: int, x: float, scaled: bool = False) -> float:
    """Residual of the family ODE for y_n with w = w_general(family, n).

    Derivatives of y_n come from an order-2 jet. With ``scaled=True`` the
    residual is divided by the largest of |y''|, |lambda0 y'|, |s0 y|.
    """
    f = family
    x = float(x)
    if x <= 0:
        raise ValueError("x must be positive")
    denom = 1.0 - f.b * x ** (f.N + 2)
    if denom == 0:
        raise ZeroDivisionError(f"x={x} sits on the pole b x^(N+2) = 1")
    y = y_n_closed(f, n, jet_identity(x, 2))
    y0, y1, y2 = y.derivative_values()
    lam0 = 2.0 * (f.a * x ** (f.N + 1) / denom - (f.t + 1) / x)
    s0 = -w_general(f, n) * x**f.N / denom
    terms = (y2, lam0 * y1, s0 * y0)
    res = y2 - lam0 * y1 - s0 * y0
    if not scaled:
        return float(res)
    scale = max(abs(t) for t in terms)
    return float(res / scale) if scale > 0 else 0.0

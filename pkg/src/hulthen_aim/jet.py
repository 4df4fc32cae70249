"""Truncated Taylor series ("jets") at a point.

A :class:`Jet` holds ``coeffs[..., j] = f^(j)(x0) / j!`` for ``j = 0..order``.
Leading axes of ``coeffs`` are batch axes, so one jet can carry the same
expansion for a whole vector of parameter values (the AIM energy scan relies
on this). Jets are immutable; every operation returns a new one.
"""

from __future__ import annotations

import numpy as np

from . import _kernels


class PoleError(ZeroDivisionError):
    """Division by a jet whose constant term vanishes (pole at the center)."""


class Jet:
    __slots__ = ("_coeffs", "_center")

    def __init__(self, coeffs, center: float = 0.0):
        c = np.array(coeffs, dtype=float)
        if c.ndim == 0:
            c = c.reshape(1)
        c.setflags(write=False)
        self._coeffs = c
        self._center = float(center)

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def center(self) -> float:
        return self._center

    @property
    def order(self) -> int:
        return self._coeffs.shape[-1] - 1

    @property
    def batch_shape(self) -> tuple:
        return self._coeffs.shape[:-1]

    @property
    def value(self):
        """Function value at the center (a float, or an array for batched jets)."""
        v = self._coeffs[..., 0]
        return float(v) if v.ndim == 0 else v.copy()

    def derivative_values(self) -> np.ndarray:
        """Raw derivatives ``f^(j)(x0)`` (undo the ``1/j!`` scaling)."""
        j = np.arange(self.order + 1)
        fact = np.cumprod(np.concatenate(([1.0], j[1:].astype(float))))
        return self._coeffs * fact

    def truncate(self, order: int) -> "Jet":
        if order < 0 or order > self.order:
            raise ValueError(f"cannot truncate order-{self.order} jet to order {order}")
        return Jet(self._coeffs[..., : order + 1], self._center)

    def derivative(self) -> "Jet":
        if self.order < 1:
            raise ValueError("derivative of an order-0 jet carries no information")
        j = np.arange(1, self.order + 1, dtype=float)
        return Jet(self._coeffs[..., 1:] * j, self._center)

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, Jet):
            if other._center != self._center:
                raise ValueError(
                    f"jet centers differ: {self._center!r} vs {other._center!r}"
                )
            if other.order != self.order:
                raise ValueError(f"jet orders differ: {self.order} vs {other.order}")
            return other._coeffs
        # plain scalar or batch array: a constant function
        c = np.asarray(other, dtype=float)
        out = np.zeros(c.shape + (self.order + 1,))
        out[..., 0] = c
        return out

    def __add__(self, other):
        return Jet(self._coeffs + self._coerce(other), self._center)

    __radd__ = __add__

    def __sub__(self, other):
        return Jet(self._coeffs - self._coerce(other), self._center)

    def __rsub__(self, other):
        return Jet(self._coerce(other) - self._coeffs, self._center)

    def __neg__(self):
        return Jet(-self._coeffs, self._center)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            c = np.asarray(other, dtype=float)
            return Jet(self._coeffs * c[..., None], self._center)
        b = self._coerce(other)
        return Jet(_binary(_kernels.cauchy_product, self._coeffs, b), self._center)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if np.any(b[..., 0] == 0.0):
            raise PoleError(f"denominator vanishes at x0={self._center}")
        if not isinstance(other, Jet):
            return Jet(self._coeffs / b[..., :1], self._center)
        return Jet(_binary(_kernels.series_divide, self._coeffs, b), self._center)

    def __rtruediv__(self, other):
        a = self._coerce(other)
        if np.any(self._coeffs[..., 0] == 0.0):
            raise PoleError(f"denominator vanishes at x0={self._center}")
        return Jet(_binary(_kernels.series_divide, a, self._coeffs), self._center)

    def __pow__(self, p: int):
        if int(p) != p:
            raise TypeError("only integer powers of jets are supported")
        p = int(p)
        if p < 0:
            return 1.0 / (self ** (-p))
        result = jet_const(1.0, self._center, self.order) + np.zeros(self.batch_shape)
        base = self
        # square-and-multiply keeps the product count logarithmic
        while p:
            if p & 1:
                result = result * base
            p >>= 1
            if p:
                base = base * base
        return result

    def __repr__(self) -> str:
        return f"Jet(center={self._center!r}, coeffs={self._coeffs.tolist()!r})"


def _binary(kernel, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = np.broadcast_arrays(a, b)
    shape = a.shape
    m = shape[-1]
    a2 = np.ascontiguousarray(a.reshape(-1, m), dtype=np.float64)
    b2 = np.ascontiguousarray(b.reshape(-1, m), dtype=np.float64)
    return kernel(a2, b2).reshape(shape)


def _check_order(order: int) -> int:
    if int(order) != order or order < 0:
        raise ValueError(f"jet order must be a non-negative integer, got {order!r}")
    return int(order)


def jet_const(c, center: float, order: int) -> Jet:
    """Jet of the constant function ``c`` (``c`` may be a batch array)."""
    order = _check_order(order)
    c = np.asarray(c, dtype=float)
    coeffs = np.zeros(c.shape + (order + 1,))
    coeffs[..., 0] = c
    return Jet(coeffs, center)


def jet_identity(center: float, order: int) -> Jet:
    """Jet of ``f(x) = x``."""
    order = _check_order(order)
    coeffs = np.zeros(order + 1)
    coeffs[0] = center
    if order >= 1:
        coeffs[1] = 1.0
    return Jet(coeffs, center)


def jet_polynomial(coeffs, center: float, order: int) -> Jet:
    """Jet of ``sum_i coeffs[i] * x**i``; each coefficient may be a batch array."""
    x = jet_identity(center, order)
    result = jet_const(0.0, center, order)
    for c in reversed(list(coeffs)):
        result = result * x + c
    return result


def jet_add(a: Jet, b: Jet) -> Jet:
    return a + b


def jet_sub(a: Jet, b: Jet) -> Jet:
    return a - b


def jet_mul(a: Jet, b: Jet) -> Jet:
    return a * b


def jet_div(a: Jet, b: Jet) -> Jet:
    return a / b


def jet_derivative(a: Jet) -> Jet:
    return a.derivative()


def jet_value(a: Jet):
    return a.value

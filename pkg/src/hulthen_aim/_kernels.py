"""Hot inner loops, each with a pure-python/numpy body and an njit twin.

The public names (``numerov_outward``, ``cauchy_product``, ``series_divide``)
are bound to the compiled variant unless numba is disabled; both variants
stay importable as ``*_py`` / ``*_jit`` for testing and benchmarking.
"""

import numpy as np

from ._accel import USE_NUMBA, maybe_njit

RESCALE_LIMIT = 1e150


def _numerov_outward(k2, h, u0, u1):
    """Integrate u'' = -k2(r) u on a uniform grid with Numerov's scheme.

    Returns ``(u, nodes, rescales)``: the solution samples, the number of
    sign changes after the first sample, and how many times the running
    solution was scaled down to avoid overflow.
    """
    n = k2.shape[0]
    u = np.empty(n)
    u[0] = u0
    u[1] = u1
    c = h * h / 12.0
    f_prev = 1.0 + c * k2[0]
    f_cur = 1.0 + c * k2[1]
    nodes = 0
    rescales = 0
    last_sign = 0.0
    if u1 > 0.0:
        last_sign = 1.0
    elif u1 < 0.0:
        last_sign = -1.0
    for i in range(1, n - 1):
        f_next = 1.0 + c * k2[i + 1]
        u_next = ((12.0 - 10.0 * f_cur) * u[i] - f_prev * u[i - 1]) / f_next
        u[i + 1] = u_next
        if u_next != 0.0:
            sign = 1.0 if u_next > 0.0 else -1.0
            if last_sign != 0.0 and sign != last_sign:
                nodes += 1
            last_sign = sign
        if abs(u_next) > RESCALE_LIMIT:
            for j in range(i + 2):
                u[j] /= RESCALE_LIMIT
            rescales += 1
        f_prev = f_cur
        f_cur = f_next
    return u, nodes, rescales


def _cauchy_product(a, b):
    # a, b: (batch, m) Taylor coefficient rows of equal length
    batch, m = a.shape
    out = np.zeros((batch, m))
    for p in range(batch):
        for j in range(m):
            acc = 0.0
            for i in range(j + 1):
                acc += a[p, i] * b[p, j - i]
            out[p, j] = acc
    return out


def _series_divide(a, b):
    batch, m = a.shape
    out = np.zeros((batch, m))
    for p in range(batch):
        inv = 1.0 / b[p, 0]
        for j in range(m):
            acc = a[p, j]
            for i in range(j):
                acc -= out[p, i] * b[p, j - i]
            out[p, j] = acc * inv
    return out


def _cauchy_product_np(a, b):
    m = a.shape[1]
    out = np.zeros_like(a)
    for i in range(m):
        out[:, i:] += a[:, i : i + 1] * b[:, : m - i]
    return out


def _series_divide_np(a, b):
    m = a.shape[1]
    out = np.zeros_like(a)
    inv = 1.0 / b[:, 0]
    for j in range(m):
        acc = a[:, j] - np.einsum("pi,pi->p", out[:, :j], b[:, j:0:-1])
        out[:, j] = acc * inv
    return out


numerov_outward_py = _numerov_outward
cauchy_product_py = _cauchy_product_np
series_divide_py = _series_divide_np

numerov_outward_jit = maybe_njit(_numerov_outward)
cauchy_product_jit = maybe_njit(_cauchy_product)
series_divide_jit = maybe_njit(_series_divide)

if USE_NUMBA:
    numerov_outward = numerov_outward_jit
    cauchy_product = cauchy_product_jit
    series_divide = series_divide_jit
else:
    numerov_outward = numerov_outward_py
    cauchy_product = cauchy_product_py
    series_divide = series_divide_py

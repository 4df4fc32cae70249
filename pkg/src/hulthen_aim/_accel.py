"""Optional numba acceleration.

Set ``HULTHEN_AIM_DISABLE_NUMBA=1`` to force the pure-numpy kernels (also
used automatically when numba is not importable).
"""

import os

_FLAG = "HULTHEN_AIM_DISABLE_NUMBA"


def _env_disabled() -> bool:
    return os.environ.get(_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

NUMBA_AVAILABLE = _numba is not None
USE_NUMBA = NUMBA_AVAILABLE and not _env_disabled()


def maybe_njit(func):
    """Compile ``func`` with ``numba.njit`` when available, else return None."""
    if not NUMBA_AVAILABLE:
        return None
    return _numba.njit(cache=True)(func)

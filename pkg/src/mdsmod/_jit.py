"""Numba switch.

Set ``MDSMOD_DISABLE_NUMBA=1`` to force the pure-numpy kernels. When numba
cannot be imported the numpy path is used automatically.
"""
import os

_FLAG = os.environ.get("MDSMOD_DISABLE_NUMBA", "").strip().lower()

try:
    from numba import njit as _njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    NUMBA_AVAILABLE = False
    _njit = None

USE_NUMBA = NUMBA_AVAILABLE and _FLAG not in ("1", "true", "yes", "on")


def njit(fn):
    """Compile ``fn`` with numba when available, else return it unchanged."""
    if not NUMBA_AVAILABLE:
        return fn
    return _njit(cache=True, nogil=True)(fn)

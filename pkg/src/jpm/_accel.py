"""Numba acceleration switch.

Hot kernels in :mod:`jpm._kernels` are compiled with numba when available.
Set ``JPM_NUMBA=0`` (also accepted: ``off``, ``false``, ``no``) to force the
pure NumPy/Python fallback path; the same kernels then run uncompiled and the
high-level modules pick vectorized NumPy routines where they exist.
"""

import os


def _want_numba() -> bool:
    flag = os.environ.get("JPM_NUMBA", "").strip().lower()
    if flag in {"0", "off", "false", "no"}:
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _want_numba()

if NUMBA_ENABLED:
    from numba import njit as _numba_njit

    def njit(func):
        return _numba_njit(cache=True)(func)

else:

    def njit(func):
        return func

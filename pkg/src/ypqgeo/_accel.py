"""Optional numba acceleration with a transparent pure-Python fallback.

The environment flag ``YPQ_NUMBA`` selects the backend at import time:
any value other than ``0``/``false``/``no``/``off`` (the default is on)
compiles the hot kernels with numba's ``@njit``; otherwise — or when numba
is not installed — the same functions run undecorated on plain numpy.
``USING_NUMBA`` records which backend is live so callers and benchmarks can
report it.
"""

from __future__ import annotations

import os

__all__ = ["njit", "USING_NUMBA", "py_func_of"]


def _passthrough_njit(*args, **kwargs):
    """Decorator-compatible no-op standing in for numba.njit."""
    if args and callable(args[0]):
        return args[0]

    def deco(fn):
        return fn

    return deco


def _wants_numba() -> bool:
    flag = os.environ.get("YPQ_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "no", "off")


USING_NUMBA = False
njit = _passthrough_njit

if _wants_numba():
    try:
        from numba import njit as _numba_njit
    except ImportError:
        pass
    else:
        njit = _numba_njit
        USING_NUMBA = True


def py_func_of(fn):
    """The uncompiled Python function behind a (possibly) jitted one."""
    return getattr(fn, "py_func", fn)

"""Optional numba acceleration for the hot kernels.

Every function in ``_kernels`` is written in plain numpy/Python loop style
so that the same source runs with or without JIT compilation.  The JIT
path is selected once at import time:

* ``AUTOSTRUCT_JIT=0`` forces the pure-Python/numpy fallback,
* ``NUMBA_DISABLE_JIT=1`` (numba's own switch) has the same effect,
* if numba is not importable the fallback is used silently.

``benchmarks/bench_kernels.py`` compares the two paths.
"""

import os

__all__ = ["jit_enabled", "maybe_njit"]


def _want_jit() -> bool:
    if os.environ.get("AUTOSTRUCT_JIT", "1") == "0":
        return False
    if os.environ.get("NUMBA_DISABLE_JIT", "0") == "1":
        return False
    return True


if _want_jit():
    try:
        from numba import njit as _njit

        _HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a hard dep, but stay usable
        _HAVE_NUMBA = False
else:
    _HAVE_NUMBA = False


def jit_enabled() -> bool:
    return _HAVE_NUMBA


def maybe_njit(*args, **kwargs):
    """``numba.njit`` when enabled, identity decorator otherwise."""
    if _HAVE_NUMBA:
        return _njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]

    def deco(func):
        return func

    return deco

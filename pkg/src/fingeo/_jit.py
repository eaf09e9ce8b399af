"""Kernel compilation switch.

The hot kernels in :mod:`fingeo.kernels` are written as plain Python loops over
numpy arrays so that the exact same source runs in two modes:

* compiled with ``numba.njit`` (the default when numba is importable), or
* interpreted, when the environment variable ``FINGEO_NO_JIT`` is set to a
  non-empty value other than ``0``, or when numba is not installed.

``JIT_ENABLED`` records which mode was selected at import time;
``benchmarks/bench_kernels.py`` runs the suite both ways and compares.
"""

import os

__all__ = ["JIT_ENABLED", "njit"]


def _want_jit() -> bool:
    flag = os.environ.get("FINGEO_NO_JIT", "")
    if flag and flag != "0":
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


JIT_ENABLED = _want_jit()

if JIT_ENABLED:
    from numba import njit
else:

    def njit(func=None, **kwargs):
        # identity decorator, usable both bare and with options
        if func is None:
            def wrap(f):
                return f

            return wrap
        return func

"""Kernel backend selection.

The complex special-function kernels have two implementations: scalar loops
compiled with numba, and a vectorised pure-numpy path.  Numba is used when it
imports cleanly unless ``RELZETA_NUMBA`` is set to ``0``/``false``/``off``.
"""
import os

_FLAG = os.environ.get("RELZETA_NUMBA", "1").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional accelerator
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and _FLAG not in ("0", "false", "off", "no")
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True)(func)

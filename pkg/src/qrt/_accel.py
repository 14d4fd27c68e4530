"""Backend selection for the integer kernels.

Set ``QRT_DISABLE_NUMBA=1`` to force the pure-numpy implementations.  When
numba is missing the numpy path is used automatically.
"""

import os

_FALSY = {"", "0", "false", "no", "off"}

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("QRT_DISABLE_NUMBA", "").strip().lower() in _FALSY


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    if not HAVE_NUMBA:
        return func
    import numba

    return numba.njit(cache=True)(func)


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"

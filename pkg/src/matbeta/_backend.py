"""Backend selection for the hot numeric kernels.

Two interchangeable implementations exist for every hot loop: a numba
``@njit`` kernel and a vectorized pure-numpy fallback.  The active backend
is chosen by the environment variable ``MATBETA_NUMBA`` (``"0"`` forces the
numpy path, anything else enables numba when importable) and can be switched
at runtime with :func:`set_backend`, which the benchmark script and the
backend-equivalence tests use.
"""

from __future__ import annotations

import os

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False

_ENV_FLAG = os.environ.get("MATBETA_NUMBA", "1")
_active = "numba" if (HAVE_NUMBA and _ENV_FLAG != "0") else "numpy"


def active_backend() -> str:
    """Name of the backend currently used by the kernels: 'numba' or 'numpy'."""
    return _active


def using_numba() -> bool:
    return _active == "numba"


def set_backend(name: str) -> None:
    """Select the kernel backend at runtime ('numba' or 'numpy')."""
    global _active
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}; expected 'numba' or 'numpy'")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    _active = name

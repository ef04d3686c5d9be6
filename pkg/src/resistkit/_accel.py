"""Backend selection for the compiled kernels.

Set ``RESISTKIT_DISABLE_NUMBA=1`` to force the pure-numpy path. The choice is
read once at import; :func:`use_backend` overrides it at runtime (tests and
the benchmark use it to compare both paths).
"""

from __future__ import annotations

import os
from contextlib import contextmanager

ENV_FLAG = "RESISTKIT_DISABLE_NUMBA"

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

HAVE_NUMBA = _numba is not None

_backend = (
    "numpy"
    if not HAVE_NUMBA or os.environ.get(ENV_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}
    else "numba"
)


def backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _backend = name


@contextmanager
def use_backend(name: str):
    previous = _backend
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def njit(fn):
    """``numba.njit(cache=True)`` when available, else the function unchanged."""
    if _numba is None:
        return fn
    return _numba.njit(cache=True)(fn)

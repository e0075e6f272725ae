"""Kernel backend selection.

Three convolution backends exist:

* ``numba``  - @njit direct-loop kernels, the default when numba imports.
* ``numpy``  - vectorised im2col/col2im path, always available.
* ``naive``  - pure-Python nested loops; far too slow for training but it is
  the reference the fast paths are tested against, and it carries the
  multiply-add instrumentation used by the cost model.

The active backend is chosen once from ``DELTADISTILL_BACKEND`` and can be
overridden programmatically (tests, benchmarks) via :func:`set_backend` or
the :func:`use_backend` context manager.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

from .errors import ConfigurationError

_VALID = ("numba", "numpy", "naive")

try:
    import numba  # noqa: F401

    _HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAS_NUMBA = False


def _from_env() -> str:
    name = os.environ.get("DELTADISTILL_BACKEND", "").strip().lower()
    if not name:
        return "numba" if _HAS_NUMBA else "numpy"
    if name not in _VALID:
        raise ConfigurationError(
            f"DELTADISTILL_BACKEND={name!r}; expected one of {_VALID}"
        )
    if name == "numba" and not _HAS_NUMBA:
        raise ConfigurationError("DELTADISTILL_BACKEND=numba but numba is not importable")
    return name


_ACTIVE = _from_env()


def active_backend() -> str:
    return _ACTIVE


def set_backend(name: str) -> None:
    global _ACTIVE
    if name not in _VALID:
        raise ConfigurationError(f"unknown backend {name!r}; expected one of {_VALID}")
    if name == "numba" and not _HAS_NUMBA:
        raise ConfigurationError("numba backend requested but numba is not importable")
    _ACTIVE = name


@contextmanager
def use_backend(name: str):
    prev = _ACTIVE
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)


def configure_threads() -> None:
    """Apply DELTADISTILL_THREADS to the numba threading layer, if set."""
    raw = os.environ.get("DELTADISTILL_THREADS", "").strip()
    if raw and _HAS_NUMBA:
        try:
            n = int(raw)
        except ValueError as exc:
            raise ConfigurationError(f"DELTADISTILL_THREADS={raw!r} is not an integer") from exc
        if n < 1:
            raise ConfigurationError("DELTADISTILL_THREADS must be >= 1")
        import numba as _nb

        _nb.set_num_threads(n)

"""Backend selection for the binary64 kernels.

Kernels are compiled with numba when it is importable and the environment
variable ``SEGRE_KIT_DISABLE_NUMBA`` is unset (or "0"); otherwise the
vectorised numpy implementations are used.
"""

from __future__ import annotations

import os
from typing import Callable, Optional

ENV_FLAG = "SEGRE_KIT_DISABLE_NUMBA"
WORKERS_ENV = "SEGRE_KIT_WORKERS"

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


def numba_available() -> bool:
    return numba is not None


def numba_requested() -> bool:
    return os.environ.get(ENV_FLAG, "").strip() in ("", "0")


def default_backend() -> str:
    return "numba" if numba_available() and numba_requested() else "numpy"


def njit(fn: Callable) -> Optional[Callable]:
    """Compiled version of ``fn`` (lazily, on first call), or None without numba."""
    if numba is None:
        return None
    return numba.njit(cache=False, nogil=True)(fn)


def worker_count(requested: Optional[int] = None) -> int:
    """Worker cap from the argument, then SEGRE_KIT_WORKERS, then the CPU count."""
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get(WORKERS_ENV, "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"{WORKERS_ENV} must be an integer, got {env!r}") from None
    return max(1, min(8, os.cpu_count() or 1))

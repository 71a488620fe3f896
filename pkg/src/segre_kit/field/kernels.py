"""Pointwise kernels for brackets of frame fields and the Nijenhuis tensor.

Inputs are batched over points:  ``F[p, k, i]`` is the k-th component of the
i-th frame field at point p and ``dF[p, k] = ∂_k F`` at that point.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .. import _accel


def _bracket_loops(F, dF):
    P, d, m = F.shape
    out = np.zeros((P, m, m, d))
    for p in range(P):
        for i in range(m):
            for j in range(i + 1, m):
                for r in range(d):
                    acc = 0.0
                    for k in range(d):
                        acc += F[p, k, i] * dF[p, k, r, j] - F[p, k, j] * dF[p, k, r, i]
                    out[p, i, j, r] = acc
                    out[p, j, i, r] = -acc
    return out


def _nijenhuis_loops(A, dA):
    P, d, _ = A.shape
    out = np.zeros((P, d, d, d))
    for p in range(P):
        for i in range(d):
            for j in range(i + 1, d):
                for r in range(d):
                    acc = 0.0
                    for k in range(d):
                        # -[A∂_i, A∂_j]
                        acc -= A[p, k, i] * dA[p, k, r, j] - A[p, k, j] * dA[p, k, r, i]
                        # A[A∂_i, ∂_j] + A[∂_i, A∂_j]
                        acc += A[p, r, k] * (dA[p, i, k, j] - dA[p, j, k, i])
                    out[p, i, j, r] = acc
                    out[p, j, i, r] = -acc
    return out


def _bracket_numpy(F, dF):
    t = np.einsum("pki,pkrj->pijr", F, dF)
    return t - np.swapaxes(t, 1, 2)


def _nijenhuis_numpy(A, dA):
    t = np.einsum("prk,pikj->pijr", A, dA)
    return -_bracket_numpy(A, dA) + t - np.swapaxes(t, 1, 2)


_bracket_jit = _accel.njit(_bracket_loops)
_nijenhuis_jit = _accel.njit(_nijenhuis_loops)

BACKENDS = ("numba", "numpy", "python")


def _pick(backend: Optional[str]) -> str:
    backend = backend or _accel.default_backend()
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and _bracket_jit is None:
        raise RuntimeError("numba backend requested but numba is not installed")
    return backend


def frame_bracket(F: np.ndarray, dF: np.ndarray, backend: Optional[str] = None) -> np.ndarray:
    """out[p, i, j] = [F_i, F_j] at point p."""
    F = np.ascontiguousarray(F, dtype=np.float64)
    dF = np.ascontiguousarray(dF, dtype=np.float64)
    b = _pick(backend)
    if b == "numba":
        return _bracket_jit(F, dF)
    if b == "python":
        return _bracket_loops(F, dF)
    return _bracket_numpy(F, dF)


def nijenhuis(A: np.ndarray, dA: np.ndarray, backend: Optional[str] = None) -> np.ndarray:
    """out[p, i, j] = N_A(∂_i, ∂_j) at point p (coordinate fields commute)."""
    A = np.ascontiguousarray(A, dtype=np.float64)
    dA = np.ascontiguousarray(dA, dtype=np.float64)
    b = _pick(backend)
    if b == "numba":
        return _nijenhuis_jit(A, dA)
    if b == "python":
        return _nijenhuis_loops(A, dA)
    return _nijenhuis_numpy(A, dA)

"""Exact rational linear algebra on small dense matrices.

Matrices are numpy ``object`` arrays holding :class:`fractions.Fraction`
entries.  Elimination runs on sparse row dictionaries internally because the
constraint systems built elsewhere in the package are mostly zeros, but every
public function takes and returns dense arrays.  Pivoting always picks the
first nonzero candidate, so results are reproducible.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def to_rational(x) -> Fraction:
    """Coerce ints, Fractions, numeric strings ("3/4") or floats to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    raise TypeError(f"cannot interpret {x!r} as a rational")


def asmatrix(data, rows: Optional[int] = None, cols: Optional[int] = None) -> np.ndarray:
    """Return a 2-D object array of Fractions built from nested sequences."""
    arr = np.array(data, dtype=object)
    if arr.ndim == 1 and rows is None:
        arr = arr.reshape(1, -1)
    if rows is not None and cols is not None:
        arr = arr.reshape(rows, cols)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    return _convert(arr)


def asarray(data) -> np.ndarray:
    """Object array of Fractions with arbitrary shape (MultiArray)."""
    return _convert(np.array(data, dtype=object))


def _convert(arr: np.ndarray) -> np.ndarray:
    out = np.empty(arr.shape, dtype=object)
    flat_in = arr.reshape(-1)
    flat_out = out.reshape(-1)
    for i, x in enumerate(flat_in):
        flat_out[i] = to_rational(x)
    return out


def zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(ZERO)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros((n, n))
    for i in range(n):
        out[i, i] = ONE
    return out


def is_zero(arr) -> bool:
    return all(x == 0 for x in np.asarray(arr, dtype=object).reshape(-1))


def equal(a, b) -> bool:
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    return a.shape == b.shape and all(x == y for x, y in zip(a.reshape(-1), b.reshape(-1)))


# ---------------------------------------------------------------------------
# elimination core


def _sparse_rows(m: np.ndarray) -> list[dict[int, Fraction]]:
    rows = []
    for r in m:
        d = {}
        for j, x in enumerate(r):
            if x != 0:
                d[j] = to_rational(x)
        rows.append(d)
    return rows


def _rref_sparse(rows: list[dict[int, Fraction]], ncols: int):
    """Reduced row echelon form. Returns (pivot_rows, pivot_cols)."""
    pending = [dict(r) for r in rows if r]
    pivot_rows: list[dict[int, Fraction]] = []
    pivot_cols: list[int] = []
    for c in range(ncols):
        idx = next((i for i, r in enumerate(pending) if c in r), None)
        if idx is None:
            continue
        prow = pending.pop(idx)
        inv = ONE / prow[c]
        if inv != 1:
            prow = {k: v * inv for k, v in prow.items()}
        items = list(prow.items())
        for group in (pending, pivot_rows):
            for r in group:
                f = r.get(c)
                if f is None:
                    continue
                for k, v in items:
                    nv = r.get(k, ZERO) - f * v
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
        pending = [r for r in pending if r]
        pivot_rows.append(prow)
        pivot_cols.append(c)
        if not pending:
            break
    return pivot_rows, pivot_cols


def rref(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form (nonzero rows only) and the pivot columns."""
    m = asmatrix(m)
    prow, pcols = _rref_sparse(_sparse_rows(m), m.shape[1])
    out = zeros((len(prow), m.shape[1]))
    for i, r in enumerate(prow):
        for k, v in r.items():
            out[i, k] = v
    return out, pcols


def rank(m) -> int:
    m = asmatrix(m)
    if m.size == 0:
        return 0
    return len(_rref_sparse(_sparse_rows(m), m.shape[1])[1])


def null_space(m) -> list[np.ndarray]:
    """Exact basis of ``{v : m v = 0}`` as a list of 1-D vectors.

    >>> [list(v) for v in null_space([[1, -1]])]
    [[Fraction(1, 1), Fraction(1, 1)]]
    """
    m = asmatrix(m)
    ncols = m.shape[1]
    prow, pcols = _rref_sparse(_sparse_rows(m), ncols)
    return _kernel_from_rref(prow, pcols, ncols)


def _kernel_from_rref(prow, pcols, ncols) -> list[np.ndarray]:
    pivset = set(pcols)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = zeros(ncols)
        v[f] = ONE
        for r, c in zip(prow, pcols):
            x = r.get(f)
            if x is not None:
                v[c] = -x
        basis.append(v)
    return basis


def null_space_rows(rows: Sequence[dict[int, Fraction]], ncols: int) -> list[np.ndarray]:
    """Null space of a system already given as sparse row dictionaries."""
    prow, pcols = _rref_sparse(list(rows), ncols)
    return _kernel_from_rref(prow, pcols, ncols)


class Solution(NamedTuple):
    particular: np.ndarray
    kernel: list[np.ndarray]


def solve_linear_system(m, rhs) -> Optional[Solution]:
    """Solve ``m x = rhs`` exactly.

    ``rhs`` is a column (shape ``(rows,)`` or ``(rows, 1)``).  Returns ``None``
    when the system is inconsistent, otherwise one particular solution with
    free variables set to zero plus a basis of the homogeneous solutions.
    """
    m = asmatrix(m)
    b = np.asarray(rhs, dtype=object)
    if b.ndim == 2:
        if b.shape[1] != 1:
            raise ValueError("rhs must have exactly one column")
        b = b[:, 0]
    if b.shape[0] != m.shape[0]:
        raise ValueError(f"rhs length {b.shape[0]} does not match {m.shape[0]} rows")
    ncols = m.shape[1]
    aug = _sparse_rows(m)
    for r, x in zip(aug, b):
        x = to_rational(x)
        if x:
            r[ncols] = x
    prow, pcols = _rref_sparse(aug, ncols + 1)
    if ncols in pcols:
        return None
    x = zeros(ncols)
    for r, c in zip(prow, pcols):
        x[c] = r.get(ncols, ZERO)
    return Solution(x, _kernel_from_rref(prow, pcols, ncols))


def inverse(m) -> np.ndarray:
    m = asmatrix(m)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug = _sparse_rows(np.concatenate([m, identity(n)], axis=1))
    prow, pcols = _rref_sparse(aug, 2 * n)
    if pcols[:n] != list(range(n)) or len(pcols) < n:
        raise ZeroDivisionError("matrix is singular")
    out = zeros((n, n))
    for i in range(n):
        for k, v in prow[i].items():
            if k >= n:
                out[i, k - n] = v
    return out


def det(m) -> Fraction:
    m = asmatrix(m)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("determinant of a non-square matrix")
    a = [list(r) for r in m]
    sign = ONE
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return ZERO
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    out = sign
    for i in range(n):
        out *= a[i][i]
    return out


def signature(sym) -> tuple[int, int, int]:
    """Inertia ``(positives, negatives, zeros)`` of a symmetric matrix.

    Symmetric Gaussian elimination: a zero diagonal entry with a nonzero
    off-diagonal partner ``(i, j)`` is fixed by the congruence ``e_i -> e_i + e_j``
    (or ``e_i - e_j``), so every step stays exact.
    """
    a = asmatrix(sym)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("signature needs a square matrix")
    if not equal(a, a.T):
        raise ValueError("signature needs a symmetric matrix")
    a = [list(r) for r in a]
    pos = neg = 0
    active = list(range(n))
    while active:
        i = next((k for k in active if a[k][k] != 0), None)
        if i is None:
            pair = next(((k, l) for k in active for l in active if a[k][l] != 0), None)
            if pair is None:
                break
            k, l = pair
            # a[k][k] = a[l][l] = 0, so q(e_k + e_l) = 2 a[k][l] != 0
            for r in range(n):
                a[r][k] += a[r][l]
            for c in range(n):
                a[k][c] += a[l][c]
            i = k
        p = a[i][i]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(i)
        for r in active:
            f = a[r][i] / p
            if f:
                for c in active:
                    a[r][c] -= f * a[i][c]
        for r in active:
            a[r][i] = a[i][r] = ZERO
    return pos, neg, n - pos - neg


# ---------------------------------------------------------------------------
# subspace helpers


def span_basis(vectors: Iterable) -> list[np.ndarray]:
    """Row-reduced basis of the span of the given 1-D vectors."""
    vecs = [np.asarray(v, dtype=object).reshape(-1) for v in vectors]
    if not vecs:
        return []
    ncols = len(vecs[0])
    prow, _ = _rref_sparse(_sparse_rows(np.array(vecs, dtype=object)), ncols)
    out = []
    for r in prow:
        v = zeros(ncols)
        for k, x in r.items():
            v[k] = x
        out.append(v)
    return out


def same_span(a: Sequence, b: Sequence) -> bool:
    a = list(a)
    b = list(b)
    ra = rank(np.array(a, dtype=object)) if a else 0
    rb = rank(np.array(b, dtype=object)) if b else 0
    if ra != rb:
        return False
    if ra == 0:
        return True
    return rank(np.array(a + b, dtype=object)) == ra


def in_span(v, basis: Sequence) -> bool:
    basis = list(basis)
    v = np.asarray(v, dtype=object).reshape(-1)
    if not basis:
        return is_zero(v)
    r = rank(np.array(basis, dtype=object))
    return rank(np.array(basis + [v], dtype=object)) == r


def intersect(a: Sequence, b: Sequence) -> list[np.ndarray]:
    """Basis of span(a) ∩ span(b)."""
    a = list(a)
    b = list(b)
    if not a or not b:
        return []
    m = np.array(a + [-x for x in b], dtype=object).T
    out = []
    for c in null_space(m):
        v = sum((c[i] * a[i] for i in range(len(a))), zeros(len(a[0])))
        out.append(v)
    return span_basis(out)


# ---------------------------------------------------------------------------
# JSON encoding


def common_denominator(arr) -> int:
    """Least common multiple of the denominators of all entries."""
    out = 1
    for x in np.asarray(arr, dtype=object).reshape(-1):
        d = to_rational(x).denominator
        out = out * d // math.gcd(out, d)
    return out


def to_int64(arr, scale: int = 1) -> np.ndarray:
    """``scale * arr`` as int64; raises if an entry is not integral or too large."""
    flat = [to_rational(x) * scale for x in np.asarray(arr, dtype=object).reshape(-1)]
    if any(x.denominator != 1 or abs(x.numerator) >= 2**62 for x in flat):
        raise ValueError("entries are not small integers after scaling")
    return np.array([x.numerator for x in flat], dtype=np.int64).reshape(np.shape(arr))


def rational_to_json(x) -> int | str:
    x = to_rational(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rational_from_json(x) -> Fraction:
    if isinstance(x, float):
        raise ValueError("floating values are not accepted; encode rationals as 'p/q'")
    return to_rational(x)


def matrix_to_json(m) -> dict:
    m = asmatrix(m)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [rational_to_json(x) for x in m.reshape(-1)],
    }


def matrix_from_json(obj) -> np.ndarray:
    try:
        r, c, entries = int(obj["rows"]), int(obj["cols"]), obj["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from exc
    if len(entries) != r * c:
        raise ValueError(f"matrix expects {r * c} entries, got {len(entries)}")
    return asmatrix([rational_from_json(x) for x in entries], rows=r, cols=c)

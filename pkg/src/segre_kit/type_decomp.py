"""(p,q)-types of bilinear maps on W with respect to an ε-structure.

A ``BilinearMap`` stores the values on basis pairs of W: for W-valued maps
``values[i, j, k]`` is the k-th coordinate of φ(e_i, e_j); scalar-valued
maps drop the last axis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import rational as rq
from .pq_linear import EpsilonStructure, StructureTriple, standard_triple, w_basis

TYPES = ((2, 0), (1, 1), (0, 2))


@dataclass(frozen=True, eq=False)
class BilinearMap:
    n: int
    values: np.ndarray

    def __post_init__(self):
        d = 2 * self.n
        if self.values.shape not in ((d, d), (d, d, d)):
            raise ValueError(f"values of shape {self.values.shape} do not fit dim W = {d}")

    @property
    def arity(self) -> str:
        return "scalar" if self.values.ndim == 2 else "vector"

    @property
    def dim(self) -> int:
        return 2 * self.n

    def __add__(self, other: "BilinearMap") -> "BilinearMap":
        return BilinearMap(self.n, self.values + other.values)

    def __sub__(self, other: "BilinearMap") -> "BilinearMap":
        return BilinearMap(self.n, self.values - other.values)

    def __neg__(self) -> "BilinearMap":
        return BilinearMap(self.n, -self.values)

    def __rmul__(self, s) -> "BilinearMap":
        return BilinearMap(self.n, rq.to_rational(s) * self.values)

    def __eq__(self, other) -> bool:
        return isinstance(other, BilinearMap) and self.n == other.n and rq.equal(self.values, other.values)

    def is_zero(self) -> bool:
        return rq.is_zero(self.values)

    def is_alternating(self) -> bool:
        v = self.values
        return rq.equal(v, -np.swapaxes(v, 0, 1))

    def is_symmetric(self) -> bool:
        v = self.values
        return rq.equal(v, np.swapaxes(v, 0, 1))

    def __call__(self, X, Y):
        x = np.asarray(X, dtype=object).reshape(-1)
        y = np.asarray(Y, dtype=object).reshape(-1)
        return np.tensordot(np.tensordot(x, self.values, axes=(0, 0)), y, axes=(0, 0))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "arity": self.arity,
            "values": [rq.rational_to_json(x) for x in self.values.reshape(-1)],
        }

    @classmethod
    def from_json(cls, obj) -> "BilinearMap":
        try:
            n = int(obj["n"])
            arity = obj["arity"]
            values = obj["values"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed bilinear map: {exc}") from exc
        d = 2 * n
        if arity == "scalar":
            shape = (d, d)
        elif arity == "vector":
            shape = (d, d, d)
        else:
            raise ValueError(f"unknown arity {arity!r}")
        if not isinstance(values, list) or len(values) != int(np.prod(shape)):
            raise ValueError(f"{arity} map on n={n} needs {int(np.prod(shape))} values")
        return cls(n, rq.asarray([rq.rational_from_json(x) for x in values]).reshape(shape))


def zero_map(n: int, arity: str = "vector") -> BilinearMap:
    d = 2 * n
    return BilinearMap(n, rq.zeros((d, d) if arity == "scalar" else (d, d, d)))


def from_function(n: int, f: Callable, arity: str = "vector") -> BilinearMap:
    """Tabulate φ on basis pairs; ``f`` receives two n x 2 matrices."""
    basis = w_basis(n)
    d = 2 * n
    vals = rq.zeros((d, d) if arity == "scalar" else (d, d, d))
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            out = f(x, y)
            if arity == "scalar":
                vals[i, j] = rq.to_rational(out)
            else:
                vals[i, j] = rq.asarray(out).reshape(-1)
    return BilinearMap(n, vals)


def from_gram(n: int, gram) -> BilinearMap:
    return BilinearMap(n, rq.asmatrix(gram))


# ---------------------------------------------------------------------------
# composition with an endomorphism of W


def _endo(A, n: int) -> np.ndarray:
    if isinstance(A, EpsilonStructure):
        return A.on_w(n)
    m = rq.asmatrix(A)
    if m.shape != (2 * n, 2 * n):
        raise ValueError(f"endomorphism of shape {m.shape} does not act on W of dim {2 * n}")
    return m


def _first(v, M):
    return np.einsum("li,lj...->ij...", M, v)


def _second(v, M):
    return np.einsum("lj,il...->ij...", M, v)


def _post(v, M):
    return np.einsum("kl,ijl->ijk", M, v)


def _norm_sq(A, n: int) -> Fraction:
    """|A|² with A∘A = -|A|² id."""
    if isinstance(A, EpsilonStructure):
        return A.norm_sq
    M = _endo(A, n)
    sq = M.dot(M)
    c = sq[0, 0]
    if not rq.equal(sq, c * rq.identity(2 * n)):
        raise ValueError("endomorphism does not square to a multiple of the identity")
    return -c


def type_check(phi: BilinearMap, A, typ: tuple[int, int]) -> bool:
    """Exact check of the defining identities of the given type on basis pairs."""
    M = _endo(A, phi.n)
    v = phi.values
    if typ == (1, 1):
        return rq.equal(_first(_second(v, M), M), _norm_sq(A, phi.n) * v)
    if phi.arity == "scalar":
        raise ValueError(f"type {typ} is only defined for W-valued maps")
    if typ not in ((0, 2), (2, 0)):
        raise ValueError(f"unknown type {typ}")
    sign = -1 if typ == (0, 2) else 1
    target = sign * _post(v, M)
    return rq.equal(_first(v, M), target) and rq.equal(_second(v, M), target)


def pq_parts(phi: BilinearMap, A) -> tuple[BilinearMap, BilinearMap, BilinearMap]:
    """(φ^{2,0}, φ^{1,1}, φ^{0,2}) with respect to A, for |A|² ≠ 0."""
    if phi.arity != "vector":
        raise ValueError("pq_parts needs a W-valued map")
    s = _norm_sq(A, phi.n)
    if s == 0:
        raise ValueError("pq_parts needs |A|² != 0; use part02_nilpotent")
    M = _endo(A, phi.n)
    v = phi.values
    both = _first(_second(v, M), M)
    mixed = _post(_first(v, M), M) + _post(_second(v, M), M)
    p11 = (s * v + both) * Fraction(1, 2) / s
    p02 = (s * v - both + mixed) * Fraction(1, 4) / s
    p20 = (s * v - both - mixed) * Fraction(1, 4) / s
    return BilinearMap(phi.n, p20), BilinearMap(phi.n, p11), BilinearMap(phi.n, p02)


def part02_nilpotent(phi: BilinearMap, A) -> BilinearMap:
    """¼(-φ(AX,AY) + Aφ(AX,Y) + Aφ(X,AY)) for a nonzero A with A∘A = 0."""
    if phi.arity != "vector":
        raise ValueError("part02_nilpotent needs a W-valued map")
    M = _endo(A, phi.n)
    if _norm_sq(A, phi.n) != 0 or rq.is_zero(M):
        raise ValueError("part02_nilpotent needs a nonzero A with |A|² = 0")
    v = phi.values
    out = -_first(_second(v, M), M) + _post(_first(v, M), M) + _post(_second(v, M), M)
    return BilinearMap(phi.n, out * Fraction(1, 4))


def part02(phi: BilinearMap, A) -> BilinearMap:
    """(0,2)-part, dispatching on whether |A|² vanishes."""
    if _norm_sq(A, phi.n) == 0:
        return part02_nilpotent(phi, A)
    return pq_parts(phi, A)[2]


def scalar_parts(phi: BilinearMap, A) -> tuple[BilinearMap, BilinearMap]:
    """(1,1)-part ½(φ + φ(A·,A·)/|A|²) of a scalar form and the remainder, for |A|² != 0."""
    if phi.arity != "scalar":
        raise ValueError("scalar_parts acts on scalar-valued maps")
    s = _norm_sq(A, phi.n)
    if s == 0:
        raise ValueError("scalar_parts needs |A|² != 0")
    M = _endo(A, phi.n)
    p11 = (phi.values + _first(_second(phi.values, M), M) / s) * Fraction(1, 2)
    return BilinearMap(phi.n, p11), BilinearMap(phi.n, phi.values - p11)


def pi11(phi: BilinearMap, triple: StructureTriple | None = None) -> BilinearMap:
    """¼(φ - φ(I·,I·) - φ(J·,J·) + φ(K·,K·)) for scalar φ."""
    if phi.arity != "scalar":
        raise ValueError("pi11 acts on scalar-valued maps")
    triple = triple or standard_triple()
    triple.validate(phi.n)
    v = phi.values
    out = v.copy()
    for A, sign in ((triple.I, -1), (triple.J, -1), (triple.K, 1)):
        M = A.on_w(phi.n)
        out = out + sign * _first(_second(v, M), M)
    return BilinearMap(phi.n, out * Fraction(1, 4))


# ---------------------------------------------------------------------------
# U/V symmetry splitting, W = U* ⊗ V


def _uv_project(v: np.ndarray, n: int, sigma: int, tau: int) -> np.ndarray:
    """Project a 2-form on W onto the (σ on U-slots, τ on V-slots) symmetry class."""
    # slot order of the 4-tensor: (a, b, a', b') with a, a' in V and b, b' in U
    t = v.reshape(n, 2, n, 2, *v.shape[2:])
    swap_u = np.swapaxes(t, 1, 3)
    swap_v = np.swapaxes(t, 0, 2)
    swap_both = np.swapaxes(swap_u, 0, 2)
    out = (t + sigma * swap_u + tau * swap_v + sigma * tau * swap_both) * Fraction(1, 4)
    return out.reshape(v.shape)


def uv_projection(phi: BilinearMap, sigma: int, tau: int) -> BilinearMap:
    return BilinearMap(phi.n, _uv_project(phi.values, phi.n, sigma, tau))


def lambda2_split(omega: BilinearMap) -> tuple[BilinearMap, BilinearMap]:
    """(Λ²U⊗S²V* part, S²U⊗Λ²V* part) of an alternating form."""
    if not omega.is_alternating():
        raise ValueError("lambda2_split needs an alternating map")
    return uv_projection(omega, -1, 1), uv_projection(omega, 1, -1)


def sym_split(g: BilinearMap) -> tuple[BilinearMap, BilinearMap]:
    """(Λ²U⊗Λ²V* part, S²U⊗S²V* part) of a symmetric form."""
    if not g.is_symmetric():
        raise ValueError("sym_split needs a symmetric map")
    return uv_projection(g, -1, -1), uv_projection(g, 1, 1)


def wedge_basis(n: int) -> list[BilinearMap]:
    """The elementary alternating scalar forms e^i ∧ e^j, i < j."""
    d = 2 * n
    out = []
    for i in range(d):
        for j in range(i + 1, d):
            v = rq.zeros((d, d))
            v[i, j] = Fraction(1)
            v[j, i] = Fraction(-1)
            out.append(BilinearMap(n, v))
    return out


def lemma_decomp_check(n: int, triple: StructureTriple | None = None) -> bool:
    """Λ²U⊗S²V* equals the (1,1)-part and S²U⊗Λ²V* equals ker π¹¹, on all of Λ²W*."""
    if n < 1:
        raise ValueError("n must be positive")
    for omega in wedge_basis(n):
        first, second = lambda2_split(omega)
        p = pi11(omega, triple)
        if first != p or second != omega - p:
            return False
    return True

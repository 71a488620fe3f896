"""Kostant harmonic spaces of the |1|-graded sl(2+n).

A k-cochain is an alternating k-linear map on g₋₁ with values in g.
Cochains with values in g_j have homogeneity k + j; both ∂ and ∂*
preserve homogeneity, so all matrices are assembled blockwise as dense
integer arrays on Λ^k(g₋₁)* ⊗ g_j.

With z^a ∈ g₁ dual to x_a ∈ g₋₁ under the trace form,

    (∂φ)(x_0..x_k)   = Σ_s (-1)^s [x_s, φ(x_0..x̂_s..x_k)]
    (∂*φ)(x_1..x_{k-1}) = Σ_a [z^a, φ(x_a, x_1..x_{k-1})]

and the latter equals the homology boundary
∂*(Z₀∧Z₁⊗w) = -Z₀⊗[Z₁,w] + Z₁⊗[Z₀,w] after transporting Λp₊ to Λ(g₋₁)*.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from . import rational as rq
from .parabolic import GradedAlgebra, build_algebra
from .pq_linear import STANDARD_J, make_structure, standard
from .type_decomp import BilinearMap, _uv_project, from_function, part02, type_check


def _subsets(d: int, k: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(d), k))


@dataclass(frozen=True)
class CochainSpace:
    """Λ^k(g₋₁)* ⊗ g_j with columns indexed by (subset, value index)."""

    alg: GradedAlgebra
    k: int
    j: int

    @property
    def subsets(self) -> list[tuple[int, ...]]:
        return _subsets(2 * self.alg.n, self.k)

    @property
    def values(self) -> list[int]:
        if self.j not in (-1, 0, 1):
            return []
        return self.alg.indices(self.j)

    @property
    def dim(self) -> int:
        return len(self.subsets) * len(self.values)

    def index(self) -> dict[tuple[tuple[int, ...], int], int]:
        vals = self.values
        return {(s, t): i * len(vals) + q for i, s in enumerate(self.subsets) for q, t in enumerate(vals)}

    def to_array(self, vec) -> np.ndarray:
        """Dense alternating array of shape (2n,)*k + (dim g,)."""
        d = 2 * self.alg.n
        out = rq.zeros((d,) * self.k + (self.alg.dim,))
        for (s, t), col in self.index().items():
            c = vec[col]
            if not c:
                continue
            for perm in itertools.permutations(range(self.k)):
                idx = tuple(s[p] for p in perm)
                out[idx + (t,)] = _perm_sign(perm) * c
        return out

    def from_array(self, arr) -> np.ndarray:
        vec = rq.zeros(self.dim)
        for (s, t), col in self.index().items():
            vec[col] = rq.to_rational(arr[s + (t,)])
        return vec


def _perm_sign(perm) -> int:
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


@dataclass(frozen=True)
class Cochain:
    degree: int
    values: np.ndarray

    def __post_init__(self):
        if self.degree not in (1, 2, 3):
            raise ValueError("cochain degree must be 1, 2 or 3")
        if self.values.ndim != self.degree + 1:
            raise ValueError("values do not match the degree")

    def is_alternating(self) -> bool:
        v = self.values
        for a in range(self.degree - 1):
            if not rq.equal(v, -np.swapaxes(v, a, a + 1)):
                return False
        return True

    def w_part(self, alg: GradedAlgebra) -> BilinearMap:
        """The g₋₁ = W component of a 2-cochain as a W-valued bilinear map."""
        if self.degree != 2:
            raise ValueError("w_part needs a 2-cochain")
        return BilinearMap(alg.n, self.values[:, :, alg.g_minus].copy())


# ---------------------------------------------------------------------------
# differentials


def differential(alg: GradedAlgebra, k: int, j: int) -> np.ndarray:
    """∂ : Λ^k ⊗ g_j -> Λ^{k+1} ⊗ g_{j-1} as an integer matrix."""
    src = CochainSpace(alg, k, j)
    dst = CochainSpace(alg, k + 1, j - 1)
    mat = np.zeros((dst.dim, src.dim), dtype=np.int64)
    if not src.dim or not dst.dim:
        return mat
    C = alg.structure_constants
    gm = alg.g_minus
    src_idx, dst_idx = src.index(), dst.index()
    for J in dst.subsets:
        for s, x in enumerate(J):
            rest = J[:s] + J[s + 1:]
            sign = -1 if s % 2 else 1
            for t in src.values:
                col = src_idx[(rest, t)]
                for tp in dst.values:
                    c = C[gm[x], t, tp]
                    if c:
                        mat[dst_idx[(J, tp)], col] += sign * c
    return mat


def codifferential(alg: GradedAlgebra, k: int, j: int) -> np.ndarray:
    """∂* : Λ^k ⊗ g_j -> Λ^{k-1} ⊗ g_{j+1} as an integer matrix."""
    src = CochainSpace(alg, k, j)
    dst = CochainSpace(alg, k - 1, j + 1)
    mat = np.zeros((dst.dim, src.dim), dtype=np.int64)
    if not src.dim or not dst.dim:
        return mat
    C = alg.structure_constants
    src_idx, dst_idx = src.index(), dst.index()
    d = 2 * alg.n
    for I in dst.subsets:
        for a in range(d):
            if a in I:
                continue
            S = tuple(sorted(I + (a,)))
            sign = -1 if S.index(a) % 2 else 1
            z = alg.dual_index(alg.g_minus[a])
            for t in src.values:
                col = src_idx[(S, t)]
                for tp in dst.values:
                    c = C[z, t, tp]
                    if c:
                        mat[dst_idx[(I, tp)], col] += sign * c
    return mat


def laplacian(alg: GradedAlgebra, k: int, j: int) -> np.ndarray:
    """□ = ∂∂* + ∂*∂ on Λ^k ⊗ g_j."""
    out = np.zeros((CochainSpace(alg, k, j).dim,) * 2, dtype=np.int64)
    if k >= 1 and CochainSpace(alg, k - 1, j + 1).dim:
        out += differential(alg, k - 1, j + 1) @ codifferential(alg, k, j)
    if CochainSpace(alg, k + 1, j - 1).dim:
        out += codifferential(alg, k + 1, j - 1) @ differential(alg, k, j)
    return out


def complex_checks(alg: GradedAlgebra) -> tuple[bool, bool]:
    """(∂∘∂ = 0, ∂*∘∂* = 0) on all blocks reachable from degrees 1..3."""
    dd = all(
        not np.any(differential(alg, k + 1, j - 1) @ differential(alg, k, j))
        for k in (1, 2)
        for j in (-1, 0, 1)
    )
    ss = all(
        not np.any(codifferential(alg, k - 1, j + 1) @ codifferential(alg, k, j))
        for k in (2, 3)
        for j in (-1, 0, 1)
    )
    return dd, ss


def _int_rows(mat: np.ndarray) -> list[dict[int, Fraction]]:
    rows = []
    for r in mat:
        nz = np.flatnonzero(r)
        if len(nz):
            rows.append({int(i): Fraction(int(r[i])) for i in nz})
    return rows


def harmonic_basis(alg: GradedAlgebra, k: int, j: int) -> list[np.ndarray]:
    """Exact basis of ker ∂ ∩ ker ∂* in Λ^k ⊗ g_j (coordinate vectors)."""
    space = CochainSpace(alg, k, j)
    rows = []
    if CochainSpace(alg, k + 1, j - 1).dim:
        rows += _int_rows(differential(alg, k, j))
    if k >= 1 and CochainSpace(alg, k - 1, j + 1).dim:
        rows += _int_rows(codifferential(alg, k, j))
    return rq.null_space_rows(rows, space.dim)


# ---------------------------------------------------------------------------
# harmonic spaces in degree 2


SL2_BLOCK = "sl(E)"
SLN_BLOCK = "sl(F)"


def block_indices(alg: GradedAlgebra) -> dict[str, list[int]]:
    """g₀ basis indices of the two simple Levi factors."""
    upper = [alg._offdiag[(0, 1)], alg._offdiag[(1, 0)], alg.cartan_start]
    lower = [k for k in alg.g_zero if k not in upper and k != alg.cartan_start + 1]
    return {SL2_BLOCK: upper, SLN_BLOCK: lower}


@dataclass
class HarmonicSpace:
    n: int
    components: dict[int, list[Cochain]]
    dimensions: dict[int, int]
    k_split: Optional[dict[str, int]] = None
    k_split_ok: Optional[bool] = None
    torsion_trace_free: Optional[bool] = None
    torsion_symmetry_type: Optional[bool] = None
    torsion_oracle_dimension: Optional[int] = None
    values_graded: bool = True
    details: dict = field(default_factory=dict)


def _projected(values: np.ndarray, n: int, sigma: int, tau: int) -> np.ndarray:
    return _uv_project(values, n, sigma, tau)


def traces(w_values: np.ndarray, n: int) -> list[np.ndarray]:
    """All contractions of a W-valued 2-form on W, W = U* ⊗ V with U = ℝ², V = ℝⁿ."""
    t = w_values.reshape(n, 2, n, 2, n, 2)
    return [
        np.einsum("abxycb->axyc", t),  # first-slot U against value U*
        np.einsum("xyabcb->xyac", t),
        np.einsum("abxyae->bxye", t),  # value V against first-slot V*
        np.einsum("xyabae->xybe", t),
    ]


def trace_free_oracle_dimension(n: int) -> int:
    """dim of the trace-free parts of S²U⊗U* and Λ²V*⊗V, multiplied, by rank counting."""

    def kernel_dim(basis: list[np.ndarray], contract) -> int:
        images = [contract(b).reshape(-1) for b in basis]
        return len(basis) - rq.rank(np.array(images, dtype=object))

    sym_u = []
    for b, bp in itertools.combinations_with_replacement(range(2), 2):
        for e in range(2):
            t = rq.zeros((2, 2, 2))
            t[b, bp, e] += 1
            if b != bp:
                t[bp, b, e] += 1
            sym_u.append(t)
    alt_v = []
    for a, ap in itertools.combinations(range(n), 2):
        for c in range(n):
            t = rq.zeros((n, n, n))
            t[a, ap, c] = Fraction(1)
            t[ap, a, c] = Fraction(-1)
            alt_v.append(t)
    ku = kernel_dim(sym_u, lambda t: np.einsum("bpb->p", t))
    kv = kernel_dim(alt_v, lambda t: np.einsum("apa->p", t))
    return ku * kv


def kostant_harmonics(alg: GradedAlgebra, homogeneities=(1, 2, 3)) -> HarmonicSpace:
    """Harmonic 2-cochains split by homogeneity h (values in g_{h-2})."""
    n = alg.n
    comps: dict[int, list[Cochain]] = {}
    for h in homogeneities:
        j = h - 2
        space = CochainSpace(alg, 2, j)
        comps[h] = [Cochain(2, space.to_array(v)) for v in harmonic_basis(alg, 2, j)]
    hs = HarmonicSpace(n, comps, {h: len(c) for h, c in comps.items()})
    for h, cs in comps.items():
        allowed = set(alg.indices(h - 2))
        for c in cs:
            support = {int(t) for t in np.flatnonzero(np.any(c.values != 0, axis=(0, 1)))}
            if not support <= allowed:
                hs.values_graded = False
    if 1 in comps and comps[1]:
        ws = [c.values[:, :, alg.g_minus] for c in comps[1]]
        hs.torsion_trace_free = all(rq.is_zero(t) for w in ws for t in traces(w, n))
        hs.torsion_symmetry_type = all(rq.equal(_projected(w, n, 1, -1), w) for w in ws)
        hs.torsion_oracle_dimension = trace_free_oracle_dimension(n)
    if n == 2 and 2 in comps:
        hs.k_split, hs.k_split_ok = _k_split(alg, comps[2])
    return hs


def _fixed_subspace(vectors: list[np.ndarray], n: int, sigma: int, tau: int) -> list[np.ndarray]:
    """Members of span(vectors) fixed by the (σ, τ) projector."""
    if not vectors:
        return []
    diffs = [(_projected(v, n, sigma, tau) - v).reshape(-1) for v in vectors]
    coeffs = rq.null_space(np.array(diffs, dtype=object).T)
    return [sum((c * v for c, v in zip(cs, vectors)), rq.zeros(vectors[0].shape)) for cs in coeffs]


def _k_split(alg: GradedAlgebra, comps: list[Cochain]) -> tuple[dict[str, int], bool]:
    n = alg.n
    vecs = [c.values for c in comps]
    k1 = _fixed_subspace(vecs, n, 1, -1)   # S²E ⊗ Λ²F* ⊗ sl(E)
    k2 = _fixed_subspace(vecs, n, -1, 1)   # Λ²E ⊗ S²F* ⊗ sl(F)
    blocks = block_indices(alg)

    def supported_in(v, idx) -> bool:
        other = [t for t in range(alg.dim) if t not in idx]
        return rq.is_zero(v[:, :, other])

    ok = (
        len(k1) > 0
        and len(k2) > 0
        and len(k1) + len(k2) == len(vecs)
        and all(supported_in(v, blocks[SL2_BLOCK]) for v in k1)
        and all(supported_in(v, blocks[SLN_BLOCK]) for v in k2)
    )
    return {"K1": len(k1), "K2": len(k2)}, ok


# ---------------------------------------------------------------------------
# the torsion argument for integrability of the twistor structures


def _require_n3(alg: GradedAlgebra) -> None:
    if alg.n < 3:
        raise ValueError("needs n >= 3")


def phi_map(n: int) -> BilinearMap:
    """φ(X, Y) = (X₁₁Y₂₁ - X₂₁Y₁₁)·E₃₂ on W, depending only on first columns."""
    if n < 3:
        raise ValueError("needs n >= 3")

    def f(X, Y):
        out = rq.zeros((n, 2))
        out[2, 1] = X[0, 0] * Y[1, 0] - X[1, 0] * Y[0, 0]
        return out

    return from_function(n, f)


PROOF_J_MINUS = [[0, -1], [1, 0]]
PROOF_J_ZERO = [[0, 0], [1, 0]]


@dataclass
class PhiReport:
    harmonic: bool
    in_torsion_space: bool
    type02_j_plus: bool
    part02_j_minus_nonzero: bool
    part02_j_zero_nonzero: bool

    @property
    def passed(self) -> bool:
        return all(vars(self).values())


def _as_cochain(alg: GradedAlgebra, phi: BilinearMap) -> np.ndarray:
    d = 2 * alg.n
    vals = rq.zeros((d, d, alg.dim))
    vals[:, :, alg.g_minus] = phi.values
    return vals


def phi_counterexample(alg: GradedAlgebra) -> PhiReport:
    _require_n3(alg)
    phi = phi_map(alg.n)
    space = CochainSpace(alg, 2, -1)
    vec = space.from_array(_as_cochain(alg, phi))
    harmonic = rq.is_zero(codifferential(alg, 2, -1).astype(object).dot(vec))
    return PhiReport(
        harmonic=harmonic,
        in_torsion_space=rq.in_span(vec, harmonic_basis(alg, 2, -1)),
        type02_j_plus=type_check(phi, standard(1), (0, 2)),
        part02_j_minus_nonzero=not part02(phi, make_structure(PROOF_J_MINUS)).is_zero(),
        part02_j_zero_nonzero=not part02(phi, make_structure(PROOF_J_ZERO)).is_zero(),
    )


ELEMENTARY_CONJUGATORS = (
    [[1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[1, 1], [0, 1]],
    [[1, 0], [1, 1]],
    [[2, 0], [0, 1]],
    [[1, 0], [0, 2]],
)


def conjugate_family(eps: int, extra: int = 0, seed: int = 0, depth: int = 2) -> list[np.ndarray]:
    """Distinct conjugates of j^ε by words of length ≤ depth in the elementary matrices,
    plus ``extra`` random conjugates.

    Depth 1 alone is not enough for ε = +1: the dilations commute with j⁺ and
    the remaining conjugates see only three eigenlines, which leaves a
    nonzero invisible subspace.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    j = STANDARD_J[eps]
    elementary = [rq.asmatrix(g) for g in ELEMENTARY_CONJUGATORS]
    words = list(elementary)
    frontier = list(elementary)
    for _ in range(depth - 1):
        frontier = [a.dot(b) for a in frontier for b in elementary]
        words += frontier
    rng = np.random.default_rng(seed)
    randoms = []
    while len(randoms) < extra:
        g = rq.asmatrix(rng.integers(-4, 5, size=(2, 2)).tolist())
        if rq.det(g) != 0:
            randoms.append(g)
    out: list[np.ndarray] = []
    for g in words:
        m = g.dot(j).dot(rq.inverse(g))
        if not any(rq.equal(m, o) for o in out):
            out.append(m)
    return out + [g.dot(j).dot(rq.inverse(g)) for g in randoms]


@lru_cache(maxsize=8)
def torsion_space(n: int) -> tuple[BilinearMap, ...]:
    """Homogeneity-1 harmonic space as W-valued bilinear maps."""
    alg = build_algebra(n)
    space = CochainSpace(alg, 2, -1)
    return tuple(
        BilinearMap(n, space.to_array(v)[:, :, alg.g_minus].copy()) for v in harmonic_basis(alg, 2, -1)
    )


def _integral(arr: np.ndarray) -> np.ndarray:
    """Positive rational multiple of ``arr`` with integer entries."""
    flat = [rq.to_rational(x) for x in arr.reshape(-1)]
    scale = 1
    for x in flat:
        scale = scale * x.denominator // math.gcd(scale, x.denominator)
    return np.array([int(x * scale) for x in flat], dtype=object).reshape(arr.shape)


def part02_numerator(values: np.ndarray, M: np.ndarray) -> np.ndarray:
    """s·φ - φ(A·,A·) + Aφ(A·,·) + Aφ(·,A·) with A∘A = -s·id.

    This is 4s times the (0,2)-part when s != 0 and 4 times it when A is
    nilpotent; it is homogeneous of degree two in A, so integer multiples of
    A and φ can be used to decide whether the (0,2)-part vanishes.
    """
    s = -(M.dot(M))[0, 0]
    both = np.einsum("li,mj,lmk->ijk", M, M, values)
    first = np.einsum("li,ljk->ijk", M, values)
    second = np.einsum("lj,ilk->ijk", M, values)
    mixed = np.einsum("kl,ijl->ijk", M, first + second)
    return s * values - both + mixed


def _rank_incremental(rows, ncols: int) -> int:
    """Exact rank of integer rows, stopping once it reaches ``ncols``."""
    pivots: list[tuple[int, list[int]]] = []
    for row in rows:
        r = [int(x) for x in row]
        for col, prow in pivots:
            if r[col]:
                a, b = prow[col], r[col]
                r = [a * x - b * y for x, y in zip(r, prow)]
        nz = [i for i, x in enumerate(r) if x]
        if not nz:
            continue
        g = 0
        for i in nz:
            g = math.gcd(g, r[i])
        pivots.append((nz[0], [x // g for x in r]))
        if len(pivots) == ncols:
            break
    return len(pivots)


@dataclass
class InvisibleTorsionReport:
    eps: int
    n: int
    torsion_dimension: int
    family_size: int
    invisible_dimension: int

    @property
    def passed(self) -> bool:
        return self.invisible_dimension == 0


def invisible_torsion(
    alg: GradedAlgebra, eps: int, extra: int = 0, seed: int = 0, depth: int = 2, family=None
) -> InvisibleTorsionReport:
    """Dimension of the torsion elements whose (0,2)-part vanishes for every structure in the family."""
    _require_n3(alg)
    basis = torsion_space(alg.n)
    family = conjugate_family(eps, extra, seed, depth) if family is None else family
    ints = [_integral(phi.values) for phi in basis]
    mats = [_integral(rq.asmatrix(m)) for m in family]
    blocks = []
    for m in mats:
        M = np.kron(np.eye(alg.n, dtype=int).astype(object), m.T)
        blocks.append(np.array([part02_numerator(v, M).reshape(-1) for v in ints], dtype=object).T)
    rows = (r for block in blocks for r in block if any(r))
    rank = _rank_incremental(rows, len(basis)) if basis else 0
    return InvisibleTorsionReport(eps, alg.n, len(basis), len(family), len(basis) - rank)


def no_invisible_torsion(alg: GradedAlgebra, eps: int, extra: int = 0, seed: int = 0, depth: int = 2) -> bool:
    """True iff no nonzero torsion element has vanishing (0,2)-part for every structure in the family."""
    return invisible_torsion(alg, eps, extra, seed, depth).passed

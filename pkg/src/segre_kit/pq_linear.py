"""The standard para-quaternionic structure on W = Hom(R², Rⁿ).

Elements of W are n x 2 matrices ``X`` (columns indexed by e₁, e₂).  A
trace-free 2x2 matrix ``m`` acts on W by right composition, ``X -> X m``,
and the span of these actions is the standard structure Q_std.  Coordinates
on W use the row-major flattening of ``X``, i.e. the basis E_ab with
``index = 2 a + b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import rational as rq
from .paraquat import from_matrix

J_MINUS = rq.asmatrix([[0, 1], [-1, 0]])
J_ZERO = rq.asmatrix([[0, 1], [0, 0]])
J_PLUS = rq.asmatrix([[1, 0], [0, -1]])
J_SWAP = rq.asmatrix([[0, 1], [1, 0]])

STANDARD_J = {-1: J_MINUS, 0: J_ZERO, 1: J_PLUS}


@dataclass(frozen=True, eq=False)
class EpsilonStructure:
    """Right multiplication by a trace-free 2x2 matrix, viewed on W."""

    m: np.ndarray

    @property
    def norm_sq(self) -> Fraction:
        return rq.det(self.m)

    @property
    def epsilon(self) -> Fraction:
        return -rq.det(self.m)

    def on_w(self, n: int) -> np.ndarray:
        """Matrix of ``X -> X m`` in the E_ab basis of W."""
        return np.kron(rq.identity(n), self.m.T)

    def __eq__(self, other):
        return isinstance(other, EpsilonStructure) and rq.equal(self.m, other.m)

    def __hash__(self):
        return hash(tuple(self.m.reshape(-1)))

    def to_json(self) -> dict:
        return {"m": [[rq.rational_to_json(x) for x in row] for row in self.m]}

    @classmethod
    def from_json(cls, obj: dict) -> "EpsilonStructure":
        return make_structure([[rq.rational_from_json(x) for x in row] for row in obj["m"]])


def make_structure(m, allow_zero: bool = False) -> EpsilonStructure:
    m = rq.asmatrix(m)
    if m.shape != (2, 2):
        raise ValueError(f"structure block must be 2x2, got {m.shape}")
    if m[0, 0] + m[1, 1] != 0:
        raise ValueError("structure block must be trace-free")
    if not allow_zero and rq.is_zero(m):
        raise ValueError("zero structure block (pass allow_zero=True to permit it)")
    return EpsilonStructure(m)


def standard(eps: int) -> EpsilonStructure:
    return EpsilonStructure(STANDARD_J[eps].copy())


def tensor_w(entries) -> np.ndarray:
    x = rq.asmatrix(entries)
    if x.shape[1] != 2:
        raise ValueError(f"elements of W are n x 2 matrices, got {x.shape}")
    return x


def w_basis(n: int) -> list[np.ndarray]:
    out = []
    for a in range(n):
        for b in range(2):
            e = rq.zeros((n, 2))
            e[a, b] = Fraction(1)
            out.append(e)
    return out


def w_to_json(x) -> dict:
    x = tensor_w(x)
    return {"n": int(x.shape[0]), "entries": [[rq.rational_to_json(v) for v in row] for row in x]}


def w_from_json(obj) -> np.ndarray:
    x = tensor_w([[rq.rational_from_json(v) for v in row] for row in obj["entries"]])
    if x.shape[0] != int(obj["n"]):
        raise ValueError("entries do not have n rows")
    return x


def apply(A: EpsilonStructure, X) -> np.ndarray:
    return tensor_w(X).dot(A.m)


def compose(A: EpsilonStructure, B: EpsilonStructure) -> np.ndarray:
    """2x2 block of the composite action A∘B on W (note the order swap)."""
    return B.m.dot(A.m)


def twistor_sign(A: EpsilonStructure) -> tuple[int, Optional[int]]:
    """Sign of ε and, for ε < 0, the sheet of the two-sheeted hyperboloid.

    The sheet is the sign of the k-coefficient of the split quaternion
    representing ``A``; that coefficient never vanishes when |A|² > 0.
    """
    if rq.is_zero(A.m):
        raise ValueError("twistor_sign of the zero structure")
    eps = A.epsilon
    sign = (eps > 0) - (eps < 0)
    if sign < 0:
        d = from_matrix(A.m).d
        return -1, (1 if d > 0 else -1)
    return sign, None


def segre_member(X) -> tuple[bool, bool]:
    """``(is_rank_one, zero_input)`` for an element of W."""
    r = rq.rank(tensor_w(X))
    return r == 1, r == 0


def _kernel_line(X) -> np.ndarray:
    ker = rq.null_space(tensor_w(X))
    if len(ker) != 1:
        raise ValueError(f"expected a rank-one element, kernel has dimension {len(ker)}")
    return ker[0]


def para_complex_for(X) -> EpsilonStructure:
    """Para-complex structure fixing a rank-one X.

    ker X becomes the -1 eigenline; the +1 eigenline is the first standard
    basis vector of R² not lying in ker X.
    """
    k = _kernel_line(X)
    ell = rq.asarray([1, 0]) if k[1] != 0 else rq.asarray([0, 1])
    s = np.array([ell, k], dtype=object).T
    m = s.dot(np.diag(np.array([Fraction(1), Fraction(-1)], dtype=object))).dot(rq.inverse(s))
    return make_structure(m)


def beta_plane(u, n: int) -> list[np.ndarray]:
    """Basis of {X in W : X u = 0}, an n-dimensional subspace."""
    u = rq.asarray(u).reshape(-1)
    if u.shape != (2,) or rq.is_zero(u):
        raise ValueError("beta_plane needs a nonzero vector in R²")
    return [v.reshape(n, 2) for v in rq.null_space(_right_action_matrix(u, n))]


def _right_action_matrix(u, n: int) -> np.ndarray:
    # coordinates of X u in terms of vec(X)
    return np.kron(rq.identity(n), u.reshape(1, 2))


def alpha_plane(v) -> list[np.ndarray]:
    """Basis of {X : im X ⊆ span v}, a 2-dimensional subspace."""
    v = rq.asarray(v).reshape(-1)
    if rq.is_zero(v):
        raise ValueError("alpha_plane needs a nonzero vector")
    out = []
    for b in range(2):
        x = rq.zeros((len(v), 2))
        x[:, b] = v
        out.append(x)
    return out


def _eigenspace(A: EpsilonStructure, n: int, value) -> list[np.ndarray]:
    m = A.on_w(n) - value * rq.identity(2 * n)
    return [v.reshape(n, 2) for v in rq.null_space(m)]


def eigen_split(A: EpsilonStructure, n: int) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """(W₊, W₋) for a para-complex structure (ε = 1)."""
    if A.epsilon != 1:
        raise ValueError(f"eigen_split needs epsilon = 1, got {A.epsilon}")
    return _eigenspace(A, n, 1), _eigenspace(A, n, -1)


def kernel_image(A: EpsilonStructure, n: int) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """(ker A, im A) for a tangent structure (ε = 0, A ≠ 0)."""
    if A.epsilon != 0 or rq.is_zero(A.m):
        raise ValueError("kernel_image needs a nonzero structure with epsilon = 0")
    ker = _eigenspace(A, n, 0)
    im = [x.reshape(n, 2) for x in rq.span_basis(A.on_w(n).T)]
    return ker, im


@dataclass(frozen=True, eq=False)
class StructureTriple:
    """Basis (I, J, K) of Q_std with I∘I = J∘J = id and K = I∘J = -J∘I."""

    I: EpsilonStructure
    J: EpsilonStructure
    K: EpsilonStructure

    @classmethod
    def from_pair(cls, i_block, j_block) -> "StructureTriple":
        I = make_structure(i_block)
        J = make_structure(j_block)
        K = make_structure(compose(I, J))
        trip = cls(I, J, K)
        trip.validate()
        return trip

    def validate(self, n: int = 1) -> None:
        I, J, K = (x.on_w(n) for x in (self.I, self.J, self.K))
        idn = rq.identity(2 * n)
        checks = {
            "I∘I = id": rq.equal(I.dot(I), idn),
            "J∘J = id": rq.equal(J.dot(J), idn),
            "K = I∘J": rq.equal(K, I.dot(J)),
            "K = -J∘I": rq.equal(K, -J.dot(I)),
        }
        bad = [name for name, ok in checks.items() if not ok]
        if bad:
            raise ValueError(f"not a structure triple: {', '.join(bad)} fails")

    def conjugated(self, g) -> "StructureTriple":
        g = rq.asmatrix(g)
        gi = rq.inverse(g)
        blocks = [g.dot(x.m).dot(gi) for x in (self.I, self.J, self.K)]
        trip = StructureTriple(*(make_structure(b) for b in blocks))
        trip.validate()
        return trip


def standard_triple() -> StructureTriple:
    return StructureTriple.from_pair(J_PLUS, J_SWAP)


# ---------------------------------------------------------------------------
# metrics and the dimension-four form


@dataclass(frozen=True, eq=False)
class SymBilinear:
    n: int
    gram: np.ndarray

    def __call__(self, X, Y) -> Fraction:
        return tensor_w(X).reshape(-1).dot(self.gram).dot(tensor_w(Y).reshape(-1))


def compatible_metric(omega_u, omega_v) -> SymBilinear:
    """g(X, Y) = Σ_ab (ω_U⁻¹)_ab ω_V(X e_a, Y e_b)."""
    wu = rq.asmatrix(omega_u)
    wv = rq.asmatrix(omega_v)
    n = wv.shape[0]
    if wu.shape != (2, 2) or wv.shape != (n, n):
        raise ValueError("omega_U must be 2x2 and omega_V square")
    if n % 2:
        raise ValueError("a nondegenerate compatible metric needs even n")
    if not (rq.equal(wu, -wu.T) and rq.equal(wv, -wv.T)):
        raise ValueError("omega_U and omega_V must be skew")
    if rq.det(wu) == 0 or rq.det(wv) == 0:
        raise ValueError("omega_U and omega_V must be invertible")
    wui = rq.inverse(wu)
    # gram[(a,b),(c,d)] = g(E_ab, E_cd) = (ω_U⁻¹)_bd ω_V[a, c]
    gram = np.einsum("ac,bd->abcd", wv, wui).reshape(2 * n, 2 * n)
    return SymBilinear(n, gram)


def standard_symplectic(n: int) -> np.ndarray:
    w = rq.zeros((n, n))
    for k in range(0, n - 1, 2):
        w[k, k + 1] = Fraction(1)
        w[k + 1, k] = Fraction(-1)
    return w


def delta_form(X, Y) -> Fraction:
    """Polar form of det on 2x2 matrices: ½(det(X+Y) - det X - det Y)."""
    X = tensor_w(X)
    Y = tensor_w(Y)
    if X.shape != (2, 2) or Y.shape != (2, 2):
        raise ValueError("delta_form is only defined for n = 2")
    return Fraction(1, 2) * (rq.det(X + Y) - rq.det(X) - rq.det(Y))


def delta_gram() -> np.ndarray:
    basis = w_basis(2)
    return rq.asmatrix([[delta_form(x, y) for y in basis] for x in basis])


def _left_mult_on_w(B, n: int) -> np.ndarray:
    return np.kron(rq.asmatrix(B), rq.identity(2))


def skew_square_scalar_set() -> dict:
    """Classify {A ∈ End(W) : A δ-skew and A∘A ∈ R·id} for n = 2.

    The δ-skew endomorphisms are found as an exact null space.  That space is
    then split into left multiplications ``X -> B X`` and right
    multiplications ``X -> X C`` (B, C trace-free).  Both pieces square to
    scalars, and the nine cross products l∘r together with id are linearly
    independent, so ``(l + r)²`` is scalar only when l = 0 or r = 0.  The
    solution set is therefore the union of the two 3-dimensional pieces; the
    right multiplications are exactly Q_std, the left ones are not.
    """
    n = 2
    dim = 2 * n
    G = delta_gram()
    # unknown A (dim x dim, row-major); skewness: Aᵀ G + G A = 0
    rows = []
    for p in range(dim):
        for q in range(p, dim):
            row = {}
            for k in range(dim):
                # (Aᵀ G)_pq = Σ_k A[k,p] G[k,q]; (G A)_pq = Σ_k G[p,k] A[k,q]
                for idx, coeff in ((k * dim + p, G[k, q]), (k * dim + q, G[p, k])):
                    if coeff:
                        row[idx] = row.get(idx, Fraction(0)) + coeff
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.append(row)
    skew = [v.reshape(dim, dim) for v in rq.null_space_rows(rows, dim * dim)]

    sl2 = [J_PLUS, J_SWAP, J_MINUS]
    left = [_left_mult_on_w(B, n) for B in sl2]
    right = [make_structure(C).on_w(n) for C in sl2]
    flat = lambda ms: [m.reshape(-1) for m in ms]  # noqa: E731

    idn = rq.identity(dim)
    left_in = all(rq.in_span(x, flat(skew)) for x in flat(left))
    right_in = all(rq.in_span(x, flat(skew)) for x in flat(right))
    splits = rq.same_span(flat(skew), flat(left + right))

    def squares_scalar(ms):
        return all(
            rq.in_span((a.dot(b) + b.dot(a)).reshape(-1), [idn.reshape(-1)]) for a in ms for b in ms
        )

    cross = [l.dot(r) for l in left for r in right]
    commute = all(rq.equal(l.dot(r), r.dot(l)) for l in left for r in right)
    cross_rank = rq.rank(np.array(flat(cross) + [idn.reshape(-1)], dtype=object))

    classified = (
        splits and left_in and right_in and commute
        and squares_scalar(left) and squares_scalar(right) and cross_rank == 10
    )
    q_std = flat(right)
    components = [
        {"name": "right multiplications X -> X C", "dimension": 3,
         "equals_Q_std": rq.same_span(flat(right), q_std)},
        {"name": "left multiplications X -> B X", "dimension": 3,
         "equals_Q_std": rq.same_span(flat(left), q_std)},
    ]
    return {
        "skew_dimension": len(skew),
        "Q_std_in_solution_set": right_in and squares_scalar(right),
        "classified": classified,
        "components": components if classified else [],
        "converse_holds": classified and all(c["equals_Q_std"] for c in components),
        "note": (
            "left multiplications by trace-free B are δ-skew with scalar square "
            "but are not right multiplications; the stated converse needs an "
            "extra orientation/chirality restriction"
        ),
    }

"""The |1|-graded algebra pgl(2+n) = sl(2+n), its parabolic subalgebras and
the twistor stabilizers r^ε, together with the canonical structures J^ε on
g/r^ε.

Elements are handled as coordinate vectors in a fixed graded basis of
trace-free matrices.  Matrices in gl(2+n) are reduced modulo the centre by
removing their trace part before taking coordinates.

Basis order (m = n + 2, E_rc the elementary matrices):

* g₋₁: E_{2+a, b} at index ``2a + b`` -- this matches the E_ab basis of W,
* g₀:  off-diagonal entries of the two diagonal blocks, then the Cartan
  elements H_i = E_ii - E_{i+1,i+1}, i = 0..m-2,
* g₁:  E_{b, 2+a}, ordered like g₋₁, so that tr(z^i x_j) = δ_ij.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import rational as rq
from .pq_linear import STANDARD_J

EPSILONS = (-1, 0, 1)

# complements of span{id, j^ε} inside gl(2), used for the representatives of g/r^ε
_U_REPS = {
    -1: ([[1, 0], [0, -1]], [[0, 1], [1, 0]]),
    0: ([[1, 0], [0, -1]], [[0, 0], [1, 0]]),
    1: ([[0, 1], [1, 0]], [[0, 1], [-1, 0]]),
}


class GradedAlgebra:
    """sl(2+n) with its grading by the 2 | n block decomposition."""

    def __init__(self, n: int):
        if n < 2:
            raise ValueError(f"n must be at least 2, got {n}")
        self.n = n
        self.m = m = n + 2
        mats: list[np.ndarray] = []
        degrees: list[int] = []
        for a in range(n):
            for b in range(2):
                mats.append(_elementary(m, 2 + a, b))
                degrees.append(-1)
        for lo, hi in ((0, 2), (2, m)):
            for r in range(lo, hi):
                for c in range(lo, hi):
                    if r != c:
                        mats.append(_elementary(m, r, c))
                        degrees.append(0)
        for i in range(m - 1):
            h = np.zeros((m, m), dtype=np.int64)
            h[i, i], h[i + 1, i + 1] = 1, -1
            mats.append(h)
            degrees.append(0)
        for a in range(n):
            for b in range(2):
                mats.append(_elementary(m, b, 2 + a))
                degrees.append(1)
        self.basis_int = mats
        self.degrees = np.array(degrees)
        self.dim = len(mats)
        self._offdiag = {}
        for k, b in enumerate(mats):
            nz = np.argwhere(b)
            if len(nz) == 1:
                self._offdiag[tuple(nz[0])] = k
        self.cartan_start = self.dim - 2 * n - (m - 1)
        off = sorted(self._offdiag.items(), key=lambda kv: kv[1])
        self._off_r = np.array([rc[0] for rc, _ in off])
        self._off_c = np.array([rc[1] for rc, _ in off])
        self._off_k = np.array([k for _, k in off])
        self._cartan = slice(self.cartan_start, self.cartan_start + m - 1)

    # -- indices -----------------------------------------------------------

    def indices(self, degree: int) -> list[int]:
        return [int(k) for k in np.flatnonzero(self.degrees == degree)]

    @property
    def g_minus(self) -> list[int]:
        return self.indices(-1)

    @property
    def g_zero(self) -> list[int]:
        return self.indices(0)

    @property
    def g_plus(self) -> list[int]:
        return self.indices(1)

    def dual_index(self, k: int) -> int:
        """Index of the g₁ element paired with the g₋₁ basis element k."""
        if self.degrees[k] != -1:
            raise ValueError("dual_index is defined on g₋₁")
        return self.dim - 2 * self.n + k

    # -- matrices and coordinates ------------------------------------------

    def matrix(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=object).reshape(-1)
        out = rq.zeros((self.m, self.m))
        out[self._off_r, self._off_c] = coords[self._off_k]
        h = np.concatenate([[Fraction(0)], coords[self._cartan], [Fraction(0)]])
        out[np.arange(self.m), np.arange(self.m)] = h[1:] - h[:-1]
        return out

    def basis_matrix(self, k: int) -> np.ndarray:
        return rq.asarray(self.basis_int[k])

    def coords(self, mat, *, drop_centre: bool = True) -> np.ndarray:
        """Coordinates of a (2+n)x(2+n) matrix modulo the centre."""
        mat = rq.asarray(mat)
        m = self.m
        diag = np.array([mat[i, i] for i in range(m)], dtype=object)
        tr = sum(diag, Fraction(0))
        if tr and not drop_centre:
            raise ValueError("matrix is not trace-free")
        out = rq.zeros(self.dim)
        out[self._off_k] = mat[self._off_r, self._off_c]
        out[self._cartan] = np.cumsum(diag - tr / m)[:-1]
        return out

    def coords_int(self, mat: np.ndarray) -> np.ndarray:
        """Integer coordinates of a trace-free integer matrix."""
        out = np.zeros(self.dim, dtype=np.int64)
        out[self._off_k] = mat[self._off_r, self._off_c]
        out[self._cartan] = np.cumsum(np.diag(mat))[:-1]
        return out

    def matrix_int(self, coords: np.ndarray) -> np.ndarray:
        """Integer matrix of an integer coordinate vector."""
        out = np.zeros((self.m, self.m), dtype=np.int64)
        out[self._off_r, self._off_c] = coords[self._off_k]
        h = np.concatenate([[0], coords[self._cartan], [0]])
        out[np.arange(self.m), np.arange(self.m)] = h[1:] - h[:-1]
        return out

    def bracket_int(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        X, Y = self.matrix_int(x), self.matrix_int(y)
        return self.coords_int(X @ Y - Y @ X)

    @cached_property
    def structure_constants(self) -> np.ndarray:
        """C[i, j, k] with [b_i, b_j] = Σ_k C[i, j, k] b_k (integers)."""
        d = self.dim
        C = np.zeros((d, d, d), dtype=np.int64)
        for i, x in enumerate(self.basis_int):
            for j in range(i + 1, d):
                y = self.basis_int[j]
                c = self.coords_int(x @ y - y @ x)
                C[i, j] = c
                C[j, i] = -c
        return C

    def bracket(self, x, y) -> np.ndarray:
        """Bracket of two coordinate vectors."""
        X, Y = self.matrix(x), self.matrix(y)
        return self.coords(X.dot(Y) - Y.dot(X))

    def ad(self, x) -> np.ndarray:
        """Matrix of ad_x in the graded basis."""
        C = self.structure_constants
        x = np.asarray(x, dtype=object)
        out = rq.zeros((self.dim, self.dim))
        for i in np.flatnonzero(x != 0):
            out = out + x[i] * C[i].T.astype(object)
        return out

    def unit(self, k: int) -> np.ndarray:
        v = rq.zeros(self.dim)
        v[k] = Fraction(1)
        return v

    def block(self, upper_left=None, lower_left=None, upper_right=None, lower_right=None) -> np.ndarray:
        """Coordinates of the matrix assembled from the given blocks."""
        n, m = self.n, self.m
        mat = rq.zeros((m, m))
        if upper_left is not None:
            mat[:2, :2] = rq.asmatrix(upper_left)
        if upper_right is not None:
            mat[:2, 2:] = rq.asmatrix(upper_right).reshape(2, n)
        if lower_left is not None:
            mat[2:, :2] = rq.asmatrix(lower_left).reshape(n, 2)
        if lower_right is not None:
            mat[2:, 2:] = rq.asmatrix(lower_right)
        return self.coords(mat)

    @cached_property
    def grading_element(self) -> np.ndarray:
        n = self.n
        d = [Fraction(n, n + 2)] * 2 + [Fraction(-2, n + 2)] * n
        return self.coords(np.diag(np.array(d, dtype=object)))

    def trace_form(self, x, y) -> Fraction:
        """B(x, y) = tr(xy) on trace-free representatives."""
        return _trace(self.matrix(x).dot(self.matrix(y)))


def _elementary(m: int, r: int, c: int) -> np.ndarray:
    e = np.zeros((m, m), dtype=np.int64)
    e[r, c] = 1
    return e


def _trace(mat) -> Fraction:
    return sum((mat[i, i] for i in range(mat.shape[0])), Fraction(0))


def build_algebra(n: int) -> GradedAlgebra:
    return GradedAlgebra(n)


# ---------------------------------------------------------------------------
# subalgebras


@dataclass
class Subalgebra:
    parent: GradedAlgebra
    name: str
    basis: list[np.ndarray]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, x) -> bool:
        return rq.in_span(x, self.basis)

    def is_closed(self) -> bool:
        alg = self.parent
        for i, x in enumerate(self.basis):
            for y in self.basis[i + 1:]:
                if not self.contains(alg.bracket(x, y)):
                    return False
        return True


def stabilizer_r(alg: GradedAlgebra, eps: int) -> list[np.ndarray]:
    """Infinitesimal stabilizer of j^ε in p, computed as a null space.

    An element of g₀ acts on Q_std through its upper-left block U by
    m -> [U, m]; p₊ acts trivially.  The stabilizer is therefore
    {A ∈ g₀ : [U_A, j^ε] = 0} ⊕ g₁.
    """
    j = STANDARD_J[eps]
    g0 = alg.g_zero
    cols = []
    for k in g0:
        u = alg.basis_matrix(k)[:2, :2]
        cols.append((u.dot(j) - j.dot(u)).reshape(-1))
    kernel = rq.null_space(np.array(cols, dtype=object).T)
    r0 = []
    for c in kernel:
        v = rq.zeros(alg.dim)
        for coeff, k in zip(c, g0):
            v[k] = coeff
        r0.append(v)
    return r0 + [alg.unit(k) for k in alg.g_plus]


def stabilizer_r_closed_form(alg: GradedAlgebra, eps: int) -> list[np.ndarray]:
    """r^ε as block upper-triangular matrices with upper-left block in span{id, j^ε}."""
    n = alg.n
    out = [alg.block(upper_left=np.eye(2, dtype=int)), alg.block(upper_left=STANDARD_J[eps])]
    for r in range(n):
        for c in range(n):
            e = np.zeros((n, n), dtype=int)
            e[r, c] = 1
            out.append(alg.block(lower_right=e))
    out += [alg.unit(k) for k in alg.g_plus]
    return rq.span_basis(out)


def subalgebras(alg: GradedAlgebra) -> dict[str, Subalgebra]:
    g0, g1, gm = alg.g_zero, alg.g_plus, alg.g_minus
    e10 = alg._offdiag[(1, 0)]
    first_column = {alg._offdiag[(2 + a, 0)] for a in range(alg.n)}
    units = lambda ks: [alg.unit(k) for k in ks]  # noqa: E731
    subs = {
        "p": units(g0 + g1),
        "p'": units([k for k in range(alg.dim) if k != e10 and k not in first_column]),
        "q": units([k for k in g0 + g1 if k != e10]),
        "g0": units(g0),
        "p+": units(g1),
        "g-": units(gm),
    }
    for eps in EPSILONS:
        subs[f"r{eps:+d}" if eps else "r0"] = stabilizer_r(alg, eps)
    return {name: Subalgebra(alg, name, basis) for name, basis in subs.items()}


def r_name(eps: int) -> str:
    return {-1: "r-1", 0: "r0", 1: "r+1"}[eps]


def r_levi(alg: GradedAlgebra, eps: int) -> list[np.ndarray]:
    """r₀^ε = r^ε ∩ g₀."""
    return [v for v in stabilizer_r(alg, eps) if all(v[k] == 0 for k in alg.g_plus)]


# ---------------------------------------------------------------------------
# quotient modules


class QuotientModule:
    """g / sub with a fixed complement of representatives."""

    def __init__(self, alg: GradedAlgebra, sub: Sequence[np.ndarray], reps: Sequence[np.ndarray], name: str = ""):
        self.alg = alg
        self.sub = list(sub)
        self.reps = list(reps)
        self.name = name
        cols = np.array(self.sub + self.reps, dtype=object).T
        if cols.shape != (alg.dim, alg.dim):
            raise ValueError(
                f"sub ({len(self.sub)}) + representatives ({len(self.reps)}) must span g (dim {alg.dim})"
            )
        inv = rq.inverse(cols)
        self._proj = inv[len(self.sub):]

    @property
    def dim(self) -> int:
        return len(self.reps)

    def project(self, x) -> np.ndarray:
        return self._proj.dot(np.asarray(x, dtype=object))

    def project_matrix(self, mat) -> np.ndarray:
        """Project a gl(2+n) matrix (reduced modulo the centre)."""
        return self.project(self.alg.coords(mat))

    def lift(self, c) -> np.ndarray:
        out = rq.zeros(self.alg.dim)
        for coeff, r in zip(c, self.reps):
            if coeff:
                out = out + coeff * r
        return out

    def action(self, a) -> np.ndarray:
        """Matrix of the induced action ad̄_a on the quotient (a must normalise sub)."""
        cols = [self.project(self.alg.bracket(a, r)) for r in self.reps]
        return np.array(cols, dtype=object).T

    def image(self, vectors) -> list[np.ndarray]:
        return rq.span_basis([self.project(v) for v in vectors])


def twistor_quotient(alg: GradedAlgebra, eps: int) -> QuotientModule:
    """g/r^ε with representatives [[U, 0], [X, 0]], U in a fixed complement of span{id, j^ε}."""
    reps = [alg.block(upper_left=u) for u in _U_REPS[eps]]
    reps += [alg.unit(k) for k in alg.g_minus]
    return QuotientModule(alg, stabilizer_r(alg, eps), reps, name=f"g/r^{eps}")


def quotient_by(alg: GradedAlgebra, name: str) -> QuotientModule:
    subs = subalgebras(alg)
    e10 = alg.unit(alg._offdiag[(1, 0)])
    gm = [alg.unit(k) for k in alg.g_minus]
    if name == "p":
        return QuotientModule(alg, subs["p"].basis, gm, "g/p")
    if name == "q":
        return QuotientModule(alg, subs["q"].basis, [e10] + gm, "g/q")
    if name == "p'":
        rest = [alg.unit(alg._offdiag[(2 + a, 0)]) for a in range(alg.n)] + [e10]
        return QuotientModule(alg, subs["p'"].basis, rest, "g/p'")
    raise ValueError(f"no quotient preset for {name!r}")


def quotient_dimensions(alg: GradedAlgebra) -> dict[str, int]:
    """dim p/q, dim p'/q and dim g/r^ε from subalgebra dimensions."""
    subs = subalgebras(alg)
    out = {
        "p/q": subs["p"].dim - subs["q"].dim,
        "p'/q": subs["p'"].dim - subs["q"].dim,
    }
    for eps in EPSILONS:
        out[f"g/r^{eps}"] = alg.dim - subs[r_name(eps)].dim
    return out


# ---------------------------------------------------------------------------
# actions on Q_std


def p_action_on_qstd(a, m) -> np.ndarray:
    """Action a·m·a⁻¹ of the upper-left block of P on Q_std."""
    a = rq.asmatrix(a)
    m = rq.asmatrix(m)
    if a.shape != (2, 2) or m.shape != (2, 2):
        raise ValueError("p_action_on_qstd works on 2x2 blocks")
    if m[0, 0] + m[1, 1] != 0:
        raise ValueError("m must be trace-free")
    if rq.det(a) == 0:
        raise ValueError("a must be invertible")
    return a.dot(m).dot(rq.inverse(a))


def conjugating_matrices(m1, m2) -> list[np.ndarray]:
    """Basis of {a : a m1 = m2 a}; invertible members exhibit a common orbit."""
    m1 = rq.asmatrix(m1)
    m2 = rq.asmatrix(m2)
    rows = []
    for r in range(2):
        for c in range(2):
            row = rq.zeros(4)
            for k in range(2):
                row[r * 2 + k] += m1[k, c]      # (a m1)[r, c]
                row[k * 2 + c] -= m2[r, k]      # (m2 a)[r, c]
            rows.append(row)
    return [v.reshape(2, 2) for v in rq.null_space(np.array(rows, dtype=object))]


# ---------------------------------------------------------------------------
# the canonical ε-structures J^ε


def _j_block(alg: GradedAlgebra, eps: int) -> np.ndarray:
    mat = rq.zeros((alg.m, alg.m))
    mat[:2, :2] = STANDARD_J[eps]
    return mat


def J_eps(alg: GradedAlgebra, eps: int, quotient: Optional[QuotientModule] = None) -> np.ndarray:
    """Matrix of J^ε on the representatives of g/r^ε.

    A representative is multiplied from the right by diag(j^ε, 0) and the
    result is reduced modulo r^ε + centre.
    """
    quot = quotient or twistor_quotient(alg, eps)
    jb = _j_block(alg, eps)
    cols = [quot.project_matrix(alg.matrix(r).dot(jb)) for r in quot.reps]
    return np.array(cols, dtype=object).T


def J_well_defined(alg: GradedAlgebra, eps: int) -> bool:
    """Right multiplication by diag(j^ε, 0) maps r^ε + centre into itself."""
    quot = twistor_quotient(alg, eps)
    jb = _j_block(alg, eps)
    elements = [alg.matrix(r) for r in quot.sub] + [rq.identity(alg.m)]
    return all(rq.is_zero(quot.project_matrix(e.dot(jb))) for e in elements)


def J_squares_to(alg: GradedAlgebra, eps: int) -> bool:
    J = J_eps(alg, eps)
    return rq.equal(J.dot(J), eps * rq.identity(J.shape[0]))


def invariance_check(alg: GradedAlgebra, eps: int) -> bool:
    """Every ad̄_A, A ∈ r^ε, commutes with J^ε on g/r^ε."""
    quot = twistor_quotient(alg, eps)
    J = J_eps(alg, eps, quot)
    for a in quot.sub:
        act = quot.action(a)
        if not rq.equal(act.dot(J), J.dot(act)):
            return False
    return True


@dataclass
class CommutantReport:
    eps: int
    n: int
    dimension: int
    contains_J: bool
    contains_identity: bool
    solutions: list[str] = field(default_factory=list)
    normalised: str = ""
    closed_form_applies: bool = False


def invariant_structure_space(alg: GradedAlgebra, eps: int) -> tuple[list[np.ndarray], CommutantReport]:
    """Commutant of ad̄(r^ε) in End(g/r^ε) and the ε-structures inside it.

    When the commutant is span{id, J^ε} the quadratic condition
    (c₁ id + c₂ J^ε)² = ε id reduces to c₁² + ε c₂² = ε and 2 c₁ c₂ = 0,
    which is solved in closed form.  The normalisation asks that the
    induced map on g/p be X -> X j^ε, i.e. (c₁, c₂) = (0, 1).
    """
    quot = twistor_quotient(alg, eps)
    k = quot.dim
    J = J_eps(alg, eps, quot)
    rows = []
    for a in quot.sub:
        act = quot.action(a)
        # (act·X - X·act)[r, c] in the row-major unknowns X[r, c]
        for r in range(k):
            for c in range(k):
                row = {}
                for s in range(k):
                    if act[r, s]:
                        row[s * k + c] = row.get(s * k + c, 0) + act[r, s]
                    if act[s, c]:
                        row[r * k + s] = row.get(r * k + s, 0) - act[s, c]
                row = {i: Fraction(v) for i, v in row.items() if v}
                if row:
                    rows.append(row)
    comm = [v.reshape(k, k) for v in rq.null_space_rows(rows, k * k)]
    flat = [c.reshape(-1) for c in comm]
    idn = rq.identity(k)
    report = CommutantReport(
        eps=eps,
        n=alg.n,
        dimension=len(comm),
        contains_J=rq.in_span(J.reshape(-1), flat),
        contains_identity=rq.in_span(idn.reshape(-1), flat),
    )
    if report.dimension == 2 and report.contains_J and report.contains_identity:
        if eps == 0:
            report.solutions = ["c*J0, c != 0"]
        elif eps == -1:
            report.solutions = ["+J-", "-J-"]
        else:
            # ±id also square to id but have unbalanced eigenspaces
            report.solutions = ["+J+", "-J+"]
        report.normalised = f"J^{eps} (c1, c2) = (0, 1)"
        report.closed_form_applies = True
    return comm, report


def classify_member(J, Jeps, eps: int) -> Optional[tuple[Fraction, Fraction]]:
    """Coordinates (c₁, c₂) of J = c₁ id + c₂ J^ε, or None if J is outside that span."""
    k = Jeps.shape[0]
    sol = rq.solve_linear_system(
        np.array([rq.identity(k).reshape(-1), Jeps.reshape(-1)], dtype=object).T, J.reshape(-1)
    )
    if sol is None:
        return None
    return sol.particular[0], sol.particular[1]


# ---------------------------------------------------------------------------
# the bracket identities behind the Nijenhuis/torsion comparison


@dataclass
class NijenhuisIdentityReport:
    eps: int
    n: int
    pairs: int
    s_vanishes: bool
    lift_independent: bool
    first_identity_failures: int
    second_identity_failures: int

    @property
    def passed(self) -> bool:
        return self.s_vanishes and self.lift_independent


def nijenhuis_identities(alg: GradedAlgebra, eps: int, shifts: int = 2, seed: int = 0) -> NijenhuisIdentityReport:
    """Check S(X,Y) = -J²π[X,Y] - π[JX,JY] + Jπ[JX,Y] + Jπ[X,JY] = 0 on basis pairs.

    JX is any lift of J^ε(πX).  The default lift is the fixed representative;
    the check is repeated ``shifts`` times with every lift moved by a random
    element of r^ε.  The two pairwise identities
    J²π[X,Y] = Jπ[X,JY] and π[JX,JY] = Jπ[JX,Y] are tallied separately: they
    are lift dependent and do not hold termwise.

    Every term carries J twice, explicitly or through a lift, so after
    clearing denominators (J -> cJ, π -> Dπ, lifts scaled by c) each term is
    c⁴D times its exact value and the comparison runs in int64.
    """
    quot = twistor_quotient(alg, eps)
    J = J_eps(alg, eps, quot)
    k = quot.dim
    c = rq.common_denominator(J)
    D = rq.common_denominator(quot._proj)
    Jc = rq.to_int64(J, c)
    J2c = Jc @ Jc
    Pd = rq.to_int64(quot._proj, D)
    R = np.array([rq.to_int64(r) for r in quot.reps]).T       # columns: lifts of the quotient basis
    X = c * R                                                   # c·x
    JX = R @ Jc                                                 # c·(lift of J x)
    sub = np.array([rq.to_int64(v, rq.common_denominator(v)) for v in quot.sub])
    br = alg.bracket_int

    def terms(x, y, jx, jy):
        # the four terms of S, each scaled by c⁴D
        return (J2c @ (Pd @ br(x, y)), c * c * (Pd @ br(jx, jy)),
                c * (Jc @ (Pd @ br(jx, y))), c * (Jc @ (Pd @ br(x, jy))))

    def s_of(t):
        return -t[0] - t[1] + t[2] + t[3]

    rng = np.random.default_rng(seed)
    s_ok = lift_ok = True
    fail1 = fail2 = 0
    for a in range(k):
        for b in range(k):
            lifts = (X[:, a], X[:, b], JX[:, a], JX[:, b])
            t = terms(*lifts)
            s = s_of(t)
            s_ok &= not s.any()
            fail1 += bool((t[0] != t[3]).any())
            fail2 += bool((t[1] != t[2]).any())
            for _ in range(shifts):
                moved = [v + rng.integers(-3, 4, size=len(sub)) @ sub for v in lifts]
                lift_ok &= bool((s_of(terms(*moved)) == s).all())
    return NijenhuisIdentityReport(eps, alg.n, k * k, bool(s_ok), bool(lift_ok), fail1, fail2)


# ---------------------------------------------------------------------------
# linear checks on the correspondence space side


@dataclass
class ComplementReport:
    eps: int
    n: int
    r0_solution_dimension: int
    r0_unique: bool
    r0_is_g_minus: bool
    J_solution_dimension: int
    J_unique: bool
    g_minus_J_invariant: bool


def _complement_equations(T: np.ndarray, nu: int, nx: int):
    """Rows of T_UU L + T_UX = L T_XX for the graph {(Lx, x)} (U-coordinates first)."""
    t_uu, t_ux = T[:nu, :nu], T[:nu, nu:]
    t_xu, t_xx = T[nu:, :nu], T[nu:, nu:]
    if not rq.is_zero(t_xu):
        raise ValueError("operator does not preserve p/r^ε")
    rows, rhs = [], []
    for r in range(nu):
        for c in range(nx):
            row = rq.zeros(nu * nx)
            for s in range(nu):
                row[s * nx + c] += t_uu[r, s]
            for s in range(nx):
                row[r * nx + s] -= t_xx[s, c]
            rows.append(row)
            rhs.append(-t_ux[r, c])
    return rows, rhs


def _solve_graphs(ops, nu, nx):
    rows, rhs = [], []
    for T in ops:
        r, b = _complement_equations(T, nu, nx)
        rows += r
        rhs += b
    return rq.solve_linear_system(np.array(rows, dtype=object), rhs)


def invariant_complement(alg: GradedAlgebra, eps: int) -> ComplementReport:
    """Complements to p/r^ε in g/r^ε invariant under ad̄(r₀^ε), resp. under J^ε.

    Complements are graphs of maps L from the g₋₁ coordinates to the two
    p/r^ε coordinates; invariance is an affine linear system in L.
    """
    quot = twistor_quotient(alg, eps)
    J = J_eps(alg, eps, quot)
    nu, nx = 2, 2 * alg.n
    acts = [quot.action(a) for a in r_levi(alg, eps)]
    sol_r = _solve_graphs(acts, nu, nx)
    sol_j = _solve_graphs([J], nu, nx)
    r_dim = -1 if sol_r is None else len(sol_r.kernel)
    j_dim = -1 if sol_j is None else len(sol_j.kernel)
    return ComplementReport(
        eps=eps,
        n=alg.n,
        r0_solution_dimension=r_dim,
        r0_unique=r_dim == 0,
        r0_is_g_minus=sol_r is not None and r_dim == 0 and rq.is_zero(sol_r.particular),
        J_solution_dimension=j_dim,
        J_unique=j_dim == 0,
        g_minus_J_invariant=rq.is_zero(J[:nu, nu:]),
    )


def kernel_J0(alg: GradedAlgebra) -> list[np.ndarray]:
    return rq.null_space(J_eps(alg, 0))


def kerJ0_projects_to_V(alg: GradedAlgebra) -> tuple[bool, int]:
    """Image of ker J⁰ under g/r⁰ -> g/q equals p'/q; returns (equal, image dim)."""
    quot0 = twistor_quotient(alg, 0)
    to_q = quotient_by(alg, "q")
    image = to_q.image([quot0.lift(v) for v in kernel_J0(alg)])
    target = to_q.image(subalgebras(alg)["p'"].basis)
    return rq.same_span(image, target), len(image)


def character_on_D(alg: GradedAlgebra) -> tuple[list[np.ndarray], np.ndarray]:
    """Infinitesimal character of q on the line p/q (basis of q, values)."""
    subs = subalgebras(alg)
    q = subs["q"].basis
    to_q = quotient_by(alg, "q")
    e10 = alg.unit(alg._offdiag[(1, 0)])
    values = []
    for a in q:
        c = to_q.project(alg.bracket(a, e10))
        if not rq.is_zero(c[1:]):
            raise ValueError("q does not preserve p/q")
        values.append(c[0])
    return q, np.array(values, dtype=object)


def stabilizer_on_D(alg: GradedAlgebra) -> tuple[bool, bool]:
    """(kernel of the character of q on p/q equals r⁰, character nonzero)."""
    q, chi = character_on_D(alg)
    coeffs = rq.null_space(chi.reshape(1, -1))
    kernel = []
    for c in coeffs:
        v = rq.zeros(alg.dim)
        for x, b in zip(c, q):
            if x:
                v = v + x * b
        kernel.append(v)
    return rq.same_span(kernel, stabilizer_r(alg, 0)), not rq.is_zero(chi)


# ---------------------------------------------------------------------------
# scaling elements


@dataclass
class ScalingElement:
    element: np.ndarray
    central: bool
    scalar_on_g1: Optional[Fraction]


def semisimple_levi_indices(alg: GradedAlgebra) -> list[int]:
    """g₀ basis indices spanning g₀^ss = sl(2) ⊕ sl(n): all but H₁ = E₁₁ - E₂₂."""
    straddle = alg.cartan_start + 1
    return [k for k in alg.g_zero if k != straddle]


def scaling_element(alg: GradedAlgebra, lambda_values) -> ScalingElement:
    """Solve B(E, A) = λ'(A) for E ∈ g₀; λ' given by its values on the g₀ basis."""
    g0 = alg.g_zero
    lam = rq.asarray(lambda_values).reshape(-1)
    if lam.shape != (len(g0),):
        raise ValueError(f"expected {len(g0)} values of λ' on the g₀ basis")
    ss = set(semisimple_levi_indices(alg))
    if any(lam[i] != 0 for i, k in enumerate(g0) if k in ss):
        raise ValueError("λ' must vanish on the semisimple part of g₀")
    gram = rq.asmatrix([[alg.trace_form(alg.unit(a), alg.unit(b)) for b in g0] for a in g0])
    sol = rq.solve_linear_system(gram, lam)
    if sol is None or sol.kernel:
        raise ValueError("trace form is degenerate on g₀")
    E = rq.zeros(alg.dim)
    for c, k in zip(sol.particular, g0):
        E[k] = c
    central = all(rq.is_zero(alg.bracket(E, alg.unit(k))) for k in g0)
    adE = alg.ad(E)
    g1 = alg.g_plus
    block = adE[np.ix_(g1, g1)]
    c = block[0, 0]
    scalar = c if rq.equal(block, c * rq.identity(len(g1))) and rq.is_zero(adE[np.ix_(
        [k for k in range(alg.dim) if k not in g1], g1)]) else None
    return ScalingElement(E, central, scalar)


def centre_form_nondegenerate(alg: GradedAlgebra) -> bool:
    e = alg.grading_element
    return alg.trace_form(e, e) != 0

"""Named verification checks grouped by scope, used by the command line."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import kostant as K
from . import parabolic as P
from . import paraquat as pq
from . import pq_linear as pl
from . import rational as rq
from . import type_decomp as td


@dataclass
class Check:
    name: str
    anchor: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "anchor": self.anchor, "pass": bool(self.passed), "details": self.details}


Thunk = Callable[[], Check]


def _rng(seed: int = 0) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_rational(rng, lo: int = -5, hi: int = 5) -> Fraction:
    return Fraction(int(rng.integers(lo, hi + 1)), int(rng.integers(1, 4)))


def random_trace_free(rng) -> np.ndarray:
    while True:
        a, b, c = (random_rational(rng) for _ in range(3))
        m = rq.asmatrix([[a, b], [c, -a]])
        if not rq.is_zero(m):
            return m


# ---------------------------------------------------------------------------
# algebra


def check_quaternion_table() -> Check:
    one, i, j, k = pq.BASIS
    rules = {
        "i² = 1": (i * i, one),
        "j² = 1": (j * j, one),
        "k² = -1": (k * k, -one),
        "ij = k": (i * j, k),
        "ji = -k": (j * i, -k),
        "jk = -i": (j * k, -i),
        "kj = i": (k * j, i),
        "ki = -j": (k * i, -j),
        "ik = j": (i * k, j),
    }
    bad = [name for name, (lhs, rhs) in rules.items() if lhs != rhs]
    homomorphic = all(
        rq.equal(pq.to_matrix(p * q), pq.to_matrix(p).dot(pq.to_matrix(q))) for p in pq.BASIS for q in pq.BASIS
    )
    return Check("multiplication table", "k = ij = -ji with i² = j² = 1", not bad and homomorphic,
                 {"failed": bad, "matrix_model_homomorphic": homomorphic})


def random_quaternion(rng) -> pq.ParaQuaternion:
    return pq.ParaQuaternion(*(random_rational(rng) for _ in range(4)))


def check_norm(pairs: int = 50, seed: int = 0) -> Check:
    rng = _rng(seed)
    mult = det = True
    for _ in range(pairs):
        p, q = random_quaternion(rng), random_quaternion(rng)
        mult &= pq.norm_sq(p * q) == pq.norm_sq(p) * pq.norm_sq(q)
        det &= rq.det(pq.to_matrix(p)) == pq.norm_sq(p)
    return Check("norm multiplicative and equal to det", "norm = determinant in the matrix model",
                 mult and det, {"pairs": pairs, "multiplicative": mult, "det_equals_norm": det})


def check_eps_square(ns=(2, 3, 4), samples: int = 20, seed: int = 1) -> Check:
    rng = _rng(seed)
    blocks = [pl.STANDARD_J[e] for e in (-1, 0, 1)] + [random_trace_free(rng) for _ in range(samples)]
    ok = True
    for m in blocks:
        A = pl.make_structure(m)
        for n in ns:
            X = rq.asmatrix([[random_rational(rng) for _ in range(2)] for _ in range(n)])
            ok &= rq.equal(pl.apply(A, pl.apply(A, X)), A.epsilon * X)
            M = A.on_w(n)
            ok &= rq.equal(M.dot(M), A.epsilon * rq.identity(2 * n))
    return Check("A∘A = ε id", "A∘A = -|A|² id with |A|² = det", ok, {"structures": len(blocks), "n": list(ns)})


def check_segre_lemma(ns=(2, 3), samples: int = 20, seed: int = 2) -> Check:
    """Rank-one elements are exactly the eigenvectors of para-complex structures."""
    rng = _rng(seed)
    forward = backward = True
    for n in ns:
        # every rank-one generator e_a ⊗ u for u in a small set of directions
        dirs = [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1)]
        for a, u in itertools.product(range(n), dirs):
            X = rq.zeros((n, 2))
            X[a] = rq.asarray(u)
            A = pl.para_complex_for(X)
            forward &= A.epsilon == 1 and rq.equal(pl.apply(A, X), X)
        for _ in range(samples):
            A = random_para_complex(rng)
            for sign in (1, -1):
                for x in pl._eigenspace(A, n, sign):
                    backward &= pl.segre_member(x) == (True, False)
    return Check("Segre cone = eigenvectors of para-complex structures",
                 "rank-one elements are eigenvectors of a para-complex structure", forward and backward,
                 {"rank_one_to_structure": forward, "eigenvector_to_rank_one": backward})


def random_para_complex(rng) -> pl.EpsilonStructure:
    """g j⁺ g⁻¹ for a random invertible rational g."""
    while True:
        g = rq.asmatrix([[random_rational(rng) for _ in range(2)] for _ in range(2)])
        if rq.det(g) != 0:
            return pl.make_structure(g.dot(pl.J_PLUS).dot(rq.inverse(g)))


def algebra_checks(ns) -> list[Thunk]:
    return [check_quaternion_table, check_norm, lambda: check_eps_square(tuple(ns)),
            lambda: check_segre_lemma(tuple(n for n in ns if n <= 3) or (2,))]


# ---------------------------------------------------------------------------
# decomposition


def random_bilinear(n: int, rng, arity: str = "vector") -> td.BilinearMap:
    d = 2 * n
    shape = (d, d) if arity == "scalar" else (d, d, d)
    vals = np.array([random_rational(rng, -3, 3) for _ in range(int(np.prod(shape)))], dtype=object)
    return td.BilinearMap(n, vals.reshape(shape))


def check_pq_parts(n: int, seed: int = 3) -> Check:
    rng = _rng(seed)
    ok = True
    for eps in (-1, 1):
        A = pl.standard(eps)
        phi = random_bilinear(n, rng)
        parts = td.pq_parts(phi, A)
        ok &= parts[0] + parts[1] + parts[2] == phi
        for typ, part in zip(td.TYPES, parts):
            ok &= td.type_check(part, A, typ)
            again = td.pq_parts(part, A)
            ok &= all((q == part) if t == typ else q.is_zero() for t, q in zip(td.TYPES, again))
    A0 = pl.standard(0)
    p02 = td.part02_nilpotent(random_bilinear(n, rng), A0)
    ok &= td.type_check(p02, A0, (0, 2))
    return Check(f"(p,q)-parts n={n}", "type decomposition and the nilpotent (0,2)-part", ok)


def check_lemma(n: int) -> Check:
    return Check(f"Λ²U⊗S²V* is the (1,1)-part n={n}", "Λ²U⊗S²V* = Λ^{1,1}(U⊗V*)", td.lemma_decomp_check(n))


def check_pi11_independence(n: int = 2, seed: int = 4) -> Check:
    rng = _rng(seed)
    base = pl.standard_triple()
    conjugators = [[[1, 0], [0, 1]], [[1, 1], [0, 1]], [[2, 0], [0, 1]], [[1, 0], [3, 1]], [[0, 1], [-1, 0]]]
    triples = [base.conjugated(g) for g in conjugators]
    phis = [random_bilinear(n, rng, "scalar") for _ in range(3)]
    ok = all(td.pi11(phi, t) == td.pi11(phi, base) for phi in phis for t in triples)
    return Check("π¹¹ independent of the admissible triple", "π¹¹ projector", ok, {"triples": len(triples)})


def check_dimension_four() -> Check:
    G = pl.delta_gram()
    delta = td.from_gram(2, G)
    ok_type = all(
        rq.equal(td._first(td._second(delta.values, A.on_w(2)), A.on_w(2)), A.norm_sq * delta.values)
        for A in (pl.standard(-1), pl.standard(0), pl.standard(1))
    )
    rep = pl.skew_square_scalar_set()
    g = pl.compatible_metric(pl.standard_symplectic(2), pl.standard_symplectic(2))
    sig = rq.signature(g.gram)
    X = rq.asmatrix([[1, 0], [2, 0]])
    nullity = g(X, X) == 0 and pl.segre_member(X)[0]
    passed = ok_type and rep["skew_dimension"] == 6 and rep["Q_std_in_solution_set"] and sig == (2, 2, 0) and nullity
    return Check("dimension-four δ form and compatible metric", "δ(AX,AY) = |A|²δ(X,Y)", passed, {
        "delta_type_11": ok_type,
        "skew_dimension": rep["skew_dimension"],
        "Q_std_in_solution_set": rep["Q_std_in_solution_set"],
        "converse_holds": rep["converse_holds"],
        "metric_signature": list(sig),
        "segre_null": nullity,
    })


def decomp_checks(ns) -> list[Thunk]:
    out: list[Thunk] = []
    for n in ns:
        out.append(lambda n=n: check_pq_parts(n))
        out.append(lambda n=n: check_lemma(n))
    out.append(check_pi11_independence)
    out.append(check_dimension_four)
    return out


# ---------------------------------------------------------------------------
# parabolic


def check_grading(alg: P.GradedAlgebra) -> Check:
    C = alg.structure_constants
    deg = alg.degrees
    ok = True
    for i, j in itertools.product(range(alg.dim), repeat=2):
        target = deg[i] + deg[j]
        nz = np.flatnonzero(C[i, j])
        if len(nz) and (abs(target) > 1 or np.any(deg[nz] != target)):
            ok = False
    e = alg.grading_element
    acts = all(rq.equal(alg.bracket(e, alg.unit(k)), deg[k] * alg.unit(k)) for k in range(alg.dim))
    return Check(f"grading n={alg.n}", "|1|-grading of sl(2+n)", ok and acts and alg.dim == (alg.n + 2) ** 2 - 1,
                 {"dim": alg.dim, "grading_element_acts_by_degree": acts})


def check_subalgebras(alg: P.GradedAlgebra) -> Check:
    subs = P.subalgebras(alg)
    closed = all(s.is_closed() for s in subs.values())
    cross = all(rq.same_span(P.stabilizer_r(alg, e), P.stabilizer_r_closed_form(alg, e)) for e in P.EPSILONS)
    q_is_meet = rq.same_span(rq.intersect(subs["p"].basis, subs["p'"].basis), subs["q"].basis)
    dims = P.quotient_dimensions(alg)
    n = alg.n
    dims_ok = dims["p/q"] == 1 and dims["p'/q"] == n and all(dims[f"g/r^{e}"] == 2 * n + 2 for e in P.EPSILONS)
    return Check(f"subalgebras n={n}", "block shapes of Q, P, P' and the stabilizers R^ε",
                 closed and cross and q_is_meet and dims_ok, {"dimensions": dims, "closed": closed})


def check_J(alg: P.GradedAlgebra, eps: int) -> Check:
    wd = P.J_well_defined(alg, eps)
    sq = P.J_squares_to(alg, eps)
    inv = P.invariance_check(alg, eps)
    _, rep = P.invariant_structure_space(alg, eps)
    ok = wd and sq and inv and rep.closed_form_applies
    return Check(f"J^{eps} n={alg.n}", "J^ε∘J^ε = ε id, R^ε-invariant, unique up to sign / multiple", ok, {
        "well_defined": wd, "squares_to_eps": sq, "invariant": inv,
        "commutant_dimension": rep.dimension, "solutions": rep.solutions,
    })


def check_nijenhuis_identities(alg: P.GradedAlgebra, eps: int) -> Check:
    rep = P.nijenhuis_identities(alg, eps)
    return Check(f"S = 0 for J^{eps} n={alg.n}", "bracket identities giving S = 0", rep.passed, {
        "pairs": rep.pairs, "lift_independent": rep.lift_independent,
        "pairwise_identity_failures": [rep.first_identity_failures, rep.second_identity_failures],
    })


def check_kostant(alg: P.GradedAlgebra) -> Check:
    dd, ss = K.complex_checks(alg)
    hs = K.kostant_harmonics(alg, (1, 2))
    details = {"d_squared_zero": dd, "codiff_squared_zero": ss,
               "dimensions": {str(h): v for h, v in hs.dimensions.items()}}
    ok = dd and ss and hs.values_graded
    if alg.n == 2:
        ok &= hs.dimensions[1] == 0 and bool(hs.k_split_ok)
        details["K_split"] = hs.k_split
    else:
        ok &= (hs.dimensions[1] > 0 and bool(hs.torsion_trace_free) and bool(hs.torsion_symmetry_type)
               and hs.dimensions[1] == hs.torsion_oracle_dimension)
        details["oracle_dimension"] = hs.torsion_oracle_dimension
    return Check(f"harmonic curvature n={alg.n}", "harmonic curvature table", ok, details)


def check_torsion_argument(alg: P.GradedAlgebra) -> Check:
    rep = K.phi_counterexample(alg)
    nit = {e: K.no_invisible_torsion(alg, e) for e in P.EPSILONS}
    stable = {e: K.no_invisible_torsion(alg, e, extra=5, seed=11) for e in P.EPSILONS}
    ok = rep.passed and all(nit.values()) and nit == stable
    return Check(f"torsion visibility n={alg.n}", "no non-zero element of E is invisible", ok,
                 {"phi": vars(rep), "no_invisible": {str(k): v for k, v in nit.items()}})


def check_correspondence(alg: P.GradedAlgebra) -> Check:
    ker_ok, ker_dim = P.kerJ0_projects_to_V(alg)
    stab_ok, chi_nonzero = P.stabilizer_on_D(alg)
    comps = {e: P.invariant_complement(alg, e) for e in P.EPSILONS}
    comp_ok = all(c.r0_unique and c.r0_is_g_minus and c.g_minus_J_invariant for c in comps.values())
    ok = ker_ok and ker_dim == alg.n and stab_ok and chi_nonzero and comp_ok
    return Check(f"correspondence space n={alg.n}", "ker J⁰ projects onto p'/q; stabilizer R⁰; unique complement",
                 ok, {"kerJ0_image_dim": ker_dim, "stabilizer_is_r0": stab_ok,
                      "J_only_complement_dimension": {str(e): c.J_solution_dimension for e, c in comps.items()}})


def check_scaling(alg: P.GradedAlgebra) -> Check:
    lam = [1 if k == alg.cartan_start + 1 else 0 for k in alg.g_zero]
    s = P.scaling_element(alg, lam)
    zero = P.scaling_element(alg, [0] * len(alg.g_zero))
    ok = (rq.equal(s.element, alg.grading_element) and s.central and s.scalar_on_g1 == 1
          and rq.is_zero(zero.element) and P.centre_form_nondegenerate(alg))
    return Check(f"scaling element n={alg.n}", "λ'(A) = B(E_λ, A)", ok,
                 {"B(E,E)": str(alg.trace_form(alg.grading_element, alg.grading_element))})


def parabolic_checks(ns) -> list[Thunk]:
    out: list[Thunk] = []
    for n in ns:
        alg = P.build_algebra(n)
        out += [lambda a=alg: check_grading(a), lambda a=alg: check_subalgebras(a)]
        for e in P.EPSILONS:
            out.append(lambda a=alg, e=e: check_J(a, e))
            out.append(lambda a=alg, e=e: check_nijenhuis_identities(a, e))
        out += [lambda a=alg: check_kostant(a), lambda a=alg: check_correspondence(a),
                lambda a=alg: check_scaling(a)]
        if n >= 3:
            out.append(lambda a=alg: check_torsion_argument(a))
    return out


# ---------------------------------------------------------------------------
# field


def field_checks() -> list[Thunk]:
    from .field import GridSpec, StructureField, richardson_ratio, sweep

    def run(name: str, anchor: str, fld: StructureField, richardson: bool = False) -> Check:
        grid = GridSpec.cube(fld.dim)
        s = sweep(fld, grid)
        ok = all(s.verdicts.values())
        details = {"nijenhuis_max": s.nijenhuis_max, "frobenius_max": s.frobenius_max,
                   "oracle_deviation": s.oracle_deviation, "verdicts": s.verdicts}
        if richardson:
            _, _, ratio = richardson_ratio(fld, grid)
            details["richardson_ratio"] = ratio
            ok &= 3.5 <= ratio <= 4.5
        return Check(name, anchor, ok, details)

    return [
        lambda: run("flat field", "N_A := ½[A,A]", StructureField("flat", 2, (1.0,))),
        lambda: run("tangent-shear", "integrable distribution without vanishing Nijenhuis tensor",
                    StructureField("tangent-shear", 2), True),
        lambda: run("para-graph non-integrable", "N_A := ½[A,A]", StructureField("para-graph", 2), True),
        lambda: run("para-graph integrable", "both eigendistributions integrable",
                    StructureField("para-graph", 2, integrable=True)),
    ]


SCOPES = ("all", "algebra", "decomp", "parabolic", "field")


def checks_for(scope: str, ns) -> list[Thunk]:
    if scope not in SCOPES:
        raise ValueError(f"unknown scope {scope!r}")
    out: list[Thunk] = []
    if scope in ("all", "algebra"):
        out += algebra_checks(ns)
    if scope in ("all", "decomp"):
        out += decomp_checks(ns)
    if scope in ("all", "parabolic"):
        out += parabolic_checks(ns)
    if scope in ("all", "field"):
        out += field_checks()
    return out

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from segre_kit import pq_linear as pl
from segre_kit import rational as rq
from segre_kit import type_decomp as td

from conftest import trace_free_blocks

small = st.integers(-3, 3).map(Fraction)


def vector_maps(n: int = 2):
    d = 2 * n
    return st.lists(small, min_size=d ** 3, max_size=d ** 3).map(
        lambda v: td.BilinearMap(n, rq.asarray(v).reshape(d, d, d))
    )


def scalar_maps(n: int = 2):
    d = 2 * n
    return st.lists(small, min_size=d * d, max_size=d * d).map(lambda v: td.BilinearMap(n, rq.asarray(v).reshape(d, d)))


nonnull = trace_free_blocks().filter(lambda m: rq.det(rq.asmatrix(m)) != 0)


def has_type(phi: td.BilinearMap, A: pl.EpsilonStructure, typ) -> bool:
    """Direct evaluation of the defining identities on basis pairs of W."""
    n = phi.n
    basis = pl.w_basis(n)
    s = A.norm_sq
    act = lambda X: pl.apply(A, X)  # noqa: E731
    val = lambda X, Y: rq.asarray(phi(X.reshape(-1), Y.reshape(-1))).reshape(n, 2)  # noqa: E731
    for X in basis:
        for Y in basis:
            if typ == (1, 1):
                ok = rq.equal(val(act(X), act(Y)), s * val(X, Y))
            else:
                sign = -1 if typ == (0, 2) else 1
                target = sign * act(val(X, Y))
                ok = rq.equal(val(act(X), Y), target) and rq.equal(val(X, act(Y)), target)
            if not ok:
                return False
    return True


def test_type_check_examples():
    w = pl.standard_symplectic(2)
    g = td.from_gram(2, pl.compatible_metric(w, w).gram)
    assert td.type_check(g, pl.standard(-1), (1, 1))
    zero = td.zero_map(2)
    for eps in (-1, 0, 1):
        for typ in td.TYPES:
            assert td.type_check(zero, pl.standard(eps), typ)
    # φ(X, Y) = Y₁₁·X fails (2,0) for j⁺: φ(E₁₂, A E₁₁) = E₁₂ but A φ(E₁₂, E₁₁) = -E₁₂
    phi = td.from_function(2, lambda X, Y: Y[0, 0] * X)
    assert not td.type_check(phi, pl.standard(1), (2, 0))


@given(vector_maps(), st.sampled_from([-1, 0, 1]), st.sampled_from(td.TYPES))
def test_type_check_matches_direct_evaluation(phi, eps, typ):
    A = pl.standard(eps)
    assert td.type_check(phi, A, typ) == has_type(phi, A, typ)


@given(vector_maps(), nonnull)
def test_pq_parts_sum_idempotence_membership(phi, m):
    A = pl.make_structure(m)
    parts = td.pq_parts(phi, A)
    assert parts[0] + parts[1] + parts[2] == phi
    for typ, part in zip(td.TYPES, parts):
        assert has_type(part, A, typ)
        again = td.pq_parts(part, A)
        for t, q in zip(td.TYPES, again):
            assert q == part if t == typ else q.is_zero()


@given(vector_maps(), vector_maps(), vector_maps(), st.sampled_from([-1, 1]))
def test_pq_parts_recovers_summands(a, b, c, eps):
    A = pl.standard(eps)
    summands = (td.pq_parts(a, A)[0], td.pq_parts(b, A)[1], td.pq_parts(c, A)[2])
    total = summands[0] + summands[1] + summands[2]
    assert all(x == y for x, y in zip(td.pq_parts(total, A), summands))


def test_pq_parts_fixes_type_11():
    A = pl.standard(-1)
    phi = td.pq_parts(td.from_function(2, lambda X, Y: X[0, 0] * Y + Y[1, 1] * X), A)[1]
    p20, p11, p02 = td.pq_parts(phi, A)
    assert p20.is_zero() and p11 == phi and p02.is_zero()


def test_pq_parts_needs_nonnull():
    with pytest.raises(ValueError):
        td.pq_parts(td.zero_map(2), pl.standard(0))


def _part02_by_hand(phi: td.BilinearMap, A: pl.EpsilonStructure) -> td.BilinearMap:
    act = lambda X: pl.apply(A, X)  # noqa: E731
    n = phi.n
    val = lambda X, Y: rq.asarray(phi(X.reshape(-1), Y.reshape(-1))).reshape(n, 2)  # noqa: E731
    return td.from_function(
        n, lambda X, Y: (-val(act(X), act(Y)) + act(val(act(X), Y)) + act(val(X, act(Y)))) * Fraction(1, 4)
    )


def test_part02_nilpotent_constant_table():
    # φ(E_i, E_j) = E₁₁ for every basis pair
    phi = td.from_function(2, lambda X, Y: sum(X.reshape(-1)) * sum(Y.reshape(-1)) * rq.asmatrix([[1, 0], [0, 0]]))
    A = pl.standard(0)
    out = td.part02_nilpotent(phi, A)
    assert out == _part02_by_hand(phi, A)
    assert td.type_check(out, A, (0, 2))
    assert td.part02_nilpotent(td.zero_map(2), A).is_zero()


@given(vector_maps(), vector_maps())
def test_part02_nilpotent_linear_and_typed(phi, psi):
    A = pl.standard(0)
    lhs = td.part02_nilpotent(phi + psi, A)
    assert lhs == td.part02_nilpotent(phi, A) + td.part02_nilpotent(psi, A)
    assert lhs == _part02_by_hand(phi + psi, A)
    assert has_type(lhs, A, (0, 2))


def test_part02_dispatch():
    phi = td.from_function(2, lambda X, Y: X[0, 1] * Y)
    assert td.part02(phi, pl.standard(0)) == td.part02_nilpotent(phi, pl.standard(0))
    assert td.part02(phi, pl.standard(1)) == td.pq_parts(phi, pl.standard(1))[2]
    with pytest.raises(ValueError):
        td.part02_nilpotent(phi, pl.standard(1))


def test_pi11_examples():
    w = pl.standard_symplectic(2)
    g = td.from_gram(2, pl.compatible_metric(w, w).gram)
    assert td.pi11(g) == g
    delta = td.from_gram(2, pl.delta_gram())
    assert td.pi11(delta) == delta


@given(scalar_maps(), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_pi11_triple_independent_and_idempotent(phi, g):
    g = rq.asmatrix([g[:2], g[2:]])
    base = pl.standard_triple()
    p = td.pi11(phi, base)
    assert td.pi11(p, base) == p
    if rq.det(g) != 0:
        assert td.pi11(phi, base.conjugated(g)) == p


def test_lambda2_and_sym_split():
    n = 2
    sym_v = rq.asmatrix([[1, 2], [2, 3]])
    wu = rq.asmatrix([[0, 1], [-1, 0]])
    # ω(E_ab, E_cd) = sym_v[a, c] ω_U[b, d]
    omega = td.from_gram(n, np.einsum("ac,bd->abcd", sym_v, wu).reshape(4, 4))
    first, second = td.lambda2_split(omega)
    assert first == omega and second.is_zero()
    w = pl.standard_symplectic(2)
    g = td.from_gram(2, pl.compatible_metric(w, w).gram)
    l2, s2 = td.sym_split(g)
    assert s2.is_zero() and l2 == g
    with pytest.raises(ValueError):
        td.lambda2_split(g)


def test_lambda2_dimension_audit_n3():
    basis = td.wedge_basis(3)
    assert len(basis) == 15
    firsts, seconds = zip(*(td.lambda2_split(w) for w in basis))
    r1 = rq.rank(np.array([f.values.reshape(-1) for f in firsts], dtype=object))
    r2 = rq.rank(np.array([s.values.reshape(-1) for s in seconds], dtype=object))
    assert (r1, r2) == (1 * 6, 3 * 3)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_lemma_decomp(n):
    assert td.lemma_decomp_check(n)


@given(scalar_maps(), nonnull)
def test_scalar_parts(phi, m):
    A = pl.make_structure(m)
    p11, rest = td.scalar_parts(phi, A)
    assert p11 + rest == phi
    assert td.type_check(p11, A, (1, 1))
    M = A.on_w(2)
    assert rq.equal(M.T.dot(rest.values).dot(M), -A.norm_sq * rest.values)


def test_json_round_trip_and_errors():
    phi = td.from_function(2, lambda X, Y: X[0, 1] * Fraction(1, 3) * Y)
    assert td.BilinearMap.from_json(phi.to_json()) == phi
    with pytest.raises(ValueError):
        td.BilinearMap.from_json({"n": 2, "arity": "vector", "values": [1, 2]})
    with pytest.raises(ValueError):
        td.BilinearMap.from_json({"n": 2, "arity": "tensor", "values": []})

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from segre_kit import pq_linear as pl
from segre_kit import rational as rq

from conftest import rationals, trace_free_blocks


def w_elements(n: int):
    return st.lists(st.lists(rationals, min_size=2, max_size=2), min_size=n, max_size=n).map(rq.asmatrix)


@pytest.mark.parametrize("m, eps", [([[0, 1], [-1, 0]], -1), ([[0, 1], [0, 0]], 0), ([[1, 0], [0, -1]], 1)])
def test_standard_structures(m, eps):
    A = pl.make_structure(m)
    assert A.epsilon == eps
    assert A == pl.standard(eps)


def test_make_structure_rejects_bad_blocks():
    with pytest.raises(ValueError):
        pl.make_structure([[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        pl.make_structure([[0, 0], [0, 0]])
    assert rq.is_zero(pl.make_structure([[0, 0], [0, 0]], allow_zero=True).m)


def test_apply_examples():
    assert rq.equal(pl.apply(pl.standard(1), rq.identity(2)), [[1, 0], [0, -1]])
    a, b, c, d = (Fraction(k) for k in (2, 3, 5, 7))
    assert rq.equal(pl.apply(pl.standard(0), [[a, b], [c, d]]), [[0, a], [0, c]])


@given(trace_free_blocks(), w_elements(3))
def test_apply_squares_to_epsilon(m, X):
    A = pl.make_structure(m)
    assert rq.equal(pl.apply(A, pl.apply(A, X)), A.epsilon * X)
    M = A.on_w(3)
    assert rq.equal(M.dot(M), A.epsilon * rq.identity(6))
    # on_w agrees with right multiplication in the row-major coordinates
    assert rq.equal(M.dot(X.reshape(-1)), pl.apply(A, X).reshape(-1))


def test_twistor_sign_examples():
    assert pl.twistor_sign(pl.standard(-1)) == (-1, 1)
    assert pl.twistor_sign(pl.make_structure([[0, -1], [1, 0]])) == (-1, -1)
    assert pl.twistor_sign(pl.standard(0)) == (0, None)
    assert pl.twistor_sign(pl.make_structure([[2, 0], [0, -2]])) == (1, None)


@given(trace_free_blocks())
def test_twistor_sign_scale_invariant(m):
    A = pl.make_structure(m)
    B = pl.make_structure(3 * rq.asmatrix(m))
    assert pl.twistor_sign(A) == pl.twistor_sign(B)


def test_segre_member_examples():
    assert pl.segre_member([[1, 0], [2, 0]]) == (True, False)
    assert pl.segre_member(rq.identity(2)) == (False, False)
    assert pl.segre_member(rq.zeros((2, 2))) == (False, True)


def test_para_complex_for_examples():
    X = rq.asmatrix([[1, 0], [0, 0], [0, 0]])
    assert pl.para_complex_for(X) == pl.standard(1)
    Y = rq.asmatrix([[1, -1], [0, 0]])  # ker Y = span(e1 + e2)
    # S diag(1, -1) S⁻¹ with S = [e1, e1 + e2] worked out by hand
    assert pl.para_complex_for(Y) == pl.make_structure([[1, -2], [0, -1]])


nonzero = lambda k: st.lists(rationals, min_size=k, max_size=k).filter(any)  # noqa: E731
invertible = st.lists(rationals, min_size=4, max_size=4).map(lambda v: rq.asmatrix([v[:2], v[2:]])).filter(
    lambda g: rq.det(g) != 0
)


@given(nonzero(3), nonzero(2))
def test_rank_one_elements_are_fixed_by_their_structure(v, u):
    X = np.outer(rq.asarray(v), rq.asarray(u))
    A = pl.para_complex_for(X)
    assert A.epsilon == 1
    assert rq.equal(pl.apply(A, X), X)


@given(invertible)
def test_eigenvectors_of_para_complex_structures_are_rank_one(g):
    A = pl.make_structure(g.dot(pl.J_PLUS).dot(rq.inverse(g)))
    plus, minus = pl.eigen_split(A, 3)
    assert len(plus) == len(minus) == 3
    for x in plus + minus:
        assert pl.segre_member(x) == (True, False)


def test_planes():
    beta = pl.beta_plane([1, 0], 3)
    assert len(beta) == 3 and all(rq.is_zero(x[:, 0]) for x in beta)
    alpha = pl.alpha_plane([1, 0, 0])
    E = lambda a, b: (lambda z: (z.__setitem__((a, b), 1), z)[1])(rq.zeros((3, 2)))  # noqa: E731
    assert rq.same_span([x.reshape(-1) for x in alpha], [E(0, 0).reshape(-1), E(0, 1).reshape(-1)])
    diag = pl.beta_plane([1, 1], 3)
    assert len(diag) == 3
    rng = np.random.default_rng(0)
    for _ in range(10):
        c = [Fraction(int(v)) for v in rng.integers(-3, 4, size=3)]
        x = sum((ci * b for ci, b in zip(c, diag)), rq.zeros((3, 2)))
        if not rq.is_zero(x):
            assert pl.segre_member(x)[0]


def test_eigen_split_and_kernel_image():
    plus, minus = pl.eigen_split(pl.standard(1), 2)
    assert all(rq.is_zero(x[:, 1]) for x in plus) and len(plus) == 2
    assert all(rq.is_zero(x[:, 0]) for x in minus) and len(minus) == 2
    ker, im = pl.kernel_image(pl.standard(0), 2)
    flat = lambda xs: [x.reshape(-1) for x in xs]  # noqa: E731
    assert rq.same_span(flat(ker), flat(im))
    assert all(rq.is_zero(x[:, 0]) for x in ker)


def test_conjugated_eigen_split():
    g = rq.asmatrix([[1, 1], [0, 1]])
    A = pl.make_structure(g.dot(pl.J_PLUS).dot(rq.inverse(g)))
    plus, minus = pl.eigen_split(A, 2)
    flat = lambda xs: [x.reshape(-1) for x in xs]  # noqa: E731
    # X m = X exactly when X kills the image of m - id, which is the line g e₂
    assert rq.same_span(flat(plus), flat(pl.beta_plane(g[:, 1], 2)))
    assert rq.same_span(flat(minus), flat(pl.beta_plane(g[:, 0], 2)))


def test_compatible_metric_examples():
    w = pl.standard_symplectic(2)
    g = pl.compatible_metric(w, w)
    assert rq.signature(g.gram) == (2, 2, 0)
    E11 = rq.asmatrix([[1, 0], [0, 0]])
    assert g(E11, E11) == 0
    with pytest.raises(ValueError):
        pl.compatible_metric(w, pl.standard_symplectic(3))


@given(w_elements(2), w_elements(2), trace_free_blocks())
def test_compatible_metric_is_type_11(X, Y, m):
    w = pl.standard_symplectic(2)
    g = pl.compatible_metric(w, w)
    A = pl.make_structure(m)
    assert g(pl.apply(A, X), pl.apply(A, Y)) == A.norm_sq * g(X, Y)
    assert g(X, Y) == g(Y, X)


def test_delta_examples():
    X = rq.asmatrix([[1, 2], [3, 4]])
    assert pl.delta_form(X, X) == -2
    E11 = rq.asmatrix([[1, 0], [0, 0]])
    E22 = rq.asmatrix([[0, 0], [0, 1]])
    assert pl.delta_form(E11, E22) == Fraction(1, 2)


@given(w_elements(2), w_elements(2), trace_free_blocks())
def test_delta_is_type_11(X, Y, m):
    A = pl.make_structure(m)
    assert pl.delta_form(pl.apply(A, X), pl.apply(A, Y)) == A.norm_sq * pl.delta_form(X, Y)


def test_skew_square_scalar_set():
    rep = pl.skew_square_scalar_set()
    assert rep["skew_dimension"] == 6
    assert rep["Q_std_in_solution_set"]
    # left multiplication by diag(1, -1) is δ-skew with scalar square, so the converse fails
    B = np.kron(rq.asmatrix([[1, 0], [0, -1]]), rq.identity(2))
    G = pl.delta_gram()
    assert rq.is_zero(B.T.dot(G) + G.dot(B))
    assert rq.equal(B.dot(B), rq.identity(4))
    assert rep["converse_holds"] is False


def test_structure_triple():
    t = pl.standard_triple()
    t.validate(3)
    assert t.K.epsilon == -1
    t2 = t.conjugated([[2, 1], [1, 1]])
    t2.validate(2)
    with pytest.raises(ValueError):
        pl.StructureTriple(pl.standard(1), pl.standard(1), pl.standard(-1)).validate()


def test_w_json_round_trip():
    X = rq.asmatrix([[Fraction(1, 2), 0], [3, -1]])
    assert rq.equal(pl.w_from_json(pl.w_to_json(X)), X)

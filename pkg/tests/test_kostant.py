import itertools

import numpy as np
import pytest

from segre_kit import kostant as K
from segre_kit import rational as rq
from segre_kit.parabolic import EPSILONS


def _rank(mat) -> int:
    mat = np.asarray(mat, dtype=float)
    if mat.size == 0:
        return 0
    s = np.linalg.svd(mat, compute_uv=False)
    return int((s > 1e-9 * max(1.0, s.max())).sum())


def trace_free_torsion_dimension(n: int) -> int:
    """Float rank count on the full W⊗W⊗W array space, W = V ⊗ U with U = R².

    Keep alternating 2-forms that are symmetric in the two U slots and skew in
    the two V slots, then remove everything any slot-to-value contraction sees.
    """
    d = 2 * n
    eye = np.eye(d ** 3).reshape(d ** 3, n, 2, n, 2, n, 2)
    sym = (eye + eye.transpose(0, 1, 4, 3, 2, 5, 6) - eye.transpose(0, 3, 2, 1, 4, 5, 6)
           - eye.transpose(0, 3, 4, 1, 2, 5, 6)) / 4
    image = sym.reshape(d ** 3, -1)
    traces = np.concatenate([
        np.einsum("zabxycb->zaxyc", sym).reshape(d ** 3, -1),
        np.einsum("zxyabcb->zxyac", sym).reshape(d ** 3, -1),
        np.einsum("zabxyae->zbxye", sym).reshape(d ** 3, -1),
        np.einsum("zxyabae->zxybe", sym).reshape(d ** 3, -1),
    ], axis=1)
    # dim of {x in im P : T x = 0} = rank P - rank(T P); the rows of ``image`` and
    # ``traces`` are P e_z and T P e_z, so both ranks are column-space ranks
    return _rank(image) - _rank(traces)


@pytest.mark.parametrize("n", [2, 3])
def test_complex_squares_vanish(algebras, n):
    assert K.complex_checks(algebras(n)) == (True, True)


def test_cochain_space_round_trip(algebras):
    space = K.CochainSpace(algebras(2), 2, -1)
    v = rq.asarray(list(range(space.dim)))
    arr = space.to_array(v)
    assert K.Cochain(2, arr).is_alternating()
    assert rq.equal(space.from_array(arr), v)


def test_n2_harmonics(algebras):
    hs = K.kostant_harmonics(algebras(2), (1, 2, 3))
    assert hs.dimensions[1] == 0
    # the two homogeneity-2 pieces have the dimension of the self-dual and
    # anti-self-dual Weyl tensors in four dimensions, 5 each
    assert hs.k_split == {"K1": 5, "K2": 5} and hs.k_split_ok
    assert hs.dimensions[2] == 10
    assert hs.dimensions[3] == 0
    assert hs.values_graded


def test_n3_torsion(algebras):
    alg = algebras(3)
    hs = K.kostant_harmonics(alg, (1,))
    assert hs.dimensions[1] > 0
    assert hs.torsion_trace_free and hs.torsion_symmetry_type
    assert hs.dimensions[1] == hs.torsion_oracle_dimension == trace_free_torsion_dimension(3)


@pytest.mark.parametrize("n, k, j", [(2, 2, -1), (2, 2, 0), (2, 1, 0), (3, 2, -1)])
def test_harmonic_dimension_matches_float_rank(algebras, n, k, j):
    alg = algebras(n)
    d = K.differential(alg, k, j)
    s = K.codifferential(alg, k, j)
    stacked = np.vstack([d, s])
    assert len(K.harmonic_basis(alg, k, j)) == stacked.shape[1] - _rank(stacked)


def test_phi_counterexample(algebras):
    rep = K.phi_counterexample(algebras(3))
    assert rep.harmonic and rep.in_torsion_space and rep.type02_j_plus
    assert rep.part02_j_minus_nonzero and rep.part02_j_zero_nonzero
    with pytest.raises(ValueError):
        K.phi_counterexample(algebras(2))


@pytest.mark.parametrize("eps", EPSILONS)
def test_no_invisible_torsion_n3(algebras, eps):
    alg = algebras(3)
    assert K.no_invisible_torsion(alg, eps)
    assert K.no_invisible_torsion(alg, eps, extra=5, seed=11)


def test_elementary_conjugates_alone_miss_torsion_for_eps_plus(algebras):
    # conjugating j⁺ by the six elementary matrices only reaches three eigenline
    # configurations; the resulting family leaves torsion invisible
    rep = K.invisible_torsion(algebras(3), 1, depth=1)
    assert rep.invisible_dimension > 0
    assert K.invisible_torsion(algebras(3), 1, depth=2).invisible_dimension == 0


def test_part02_numerator_scales_part02():
    from segre_kit import pq_linear as pl
    from segre_kit import type_decomp as td

    rng = np.random.default_rng(5)
    vals = rq.asarray(rng.integers(-3, 4, size=(4, 4, 4)).tolist())
    phi = td.BilinearMap(2, vals)
    for m in ([[1, 2], [0, -1]], [[0, 1], [-1, 0]], [[0, 1], [0, 0]]):
        A = pl.make_structure(m)
        M = A.on_w(2)
        s = A.norm_sq
        factor = 4 * s if s != 0 else 4
        assert rq.equal(K.part02_numerator(vals, M), factor * td.part02(phi, A).values)


def test_conjugate_family_distinct():
    for eps in EPSILONS:
        fam = K.conjugate_family(eps)
        for a, b in itertools.combinations(fam, 2):
            assert not rq.equal(a, b)
        for m in fam:
            assert rq.equal(m.dot(m), eps * rq.identity(2)) or eps == 0 and rq.is_zero(m.dot(m))

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from segre_kit import _accel
from segre_kit.field import (
    GridSpec,
    StructureField,
    UnknownFamilyError,
    frobenius_residual,
    frobenius_residuals,
    nijenhuis_field,
    nijenhuis_numeric,
    parse_config,
    richardson_ratio,
    sweep,
)
from segre_kit.field import kernels

BACKENDS = ["numpy", "python"] + (["numba"] if _accel.numba_available() else [])


def nijenhuis_reference(fld: StructureField, x: np.ndarray, h: float = 1e-3) -> np.ndarray:
    """N(∂_i, ∂_j) = -A²[∂_i,∂_j] - [A∂_i, A∂_j] + A[A∂_i, ∂_j] + A[∂_i, A∂_j] with a five-point stencil."""
    d = fld.dim
    A = fld.evaluate(x)
    dA = np.zeros((d, d, d))
    for k in range(d):
        e = np.zeros(d)
        e[k] = h
        f = lambda t: fld.evaluate(x + t * e)  # noqa: E731
        dA[k] = (-f(2) + 8 * f(1) - 8 * f(-1) + f(-2)) / (12 * h)
    out = np.zeros((d, d, d))
    for i in range(d):
        for j in range(d):
            V, W = A[:, i], A[:, j]
            br = np.einsum("k,kr->r", V, dA[:, :, j]) - np.einsum("k,kr->r", W, dA[:, :, i])
            # [A∂_i, ∂_j] = -∂_j(A∂_i) and [∂_i, A∂_j] = ∂_i(A∂_j)
            out[i, j] = -br + A @ (-dA[j][:, i]) + A @ dA[i][:, j]
    return out


@pytest.mark.parametrize("eps", [-1, 0, 1])
def test_flat_fields_vanish(eps):
    fld = StructureField("flat", 2, (float(eps),))
    assert fld.square_defect(np.zeros(4)) == 0
    s = sweep(fld, GridSpec.cube(4, steps=3))
    assert s.nijenhuis_max < 1e-10
    assert nijenhuis_numeric(fld, [0.3, -0.2, 0.1, 0.5], 0, 1).max_abs < 1e-10
    if eps in (0, 1):
        assert frobenius_residual(fld, [0.1, 0.2, 0.3, 0.4]) < 1e-10


def test_tangent_shear():
    fld = StructureField("tangent-shear", 2)
    pts = GridSpec.cube(4).points()
    assert float(np.max(frobenius_residuals(fld, pts))) < 1e-8
    assert float(np.max(np.abs(nijenhuis_field(fld, pts)))) > 0.1
    assert fld.square_defect(pts) < 1e-14


def test_para_graph_flags():
    pts = GridSpec.cube(4).points()
    integrable = StructureField("para-graph", 2, integrable=True)
    assert integrable.params[2] == 0.0
    assert float(np.max(np.abs(nijenhuis_field(integrable, pts)))) < 1e-6
    assert float(np.max(frobenius_residuals(integrable, pts))) < 1e-6
    off = StructureField("para-graph", 2)
    assert float(np.max(np.abs(nijenhuis_field(off, pts)))) > 0.01
    assert float(np.max(frobenius_residuals(off, pts))) > 0.01
    assert off.square_defect(pts) < 1e-12


@pytest.mark.parametrize("family, n", [("tangent-shear", 2), ("para-graph", 2), ("tangent-shear", 3), ("para-graph", 3)])
def test_closed_form_oracles_match_reference(family, n):
    fld = StructureField(family, n)
    rng = np.random.default_rng(1)
    for x in rng.uniform(-1, 1, size=(5, fld.dim)):
        assert np.max(np.abs(fld.oracle(x)[0] - nijenhuis_reference(fld, x))) < 1e-8


@pytest.mark.parametrize("family", ["tangent-shear", "para-graph"])
def test_richardson_second_order(family):
    fld = StructureField(family, 2)
    e1, e2, ratio = richardson_ratio(fld, GridSpec.cube(4), h=1e-2)
    assert e2 < e1 and 3.5 <= ratio <= 4.5


def test_sweep_summary_and_verdicts():
    fld = StructureField("para-graph", 2)
    s = sweep(fld, GridSpec.cube(4))
    assert s.points == 625
    assert s.oracle_deviation <= s.oracle_tolerance
    assert all(s.verdicts.values())
    assert set(s.per_pair) == {f"{i},{j}" for i in range(4) for j in range(i + 1, 4)}


def test_sweep_is_independent_of_worker_count():
    fld = StructureField("tangent-shear", 2)
    grid = GridSpec.cube(4, steps=4)
    a = sweep(fld, grid, workers=1).to_json()
    b = sweep(fld, grid, workers=3).to_json()
    assert a == b


@given(arrays(np.float64, (3, 4, 4), elements=st.floats(-2, 2)),
       arrays(np.float64, (3, 4, 4, 4), elements=st.floats(-2, 2)))
def test_backends_agree(A, dA):
    ref = kernels.nijenhuis(A, dA, "python")
    for b in BACKENDS:
        assert np.allclose(kernels.nijenhuis(A, dA, b), ref, atol=1e-12)
        assert np.allclose(kernels.frame_bracket(A, dA, b), kernels.frame_bracket(A, dA, "python"), atol=1e-12)
    assert np.allclose(ref, -np.swapaxes(ref, 1, 2))


def test_backend_env_flag(monkeypatch):
    monkeypatch.setenv(_accel.ENV_FLAG, "1")
    assert _accel.default_backend() == "numpy"
    monkeypatch.setenv(_accel.ENV_FLAG, "0")
    assert _accel.default_backend() == ("numba" if _accel.numba_available() else "numpy")
    with pytest.raises(ValueError):
        kernels.nijenhuis(np.zeros((1, 2, 2)), np.zeros((1, 2, 2, 2)), "fortran")


def test_worker_env(monkeypatch):
    monkeypatch.setenv(_accel.WORKERS_ENV, "3")
    assert _accel.worker_count() == 3
    assert _accel.worker_count(1) == 1
    monkeypatch.setenv(_accel.WORKERS_ENV, "many")
    with pytest.raises(ValueError):
        _accel.worker_count()


def test_errors():
    with pytest.raises(UnknownFamilyError):
        StructureField("nope", 2)
    with pytest.raises(ValueError):
        StructureField("flat", 2, (2.0,))
    with pytest.raises(ValueError):
        StructureField("tangent-shear", 2, integrable=True)
    with pytest.raises(ValueError):
        GridSpec((), (), 3).points()
    with pytest.raises(ValueError):
        sweep(StructureField("flat", 2, (1.0,)), GridSpec((0.0,), (1.0,), 0))
    with pytest.raises(ValueError):
        frobenius_residual(StructureField("flat", 2, (-1.0,)), [0, 0, 0, 0])
    with pytest.raises(ValueError):
        nijenhuis_numeric(StructureField("flat", 2, (1.0,)), [0, 0, 0, 0], 0, 7)
    with pytest.raises(ValueError):
        nijenhuis_field(StructureField("flat", 2, (1.0,)), np.zeros((1, 4)), h=0.0)


def test_parse_config():
    fld, grid, h = parse_config(
        '{"family": "tangent-shear", "n": 2, "params": [1.0, 0.5], '
        '"grid": {"min": [-1, -1, -1, -1], "max": [1, 1, 1, 1], "steps": 5}, "h": 1e-3}'
    )
    assert fld.family == "tangent-shear" and grid.steps == 5 and h == 1e-3
    with pytest.raises(ValueError):
        parse_config("{not json")
    with pytest.raises(ValueError):
        parse_config({"n": 2})
    with pytest.raises(UnknownFamilyError):
        parse_config({"family": "nope"})
    with pytest.raises(ValueError):
        parse_config({"family": "flat", "params": [1], "grid": {"min": [0, 0], "max": [1, 1]}})

"""Builtin families of ε-structure fields on charts of ℝ^{2n}, each with a
closed-form Nijenhuis oracle.

Coordinates are (x_0..x_{n-1}, y_0..y_{n-1}); indices a+1 are taken mod n.

flat (params [ε])
    The constant structure X -> X·j^ε on W ≅ ℝ^{2n} (index 2a+b).
    Oracle: N = 0.

tangent-shear (ε = 0, params [p0, p1])
    A ∂x_a = V_a = Σ_d C_da(y) ∂y_d,  A ∂y_d = 0, with
    C_da = δ_da (1 + p1 y_{a+1}²) + δ_{d,a+1} p0 sin(y_a).
    On [-1,1]^n with p1 ≥ 0 and |p0| sin(1) < 1, det C ≥ 1 - (|p0| sin 1)^n > 0,
    so ker A = im A = span{∂y} is a constant (hence involutive) distribution.
    Oracle: N(∂x_a, ∂x_b) = -[V_a, V_b], i.e. component e equals
    -Σ_d (C_da ∂_{y_d} C_eb - C_db ∂_{y_d} C_ea); all other pairs vanish.

para-graph (ε = 1, params [p0, p1, p2])
    A ∂x_a = ∂x_a + 2 Σ_d G_da(x) ∂y_d,  A ∂y_d = -∂y_d, so that
    E₊ = span{∂x_a + Σ_d G_da ∂y_d} and E₋ = span{∂y}.
    G = Hess f + p2·diag(sin x_{d+1}) with
    f = p0 Σ_a sin(x_a) x_{a+1} + p1 Σ_a x_a³/6.
    For p2 = 0, E₊ is the pushforward of span{∂x} under (x, y) -> (x, y + ∇f)
    and the structure is integrable.
    Oracle: N(∂x_a, ∂x_b) = -4 Σ_d (∂_a G_db - ∂_b G_da) ∂y_d; other pairs vanish.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..pq_linear import STANDARD_J


class UnknownFamilyError(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    name: str
    eps: Callable[[Sequence[float]], int]
    default_params: tuple[float, ...]
    evaluate: Callable[[np.ndarray, np.ndarray, int], np.ndarray]
    oracle: Callable[[np.ndarray, np.ndarray, int], np.ndarray]
    derivative_bound: Callable[[np.ndarray, float], float]
    nparams: int


# ---------------------------------------------------------------------------
# flat


def _flat_eps(params) -> int:
    eps = int(round(params[0]))
    if eps not in (-1, 0, 1) or eps != params[0]:
        raise ValueError(f"flat family takes ε ∈ {{-1, 0, 1}} as its parameter, got {params[0]}")
    return eps


def _flat_eval(pts, params, n):
    j = np.array(STANDARD_J[_flat_eps(params)], dtype=np.float64)
    A = np.kron(np.eye(n), j.T)
    return np.broadcast_to(A, (pts.shape[0],) + A.shape).copy()


def _zero_oracle(pts, params, n):
    d = 2 * n
    return np.zeros((pts.shape[0], d, d, d))


# ---------------------------------------------------------------------------
# tangent-shear


def _shear_C(y, params, n):
    p0, p1 = params
    P = y.shape[0]
    C = np.zeros((P, n, n))
    dC = np.zeros((P, n, n, n))  # dC[p, k, e, a] = ∂_{y_k} C_ea
    for a in range(n):
        s = (a + 1) % n
        C[:, a, a] += 1.0 + p1 * y[:, s] ** 2
        C[:, s, a] += p0 * np.sin(y[:, a])
        dC[:, s, a, a] += 2.0 * p1 * y[:, s]
        dC[:, a, s, a] += p0 * np.cos(y[:, a])
    return C, dC


def _shear_eval(pts, params, n):
    C, _ = _shear_C(pts[:, n:], params, n)
    A = np.zeros((pts.shape[0], 2 * n, 2 * n))
    A[:, n:, :n] = C
    return A


def _shear_oracle(pts, params, n):
    C, dC = _shear_C(pts[:, n:], params, n)
    # [V_a, V_b]_e = Σ_d C_da ∂_d C_eb - C_db ∂_d C_ea
    t = np.einsum("pda,pdeb->pabe", C, dC)
    br = t - np.swapaxes(t, 1, 2)
    out = np.zeros((pts.shape[0], 2 * n, 2 * n, 2 * n))
    out[:, :n, :n, n:] = -br
    return out


def _shear_bound(params, radius):
    p0, p1 = (abs(float(p)) for p in params)
    return (1.0 + p1 * radius**2 + p0) * (2.0 * p1 + p0)


# ---------------------------------------------------------------------------
# para-graph


def _graph_params(params):
    p0, p1, p2 = params
    return float(p0), float(p1), float(p2)


def _graph_G(x, params, n):
    """G and dG[p, k, d, b] = ∂_k G_db."""
    p0, p1, p2 = _graph_params(params)
    P = x.shape[0]
    G = np.zeros((P, n, n))
    dG = np.zeros((P, n, n, n))
    for c in range(n):
        s = (c + 1) % n
        sc, cc = np.sin(x[:, c]), np.cos(x[:, c])
        # Hessian of p0 sin(x_c) x_s
        G[:, c, c] += -p0 * sc * x[:, s]
        dG[:, c, c, c] += -p0 * cc * x[:, s]
        dG[:, s, c, c] += -p0 * sc
        G[:, c, s] += p0 * cc
        G[:, s, c] += p0 * cc
        dG[:, c, c, s] += -p0 * sc
        dG[:, c, s, c] += -p0 * sc
        # Hessian of p1 x_c³/6
        G[:, c, c] += p1 * x[:, c]
        dG[:, c, c, c] += p1
        # non-symmetric part p2 sin(x_{c+1}) on the diagonal
        G[:, c, c] += p2 * np.sin(x[:, s])
        dG[:, s, c, c] += p2 * np.cos(x[:, s])
    return G, dG


def _graph_eval(pts, params, n):
    G, _ = _graph_G(pts[:, :n], params, n)
    P = pts.shape[0]
    A = np.zeros((P, 2 * n, 2 * n))
    A[:, :n, :n] = np.eye(n)
    A[:, n:, n:] = -np.eye(n)
    A[:, n:, :n] = 2.0 * G
    return A


def _graph_oracle(pts, params, n):
    _, dG = _graph_G(pts[:, :n], params, n)
    # curl[p, a, b, d] = ∂_a G_db - ∂_b G_da
    t = np.transpose(dG, (0, 1, 3, 2))  # t[p, a, b, d] = ∂_a G_db
    curl = t - np.swapaxes(t, 1, 2)
    out = np.zeros((pts.shape[0], 2 * n, 2 * n, 2 * n))
    out[:, :n, :n, n:] = -4.0 * curl
    return out


def _graph_bound(params, radius):
    p0, _, p2 = (abs(v) for v in _graph_params(params))
    return p0 * max(1.0, radius) + p2


FAMILIES: dict[str, FamilySpec] = {
    "flat": FamilySpec("flat", _flat_eps, (1.0,), _flat_eval, _zero_oracle, lambda p, r: 0.0, 1),
    "tangent-shear": FamilySpec(
        "tangent-shear", lambda p: 0, (1.0, 0.5), _shear_eval, _shear_oracle, _shear_bound, 2
    ),
    "para-graph": FamilySpec(
        "para-graph", lambda p: 1, (0.5, 1.0, 0.5), _graph_eval, _graph_oracle, _graph_bound, 3
    ),
}


def get_family(name: str) -> FamilySpec:
    try:
        return FAMILIES[name]
    except KeyError:
        raise UnknownFamilyError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}") from None


@dataclass(frozen=True)
class StructureField:
    family: str
    n: int
    params: tuple[float, ...] = ()
    integrable: bool = False
    spec: FamilySpec = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        spec = get_family(self.family)
        params = tuple(float(p) for p in (self.params or spec.default_params))
        if len(params) != spec.nparams:
            raise ValueError(f"{self.family} takes {spec.nparams} parameters, got {len(params)}")
        if self.integrable:
            if self.family != "para-graph":
                raise ValueError("the integrability flag only applies to para-graph")
            params = params[:2] + (0.0,)
        if self.n < 1:
            raise ValueError("n must be positive")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "spec", spec)
        spec.eps(params)

    @property
    def dim(self) -> int:
        return 2 * self.n

    @property
    def eps(self) -> int:
        return self.spec.eps(self.params)

    def _points(self, x) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(x, dtype=np.float64))
        if pts.shape[1] != self.dim:
            raise ValueError(f"points must have {self.dim} coordinates")
        return pts

    def evaluate(self, x) -> np.ndarray:
        """A at one point (shape (d, d)) or at a batch of points (shape (P, d, d))."""
        arr = np.asarray(x, dtype=np.float64)
        out = self.spec.evaluate(self._points(x), np.array(self.params), self.n)
        if not np.all(np.isfinite(out)):
            raise FloatingPointError(f"{self.family} evaluator produced non-finite values")
        return out[0] if arr.ndim == 1 else out

    def oracle(self, x) -> np.ndarray:
        """Closed-form N_A(∂_i, ∂_j) for all pairs, shape (P, d, d, d)."""
        return self.spec.oracle(self._points(x), np.array(self.params), self.n)

    def derivative_bound(self, radius: float = 1.0) -> float:
        return float(self.spec.derivative_bound(np.array(self.params), radius))

    def square_defect(self, x) -> float:
        A = self.evaluate(self._points(x))
        return float(np.max(np.abs(A @ A - self.eps * np.eye(self.dim))))

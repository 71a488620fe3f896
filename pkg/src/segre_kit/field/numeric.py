"""Central-difference Nijenhuis tensors, Frobenius residuals and grid sweeps."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .. import _accel
from . import kernels
from .families import StructureField

DEFAULT_H = 1e-3

# Tolerance table, versioned.  "oracle_factor" multiplies max(1, bound)·h²,
# where bound is the family's third-derivative bound on the swept region.
TOLERANCES = {
    "version": 1,
    "flat": {"nijenhuis_max": 1e-10, "frobenius_max": 1e-10},
    "tangent-shear": {"frobenius_max": 1e-8, "nijenhuis_min": 0.1, "oracle_factor": 4.0},
    "para-graph": {
        "oracle_factor": 4.0,
        "integrable_nijenhuis_max": 1e-6,
        "integrable_frobenius_max": 1e-6,
        "nonintegrable_min": 0.01,
    },
    "richardson": {"ratio_min": 3.5, "ratio_max": 4.5},
    "antisymmetry": 1e-12,
}


def oracle_tolerance(fld: StructureField, h: float, radius: float = 1.0) -> float:
    factor = TOLERANCES.get(fld.family, {}).get("oracle_factor", 4.0)
    return factor * max(1.0, fld.derivative_bound(radius)) * h * h


# ---------------------------------------------------------------------------
# stencils


def derivatives(fld: StructureField, pts: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """A and its central-difference partials dA[p, k] = ∂_k A at each point."""
    if not h > 0:
        raise ValueError(f"step h must be positive, got {h}")
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    P, d = pts.shape
    shifts = h * np.eye(d)
    stencil = np.concatenate([pts[:, None, :] + shifts[None], pts[:, None, :] - shifts[None]], axis=1)
    vals = fld.evaluate(stencil.reshape(-1, d)).reshape(P, 2 * d, d, d)
    dA = (vals[:, :d] - vals[:, d:]) / (2.0 * h)
    return fld.evaluate(pts).reshape(P, d, d), dA


def nijenhuis_field(fld: StructureField, pts, h: float = DEFAULT_H, backend: Optional[str] = None) -> np.ndarray:
    """N[p, i, j] = N_A(∂_i, ∂_j) at every point, shape (P, d, d, d)."""
    A, dA = derivatives(fld, pts, h)
    return kernels.nijenhuis(A, dA, backend)


@dataclass(frozen=True)
class NijenhuisResult:
    point: tuple[float, ...]
    frame_pair: tuple[int, int]
    value: tuple[float, ...]
    max_abs: float


def nijenhuis_numeric(
    fld: StructureField, x: Sequence[float], i: int, j: int, h: float = DEFAULT_H, backend: Optional[str] = None
) -> NijenhuisResult:
    d = fld.dim
    if not (0 <= i < d and 0 <= j < d):
        raise ValueError(f"frame indices must lie in [0, {d})")
    N = nijenhuis_field(fld, np.asarray(x, dtype=np.float64)[None, :], h, backend)[0, i, j]
    return NijenhuisResult(tuple(float(v) for v in x), (i, j), tuple(N.tolist()), float(np.max(np.abs(N))))


# ---------------------------------------------------------------------------
# Frobenius residual


def _frames(fld: StructureField, A: np.ndarray, dA: np.ndarray):
    eps = fld.eps
    if eps == 0:
        return [(A, dA)]
    if eps == 1:
        I = np.eye(fld.dim)
        return [((I + A) / 2, dA / 2), ((I - A) / 2, -dA / 2)]
    raise ValueError("frobenius_residual needs ε ∈ {0, 1}")


def frobenius_residuals(fld: StructureField, pts, h: float = DEFAULT_H, backend: Optional[str] = None) -> np.ndarray:
    """Per point, the largest component of a frame bracket outside the distribution(s).

    For ε = 0 the distribution is ker A = im A (spanned by the columns of A),
    for ε = 1 the two eigendistributions are spanned by the columns of (I ± A)/2.
    """
    if fld.eps not in (0, 1):
        raise ValueError("frobenius_residual needs ε ∈ {0, 1}")
    A, dA = derivatives(fld, pts, h)
    worst = np.zeros(A.shape[0])
    for F, dF in _frames(fld, A, dA):
        B = kernels.frame_bracket(F, dF, backend)  # (P, m, m, d)
        proj = F @ np.linalg.pinv(F, rcond=1e-10)
        outside = B - np.einsum("prs,pijs->pijr", proj, B)
        worst = np.maximum(worst, np.max(np.abs(outside), axis=(1, 2, 3)))
    return worst


def frobenius_residual(fld: StructureField, x: Sequence[float], h: float = DEFAULT_H) -> float:
    return float(frobenius_residuals(fld, np.asarray(x, dtype=np.float64)[None, :], h)[0])


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class GridSpec:
    min: tuple[float, ...]
    max: tuple[float, ...]
    steps: int

    def points(self) -> np.ndarray:
        if self.steps < 1 or len(self.min) == 0 or len(self.min) != len(self.max):
            raise ValueError("empty or inconsistent grid")
        axes = [np.linspace(lo, hi, self.steps) for lo, hi in zip(self.min, self.max)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.reshape(-1) for m in mesh], axis=1)

    @property
    def radius(self) -> float:
        return float(max(max(abs(v) for v in self.min), max(abs(v) for v in self.max)))

    @classmethod
    def cube(cls, dim: int, lo: float = -1.0, hi: float = 1.0, steps: int = 5) -> "GridSpec":
        return cls((lo,) * dim, (hi,) * dim, steps)


@dataclass
class SweepSummary:
    family: str
    n: int
    h: float
    points: int
    nijenhuis_max: float
    per_pair: dict[str, float]
    antisymmetry_defect: float
    oracle_deviation: float
    oracle_tolerance: float
    frobenius_max: Optional[float] = None
    verdicts: dict[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {k: v for k, v in vars(self).items()}


def _chunks(n: int, parts: int) -> list[slice]:
    size = -(-n // parts)
    return [slice(i, min(n, i + size)) for i in range(0, n, size)]


def _sweep_chunk(fld: StructureField, pts: np.ndarray, h: float, backend: Optional[str]):
    N = nijenhuis_field(fld, pts, h, backend)
    dev = np.abs(N - fld.oracle(pts))
    frob = frobenius_residuals(fld, pts, h, backend) if fld.eps in (0, 1) else None
    return (
        np.max(np.abs(N), axis=(0, 3)),
        float(np.max(np.abs(N + np.swapaxes(N, 1, 2)))),
        float(np.max(dev)),
        None if frob is None else float(np.max(frob)),
    )


def sweep(
    fld: StructureField,
    grid: GridSpec,
    h: float = DEFAULT_H,
    workers: Optional[int] = None,
    backend: Optional[str] = None,
) -> SweepSummary:
    """Maxima over the grid; chunks may run in threads but are reduced in order."""
    pts = grid.points()
    if pts.shape[0] == 0:
        raise ValueError("empty grid")
    if pts.shape[1] != fld.dim:
        raise ValueError(f"grid has {pts.shape[1]} coordinates, field needs {fld.dim}")
    nw = min(_accel.worker_count(workers), pts.shape[0])
    slices = _chunks(pts.shape[0], nw)
    if nw == 1:
        results = [_sweep_chunk(fld, pts[s], h, backend) for s in slices]
    else:
        with ThreadPoolExecutor(max_workers=nw) as pool:
            results = list(pool.map(lambda s: _sweep_chunk(fld, pts[s], h, backend), slices))
    pair_max = np.max(np.stack([r[0] for r in results]), axis=0)
    d = fld.dim
    per_pair = {f"{i},{j}": float(pair_max[i, j]) for i in range(d) for j in range(i + 1, d)}
    frob = [r[3] for r in results if r[3] is not None]
    summary = SweepSummary(
        family=fld.family,
        n=fld.n,
        h=h,
        points=int(pts.shape[0]),
        nijenhuis_max=float(pair_max.max()),
        per_pair=per_pair,
        antisymmetry_defect=max(r[1] for r in results),
        oracle_deviation=max(r[2] for r in results),
        oracle_tolerance=oracle_tolerance(fld, h, grid.radius),
        frobenius_max=max(frob) if frob else None,
    )
    summary.verdicts = verdicts(fld, summary)
    return summary


def verdicts(fld: StructureField, s: SweepSummary) -> dict[str, bool]:
    tol = TOLERANCES.get(fld.family, {})
    out = {
        "antisymmetric": s.antisymmetry_defect <= TOLERANCES["antisymmetry"] * max(1.0, s.nijenhuis_max),
        "matches_oracle": s.oracle_deviation <= s.oracle_tolerance,
    }
    if fld.family == "flat":
        out["nijenhuis_vanishes"] = s.nijenhuis_max < tol["nijenhuis_max"]
        if s.frobenius_max is not None:
            out["frobenius_vanishes"] = s.frobenius_max < tol["frobenius_max"]
    elif fld.family == "tangent-shear":
        out["frobenius_vanishes"] = s.frobenius_max < tol["frobenius_max"]
        out["nijenhuis_nonzero"] = s.nijenhuis_max > tol["nijenhuis_min"]
    elif fld.family == "para-graph":
        if fld.params[2] == 0.0:
            out["nijenhuis_vanishes"] = s.nijenhuis_max < tol["integrable_nijenhuis_max"]
            out["frobenius_vanishes"] = s.frobenius_max < tol["integrable_frobenius_max"]
        else:
            out["nijenhuis_nonzero"] = s.nijenhuis_max > tol["nonintegrable_min"]
            out["frobenius_nonzero"] = s.frobenius_max > tol["nonintegrable_min"]
    return out


def richardson_ratio(fld: StructureField, grid: GridSpec, h: float = DEFAULT_H) -> tuple[float, float, float]:
    """(deviation at h, deviation at h/2, their ratio) against the oracle."""
    pts = grid.points()
    oracle = fld.oracle(pts)
    e1 = float(np.max(np.abs(nijenhuis_field(fld, pts, h) - oracle)))
    e2 = float(np.max(np.abs(nijenhuis_field(fld, pts, h / 2) - oracle)))
    return e1, e2, (e1 / e2 if e2 > 0 else float("inf"))


# ---------------------------------------------------------------------------
# configuration


def parse_config(obj) -> tuple[StructureField, GridSpec, float]:
    """{"family", "n", "params", "grid": {"min", "max", "steps"}, "h", "integrable"?}."""
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise ValueError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ValueError("config must be a JSON object")
    try:
        n = int(obj.get("n", 2))
        fld = StructureField(
            obj["family"], n, tuple(obj.get("params", ())), bool(obj.get("integrable", False))
        )
        g = obj.get("grid", {})
        dim = 2 * n
        lo = g.get("min", [-1.0] * dim)
        hi = g.get("max", [1.0] * dim)
        if np.isscalar(lo):
            lo = [lo] * dim
        if np.isscalar(hi):
            hi = [hi] * dim
        grid = GridSpec(tuple(float(v) for v in lo), tuple(float(v) for v in hi), int(g.get("steps", 5)))
        h = float(obj.get("h", DEFAULT_H))
    except KeyError as exc:
        raise ValueError(f"config is missing {exc}") from exc
    except (TypeError,) as exc:
        raise ValueError(f"malformed config: {exc}") from exc
    if len(grid.min) != dim or len(grid.max) != dim:
        raise ValueError(f"grid bounds need {dim} coordinates")
    if not h > 0:
        raise ValueError("h must be positive")
    return fld, grid, h

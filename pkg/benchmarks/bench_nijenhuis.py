"""Compare the numba and numpy Nijenhuis kernels on field sweeps.

    python3 benchmarks/bench_nijenhuis.py [--repeat 5] [--steps 5] [--n 2 3]

Compilation time of the numba kernels is reported separately from the warm
timings.  Results are checked to agree before any timing is printed.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from segre_kit import _accel
from segre_kit.field import GridSpec, StructureField
from segre_kit.field import kernels
from segre_kit.field.numeric import derivatives


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--steps", type=int, default=5)
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3])
    args = ap.parse_args()

    backends = ["numpy"] + (["numba"] if _accel.numba_available() else [])
    if "numba" in backends:
        t = time.perf_counter()
        kernels.nijenhuis(np.zeros((1, 2, 2)), np.zeros((1, 2, 2, 2)), "numba")
        print(f"numba compile: {time.perf_counter() - t:.2f} s")

    print(f"{'family':<15}{'n':>3}{'points':>9}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for n in args.n:
        for family in ("tangent-shear", "para-graph"):
            fld = StructureField(family, n)
            pts = GridSpec.cube(fld.dim, steps=args.steps).points()
            A, dA = derivatives(fld, pts, 1e-3)
            ref = kernels.nijenhuis(A, dA, "numpy")
            row = []
            for b in backends:
                assert np.allclose(kernels.nijenhuis(A, dA, b), ref, atol=1e-12)
                row.append(best_of(lambda: kernels.nijenhuis(A, dA, b), args.repeat))
            speed = f"{row[0] / row[-1]:>9.2f}x" if len(row) > 1 else ""
            print(f"{family:<15}{n:>3}{len(pts):>9}" + "".join(f"{t * 1e3:>10.2f}ms" for t in row) + speed)


if __name__ == "__main__":
    main()

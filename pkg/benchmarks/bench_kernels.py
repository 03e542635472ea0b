"""Time trajectory iteration on the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--steps N] [--repeat R]

Both backends run the same handles and starts; the script also checks that
they produce identical trajectories.
"""
import argparse
import timeit

import numpy as np

from sqso import _fallback, fixtures
from sqso._backend import BACKEND, kernels
from sqso.dynamics import as_operator
from sqso.operators import build_tensor, random_skew


def cases(rng):
    return {
        "sqso m=3": as_operator(fixtures.b_family_pair()),
        "sqso m=8": as_operator(fixtures.random_nonlinear_pair(8, rng)),
        "tensor m=8": as_operator(build_tensor(fixtures.random_nonlinear_pair(8, rng))),
        "volterra m=8": as_operator(random_skew(8, rng)),
        "linear m=3 (cycle)": as_operator(fixtures.cyclic_permutation_pair()),
    }


def run(mod, h, x0, steps):
    pts = np.empty((steps + 1, h.m))
    dl = np.empty(steps)
    # conv_tol tiny so every case runs its full budget where possible
    n, _, _ = mod.orbit(h.kind, h.m1, h.m2, h.tensor, x0, steps, 1e-300, 10, 50, pts, dl)
    return pts[:n]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if BACKEND != "cython":
        raise SystemExit("compiled kernels not available; build with "
                         "`pip install -e . --no-build-isolation`")
    rng = np.random.default_rng(7)
    print(f"{'case':<22}{'steps':>7}{'cython ms':>12}{'python ms':>12}{'speedup':>9}")
    for name, h in cases(rng).items():
        x0 = rng.dirichlet(np.ones(h.m))
        a, b = run(kernels, h, x0, args.steps), run(_fallback, h, x0, args.steps)
        assert np.array_equal(a, b), name
        tc = min(timeit.repeat(lambda: run(kernels, h, x0, args.steps),
                               number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: run(_fallback, h, x0, args.steps),
                               number=1, repeat=args.repeat))
        print(f"{name:<22}{len(a) - 1:>7}{tc * 1e3:>12.2f}{tp * 1e3:>12.2f}{tp / tc:>8.0f}x")


if __name__ == "__main__":
    main()

"""Timing comparison of the numba and numpy kernel backends.

Runs the shift matvec and the full layered forward pass at a few graph
sizes, once per backend, and prints median wall times plus the speedup.
The numba path is called once before timing so JIT compilation does not
pollute the numbers.

Usage:
    python benchmarks/bench_kernels.py [--sizes 128,256,512,1024] [--repeats 7]
"""

from __future__ import annotations

import argparse
import os
import time

import numpy as np

from gnde import catalog, kernels, neural, sampling

LAYERS = 2
CHANNELS = 4
TAPS = 3


def _system(n: int, rng):
    s = sampling.graph_shift(sampling.sample_weighted(catalog.tent(), n))
    x = rng.normal(size=(n, CHANNELS))
    coeffs = rng.uniform(-1.0, 1.0, size=(LAYERS, CHANNELS, CHANNELS, TAPS))
    return s, x, coeffs


def _median_ms(fn, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append((time.perf_counter() - t0) * 1000.0)
    return float(np.median(times))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="128,256,512,1024")
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args(argv)
    sizes = [int(tok) for tok in args.sizes.split(",")]

    rng = np.random.default_rng(0)
    act = neural.Activation("tanh")

    # trigger JIT compilation outside the timed region
    os.environ[kernels.BACKEND_ENV] = "numba"
    s, x, coeffs = _system(64, rng)
    kernels.shift_matvec(s, x)
    neural.gnn_forward(s, x, coeffs, act)
    print(f"numba available: {kernels.active_backend() == 'numba'}")

    header = f"{'op':<10} {'n':>6} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        s, x, coeffs = _system(n, rng)
        for label, call in (
            ("matvec", lambda: kernels.shift_matvec(s, x)),
            ("forward", lambda: neural.gnn_forward(s, x, coeffs, act)),
        ):
            ms = {}
            for backend in ("numpy", "numba"):
                os.environ[kernels.BACKEND_ENV] = backend
                call()  # warm caches / JIT for this shape
                ms[backend] = _median_ms(call, args.repeats)
            ratio = ms["numpy"] / ms["numba"] if ms["numba"] > 0 else float("inf")
            print(
                f"{label:<10} {n:>6} {ms['numpy']:>10.3f} {ms['numba']:>10.3f}"
                f" {ratio:>7.2f}x"
            )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

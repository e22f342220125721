"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both modules are imported directly, so one process measures both.  The
last section times a full covariance evaluation under each backend in a
fresh interpreter (AIRY2COV_PURE_PYTHON=1 selects the fallback).
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from airy2cov import _kernels_py as pure
from airy2cov.numerics import _chebyshev_bary_weights, chebyshev_points

try:
    from airy2cov import _kernels as compiled
except ImportError:
    compiled = None


def best(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_cases():
    rng = np.random.default_rng(0)
    xs = rng.uniform(-30, 20, 200_000)
    nodes = chebyshev_points(512, -10, 10)
    weights = _chebyshev_bary_weights(512)
    values = np.exp(-0.1 * nodes**2)
    targets = rng.uniform(-10, 10, 20_000)
    scalars = xs[:20_000].tolist()
    return {
        "airy_array (2e5 points)": lambda m: m.airy_array(xs),
        "airy_scalar (2e4 calls)": lambda m: [m.airy_scalar(x) for x in scalars],
        "barycentric_eval (513 nodes, 2e4 targets)": lambda m: m.barycentric_eval(nodes, weights, values, targets),
    }


def end_to_end(pure_python: bool) -> float:
    env = dict(os.environ, AIRY2COV_PURE_PYTHON="1" if pure_python else "0")
    code = (
        "import time; from airy2cov.fredholm import covariance_exact; from airy2cov import BACKEND;"
        "t0 = time.perf_counter(); covariance_exact(10.0, order=40);"
        "print(BACKEND, time.perf_counter() - t0)"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, seconds = out.stdout.split()
    assert backend == ("python" if pure_python else "compiled"), backend
    return float(seconds)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if compiled is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation` first")
        return
    print(f"{'kernel':45s} {'compiled':>10s} {'python':>10s} {'speedup':>8s}")
    for name, case in kernel_cases().items():
        tc = best(lambda: case(compiled), args.repeat)
        tp = best(lambda: case(pure), args.repeat)
        print(f"{name:45s} {tc * 1e3:8.2f}ms {tp * 1e3:8.2f}ms {tp / tc:7.1f}x")
    tc, tp = end_to_end(False), end_to_end(True)
    name = "covariance_exact(t=10, 40x40 grid)"
    print(f"{name:45s} {tc:9.2f}s {tp:9.2f}s {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()

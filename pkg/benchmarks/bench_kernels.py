"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--degree 30]

The first table calls each kernel namespace directly. The second runs a
whole pipeline (polygon screen, detection, annulus) over random
polynomials in a fresh interpreter per backend, selected through
PELLET_DISABLE_NUMBA, so it includes import and cached-JIT load time.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from pellet import kernels

PIPELINE = """
import time
import numpy as np
from pellet.poly import make_polynomial
from pellet.polygon import analyze_all
rng = np.random.default_rng(0)
polys = []
for _ in range({count}):
    n = int(rng.integers(5, {degree} + 1))
    a = 10.0 ** rng.uniform(-3, 3, n + 1) * np.exp(2j * np.pi * rng.random(n + 1))
    polys.append(make_polynomial(a))
analyze_all(polys[0])
t0 = time.perf_counter()
for p in polys:
    analyze_all(p)
print(time.perf_counter() - t0)
"""


def _cases(degree: int):
    rng = np.random.default_rng(1)
    n, k = degree, degree // 2
    eta = 10.0 ** rng.uniform(-2, 2, n + 1)
    eta[n] = 1.0
    c = eta.copy()
    c[k] = -c[k]
    a = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
    a /= a[-1]
    z0 = 3.0 * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    return {
        "horner": lambda b: b.horner(c, 0.9),
        "split": lambda b: b.split(c, k, 0.9),
        "trinomial_terms": lambda b: b.trinomial_terms(eta, k, 0.9),
        "sigma_ratio": lambda b: b.sigma_ratio(eta, k, 0.9),
        "bisect": lambda b: b.bisect(c, 0.0, 50.0, 1e-15, 4000),
        "aberth": lambda b: b.aberth(a, z0.copy(), 1e-14, 500),
    }


def bench_kernels(repeat: int, degree: int) -> None:
    backends = [kernels.NUMPY] + ([kernels.NUMBA] if kernels.NUMBA is not None else [])
    cases = _cases(degree)
    print(f"kernel timings, degree {degree} (best of {repeat}, microseconds per call)")
    print(f"{'kernel':<16}" + "".join(f"{b.name:>12}" for b in backends) + f"{'speedup':>10}")
    for name, call in cases.items():
        row = []
        for b in backends:
            call(b)  # compile
            timer = timeit.Timer(lambda: call(b))
            number, _ = timer.autorange()
            row.append(min(timer.repeat(repeat, number)) / number * 1e6)
        speedup = f"{row[0] / row[1]:>9.1f}x" if len(row) == 2 else ""
        print(f"{name:<16}" + "".join(f"{t:>12.2f}" for t in row) + speedup)


def bench_pipeline(count: int, degree: int) -> None:
    print(f"\npipeline: analyze_all on {count} random polynomials up to degree {degree}")
    for label, flag in (("numpy", "1"), ("numba", "0")):
        env = dict(os.environ, PELLET_DISABLE_NUMBA=flag)
        code = PIPELINE.format(count=count, degree=degree)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        print(f"  {label:<6} {float(out.stdout):8.3f} s")


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--degree", type=int, default=30)
    parser.add_argument("--count", type=int, default=200, help="polynomials in the pipeline run")
    args = parser.parse_args(argv)
    bench_kernels(args.repeat, args.degree)
    bench_pipeline(args.count, args.degree)


if __name__ == "__main__":
    main()

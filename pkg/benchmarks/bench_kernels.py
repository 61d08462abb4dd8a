#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-Python fallback.

These two kernels sit inside the inverse model's objective function and
run once per particle per PSO iteration, which makes them the hot path of
the whole service. Run:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from acewgs._kernels import _py

try:
    from acewgs._kernels import _cy
except ImportError:
    _cy = None


def timed(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_xeq(n):
    rng = np.random.default_rng(1)
    k = np.exp(rng.uniform(3.0, 6.5, n))
    y_co = rng.uniform(0.01, 0.3, n)
    y_h2o = rng.uniform(0.05, 0.6, n)
    y_co2 = rng.uniform(0.0, 0.3, n)
    y_h2 = rng.uniform(0.0, 0.4, n)
    args = (k, y_co, y_h2o, y_co2, y_h2)
    rows = [("python", timed(_py.wgs_xeq_batch, *args))]
    if _cy is not None:
        rows.append(("compiled", timed(_cy.wgs_xeq_batch, *args)))
        a = _py.wgs_xeq_batch(*args)
        b = _cy.wgs_xeq_batch(*args)
        assert np.allclose(a, b, atol=5e-13)
    return rows


def bench_mlp(n, layout=(93, 32, 16, 1)):
    rng = np.random.default_rng(2)
    x = rng.standard_normal((n, layout[0]))
    weights = [rng.standard_normal((layout[i + 1], layout[i]))
               for i in range(len(layout) - 1)]
    biases = [rng.standard_normal(layout[i + 1]) for i in range(len(layout) - 1)]
    relu = [1] * (len(layout) - 2) + [0]
    args = (x, weights, biases, relu)
    rows = [("python", timed(_py.mlp_forward, *args))]
    if _cy is not None:
        rows.append(("compiled", timed(_cy.mlp_forward, *args)))
        a = _py.mlp_forward(*args)
        b = _cy.mlp_forward(*args)
        assert np.allclose(a, b, rtol=1e-10)
    return rows


def report(title, rows, n):
    print(f"\n{title} (batch of {n})")
    base = rows[0][1]
    for name, seconds in rows:
        speedup = base / seconds if seconds else float("inf")
        print(f"  {name:<9} {seconds * 1e3:9.3f} ms   "
              f"{n / seconds:12.0f} items/s   x{speedup:.1f}")


def main():
    if _cy is None:
        print("compiled kernels unavailable; benchmarking the fallback only")
    for n in (1_000, 100_000):
        report("wgs_xeq_batch: equilibrium-conversion bisection", bench_xeq(n), n)
    for n in (40, 10_000):
        report("mlp_forward: ensemble-member dense forward pass",
               bench_mlp(n), n)


if __name__ == "__main__":
    main()

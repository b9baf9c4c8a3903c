#!/usr/bin/env python3
"""Benchmark the pairwise-distance kernels: numba vs pure numpy.

Builds a representative distortion-scan lattice (tube region of a
two-hyperbolic-factor horosphere slice) and times the radius-edge pass that
dominates net construction, for both backends.

    python3 benchmarks/bench_pairwise.py [--n 20000] [--repeat 3]
"""

import argparse
import math
import time

import numpy as np

from horoslice import BoundaryDirection, Horosphere, HyperbolicPlane, ProductPoint, ProductSpace
from horoslice.experiments import DistortionConfig, default_scan_slice, scan_regions
from horoslice.nets import get_backend, sample_region


def build_lattice(n: int):
    h2 = HyperbolicPlane()
    isq2 = 1.0 / math.sqrt(2.0)
    space = ProductSpace([h2, h2])
    horo = Horosphere(space,
                      BoundaryDirection(np.array([isq2, isq2]),
                                        (math.inf, math.inf)),
                      ProductPoint((1j, 1j)))
    slc = default_scan_slice(horo)
    nodes = sample_region(slc, scan_regions(slc, DistortionConfig()), n, seed=7)
    return nodes


def time_backend(name: str, nodes, eps: float, repeat: int) -> tuple[float, int]:
    kern = get_backend(name)
    args = (nodes.coords, nodes.layout.kinds, nodes.layout.offs,
            nodes.layout.widths, eps)
    kern.radius_edges(*args)  # warm up (jit compile, caches)
    best = math.inf
    n_edges = 0
    for _ in range(repeat):
        t0 = time.perf_counter()
        ii, _, _ = kern.radius_edges(*args)
        best = min(best, time.perf_counter() - t0)
        n_edges = ii.size
    return best, n_edges


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    nodes = build_lattice(args.n)
    eps = 2.5 * nodes.spacing
    print(f"lattice: {nodes.n} nodes, {nodes.coords.shape[1]} packed columns, "
          f"eps = {eps:.4f}")
    pairs = nodes.n * (nodes.n - 1) // 2
    results = {}
    for name in ("numpy", "numba"):
        try:
            best, n_edges = time_backend(name, nodes, eps, args.repeat)
        except Exception as exc:  # numba may be unavailable
            print(f"{name:6s}: skipped ({exc})")
            continue
        results[name] = best
        print(f"{name:6s}: {best:8.3f} s  ({pairs / best / 1e6:8.1f} M pairs/s, "
              f"{n_edges} edges)")
    if len(results) == 2:
        print(f"speedup numba over numpy: {results['numpy'] / results['numba']:.1f}x")


if __name__ == "__main__":
    main()

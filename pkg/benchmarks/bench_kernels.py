"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from gossippower import _kernels_py
from gossippower.graph import best_constant_weights, generate_small_world

try:
    from gossippower import _kernels as compiled
except ImportError:
    compiled = None


def _cases():
    rng = np.random.default_rng(0)
    w = best_constant_weights(generate_small_world(10, 4, 0.2, 0))
    indptr, indices, data = w.csr
    Z = rng.standard_normal((10, 1500)) + 1j * rng.standard_normal((10, 1500))
    a = rng.standard_normal((32, 32)) + 1j * rng.standard_normal((32, 32))
    A = (a + a.conj().T) / 2
    G = rng.standard_normal((32, 24)) + 1j * rng.standard_normal((32, 24))
    return {
        "gossip_rounds 10x1500, K=200": lambda m: m.gossip_rounds(indptr, indices, data, Z, 200),
        "jacobi_eigh 32x32": lambda m: m.jacobi_eigh(A),
        "jacobi_svd 32x24": lambda m: m.jacobi_svd(G),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    impls = [("python", _kernels_py)] + ([("cython", compiled)] if compiled else [])
    if compiled is None:
        print("compiled extension not built; timing the fallback only")
    print(f"{'kernel':32s}" + "".join(f"{name:>12s}" for name, _ in impls) + ("     speedup" if compiled else ""))
    for label, fn in _cases().items():
        times = []
        for _, mod in impls:
            fn(mod)  # warm up
            n = 3
            best = min(timeit.repeat(lambda: fn(mod), number=n, repeat=args.repeat)) / n
            times.append(best)
        row = f"{label:32s}" + "".join(f"{t * 1e3:10.3f}ms" for t in times)
        if compiled:
            row += f"{times[0] / times[1]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()

"""Time the compiled and pure-Python homology kernels on a few fixed workloads.

    python benchmarks/bench_kernels.py --repeat 3
"""

import argparse
import time

import numpy as np

from ferrers import kernels
from ferrers.complex import build_bipartite_complex, build_shape_complex, specialize_labels
from ferrers.core import generators, specialize, validate_shape
from ferrers.oracle import _gen_array, _subset_lcm_keys
from ferrers.resolution import verify_resolution


def _cell_workload(n, m):
    rows, cols = build_bipartite_complex(n, m).face_arrays()
    return lambda backend: kernels.cell_betti(rows, cols, 2, backend)


def _simplicial_workload(k):
    masks = np.arange(1, 1 << k, dtype=np.int64)
    masks = masks[[bin(int(f)).count("1") <= k - 1 for f in masks]]
    masks = np.concatenate([[0], masks]).astype(np.int64)
    return lambda backend: kernels.simplicial_betti(masks, 32003, backend)


def _taylor_workload(lam, mu):
    ideal = specialize(generators(validate_shape(lam, mu)))
    _, keys, _ = _subset_lcm_keys(_gen_array(ideal))
    return lambda backend: kernels.taylor_betti(keys, 2, backend)


def _verify_workload(lam, mu):
    X = specialize_labels(build_shape_complex(validate_shape(lam, mu)))
    return lambda backend: verify_resolution(X, 2, backend=backend)


WORKLOADS = {
    "cell_betti product 6x6": lambda: _cell_workload(6, 6),
    "cell_betti product 4x5": lambda: _cell_workload(4, 5),
    "simplicial_betti sphere S^10": lambda: _simplicial_workload(12),
    "taylor_betti (6,6,6,6)/(1,3,4,5)": lambda: _taylor_workload((6, 6, 6, 6), (1, 3, 4, 5)),
    "verify (6,6,6,6)/(0,1,2,3)": lambda: _verify_workload((6, 6, 6, 6), (0, 1, 2, 3)),
}


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--only", help="substring filter on workload names")
    args = parser.parse_args(argv)

    backends = ["python"] + (["cython"] if kernels.COMPILED else [])
    if not kernels.COMPILED:
        print("compiled kernels unavailable; timing the Python backend only")
    print(f"{'workload':34s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    for name, make in WORKLOADS.items():
        if args.only and args.only not in name:
            continue
        work = make()
        results = [work(b) for b in backends]
        if any(r != results[0] for r in results):
            raise SystemExit(f"{name}: backends disagree")
        times = [best_time(lambda b=b: work(b), args.repeat) for b in backends]
        line = f"{name:34s}" + "".join(f"{t * 1000:10.1f}ms" for t in times)
        if len(times) == 2:
            line += f"{times[0] / times[1]:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()

"""Compare the compiled and numpy kernel backends on construction-sized inputs.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import importlib
import time

import numpy as np

from hsdp_caching import ConstructionParams, build_mapda, construct_hsdp
from hsdp_caching import _pykernels

CASES = [(4, (2, 2)), (4, (3, 3)), (8, (2, 3)), (8, (3, 3, 3))]


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    try:
        ck = importlib.import_module("hsdp_caching._ckernels")
    except ImportError:
        raise SystemExit("compiled extension not built; run pip install -e . first")
    backends = {"python": _pykernels, "cython": ck}

    print(f"{'case':<18}{'kernel':<16}{'python ms':>11}{'cython ms':>11}{'speedup':>9}")
    for L, dims in CASES:
        p = ConstructionParams(L, dims)
        h = construct_hsdp(p)
        v = h.v
        member = np.zeros(v, dtype=np.uint8)
        for blk in h.blocks:
            member[list(blk)] = 1
        blocks = [np.array(b, dtype=np.int64) for b in h.blocks]
        m = build_mapda(h)
        rows, cols, offsets = m.occurrences()
        label = f"L={L} m={','.join(map(str, dims))}"

        times = {}
        for name, mod in backends.items():
            times[name] = timeit(lambda: [mod.halfsum_counts(b, v, member) for b in blocks], args.repeat)
        print(f"{label:<18}{'halfsum_counts':<16}{1e3 * times['python']:>11.3f}{1e3 * times['cython']:>11.3f}"
              f"{times['python'] / times['cython']:>8.1f}x")

        for name, mod in backends.items():
            times[name] = timeit(lambda: mod.c4_row_counts(m.grid, rows, cols, offsets), args.repeat)
        print(f"{'  v=' + str(v):<18}{'c4_row_counts':<16}{1e3 * times['python']:>11.3f}{1e3 * times['cython']:>11.3f}"
              f"{times['python'] / times['cython']:>8.1f}x")


if __name__ == "__main__":
    main()

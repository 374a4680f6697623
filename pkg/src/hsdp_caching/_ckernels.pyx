# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the verification inner loops.

Signatures and return values match ``_pykernels`` exactly.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64
ctypedef cnp.int32_t i32
ctypedef cnp.uint8_t u8


def halfsum_counts(const i64[::1] block, i64 v, const u8[::1] member):
    cdef Py_ssize_t g = block.shape[0]
    cdef Py_ssize_t j, jp
    cdef i64 half = (v + 1) // 2
    cdef i64 s, c
    out = np.zeros(g, dtype=np.int64)
    cdef i64[::1] o = out
    for j in range(g):
        c = 0
        for jp in range(g):
            if jp == j:
                continue
            s = ((block[j] + block[jp]) % v) * half % v
            c += member[s]
        o[j] = c
    return out


def c4_row_counts(const i32[:, ::1] grid, const i64[::1] rows,
                  const i64[::1] cols, const i64[::1] offsets):
    cdef Py_ssize_t n_sym = offsets.shape[0] - 1
    cdef Py_ssize_t s, a, b
    cdef i64 lo, hi, f, c, best, best_row
    max_counts = np.zeros(n_sym, dtype=np.int64)
    worst_rows = np.full(n_sym, -1, dtype=np.int64)
    cdef i64[::1] mc = max_counts
    cdef i64[::1] wr = worst_rows
    for s in range(n_sym):
        lo = offsets[s]
        hi = offsets[s + 1]
        best = -1
        best_row = -1
        for a in range(lo, hi):
            f = rows[a]
            c = 0
            for b in range(lo, hi):
                if b > lo and cols[b] == cols[b - 1]:
                    continue
                if grid[f, cols[b]] >= 0:
                    c += 1
            if c > best:
                best = c
                best_row = f
        mc[s] = best if best > 0 else 0
        wr[s] = best_row
    return max_counts, worst_rows

"""Pure numpy implementations of the verification inner loops.

Used when the compiled ``_ckernels`` extension is unavailable, and as the
reference the compiled kernels are tested against.
"""
import numpy as np

# cap on gathered cells per vectorized chunk in c4_row_counts
_CHUNK_CELLS = 1 << 22


def halfsum_counts(block, v, member):
    """For each element d_j of ``block``, count j' != j with half(d_j, d_j') in ``member``."""
    block = np.asarray(block, dtype=np.int64)
    g = block.shape[0]
    half = (v + 1) // 2
    sums = (block[:, None] + block[None, :]) % v * half % v
    hits = np.asarray(member, dtype=bool)[sums]
    hits[np.arange(g), np.arange(g)] = False
    return hits.sum(axis=1).astype(np.int64)


def c4_row_counts(grid, rows, cols, offsets):
    """Per symbol, the largest number of non-star cells in one row of its subarray.

    ``rows``/``cols`` list the occurrences of every symbol, grouped by symbol
    and sorted by column inside a group; ``offsets`` delimits the groups.
    Returns ``(max_counts, worst_rows)`` where ``worst_rows`` holds the first
    row attaining the maximum (-1 for symbols with no occurrences).
    """
    grid = np.asarray(grid)
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    offsets = np.asarray(offsets, dtype=np.int64)
    n_sym = offsets.shape[0] - 1
    max_counts = np.zeros(n_sym, dtype=np.int64)
    worst_rows = np.full(n_sym, -1, dtype=np.int64)
    mult = np.diff(offsets)

    dup_col = np.zeros(cols.shape[0], dtype=bool)
    dup_col[1:] = cols[1:] == cols[:-1]
    dup_col[offsets[:-1][mult > 0]] = False
    if dup_col.any():
        # a symbol repeats inside a column; columns must be deduplicated per symbol
        for s in np.flatnonzero(mult):
            lo, hi = offsets[s], offsets[s + 1]
            ucols = np.unique(cols[lo:hi])
            counts = (grid[np.ix_(rows[lo:hi], ucols)] >= 0).sum(axis=1)
            a = int(np.argmax(counts))
            max_counts[s] = counts[a]
            worst_rows[s] = rows[lo + a]
        return max_counts, worst_rows

    for r in np.unique(mult[mult > 0]):
        syms = np.flatnonzero(mult == r)
        step = max(1, _CHUNK_CELLS // (r * r))
        for start in range(0, syms.shape[0], step):
            chunk = syms[start:start + step]
            idx = offsets[chunk][:, None] + np.arange(r)[None, :]
            R = rows[idx]
            C = cols[idx]
            counts = (grid[R[:, :, None], C[:, None, :]] >= 0).sum(axis=2)
            a = np.argmax(counts, axis=1)
            pick = np.arange(chunk.shape[0])
            max_counts[chunk] = counts[pick, a]
            worst_rows[chunk] = R[pick, a]
    return max_counts, worst_rows

"""Multiple-antenna placement delivery arrays.

A MAPDA is an F x K array whose cells are stars or symbols. Stars mark the
packets a user caches; the cells sharing a symbol form one zero-forcing
transmission. The four conditions checked by :func:`verify_mapda`:

* C1: every column has exactly Z stars;
* C2: every symbol of the alphabet occurs;
* C3: no symbol occurs twice in one column;
* C4: in the subarray spanned by the rows and columns containing a symbol,
  no row has more than L non-star cells.

Grids are stored densely as int32 label ids with -1 for a star.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .hsdp import Hsdp

log = logging.getLogger(__name__)

STAR = -1

__all__ = [
    "STAR",
    "Mapda",
    "MapdaReport",
    "SchemeParams",
    "build_mapda",
    "verify_mapda",
    "scheme_params",
    "drop_virtual_user",
    "render",
]


def _label_key(label):
    # pair labels (c, i) order block-major, matching build_mapda's ids
    if isinstance(label, tuple):
        return (1, label[::-1])
    return (0, (label,))


def _parse_label(raw):
    if isinstance(raw, (list, tuple)):
        return tuple(int(x) for x in raw)
    return int(raw)


def _format_label(label) -> str:
    if isinstance(label, tuple):
        return "(" + ",".join(str(x) for x in label) + ")"
    return str(label)


@dataclass
class Mapda:
    grid: np.ndarray
    labels: tuple
    antennas: int
    v: int | None = None
    _occ: tuple | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.grid = np.ascontiguousarray(self.grid, dtype=np.int32)
        if self.grid.ndim != 2:
            raise ValueError("grid must be two-dimensional")
        self.labels = tuple(self.labels)

    @property
    def F(self) -> int:
        return self.grid.shape[0]

    @property
    def K(self) -> int:
        return self.grid.shape[1]

    @property
    def S(self) -> int:
        return len(self.labels)

    @property
    def stars_per_column(self) -> np.ndarray:
        return (self.grid == STAR).sum(axis=0)

    @property
    def Z(self) -> int | None:
        """Common star count of the columns, or None if they differ."""
        spc = self.stars_per_column
        if spc.size == 0 or (spc == spc[0]).all():
            return int(spc[0]) if spc.size else 0
        return None

    def cell(self, f: int, k: int):
        x = int(self.grid[f, k])
        return "*" if x == STAR else self.labels[x]

    def label_id(self, label) -> int:
        return self.labels.index(label)

    def occurrences(self):
        """``(rows, cols, offsets)``: cells of each symbol, grouped by id, sorted by column."""
        if self._occ is None:
            flat = self.grid.ravel()
            idx = np.flatnonzero(flat != STAR)
            ids = flat[idx].astype(np.int64)
            rows = idx // self.K
            cols = idx % self.K
            # one int64 key sorts faster than lexsort; stable keeps row order on ties
            order = np.argsort(ids * max(self.K, 1) + cols, kind="stable")
            counts = np.bincount(ids, minlength=self.S)
            offsets = np.zeros(self.S + 1, dtype=np.int64)
            np.cumsum(counts, out=offsets[1:])
            self._occ = (np.ascontiguousarray(rows[order]), np.ascontiguousarray(cols[order]), offsets)
        return self._occ

    def cells_of(self, label) -> list:
        """(row, column) cells holding ``label``, sorted by column."""
        rows, cols, offsets = self.occurrences()
        s = self.label_id(label)
        lo, hi = offsets[s], offsets[s + 1]
        return [(int(f), int(k)) for f, k in zip(rows[lo:hi], cols[lo:hi])]

    def subarray(self, label):
        """The subarray induced by the rows and columns containing ``label``.

        Returns ``(rows, cols, cells)`` with sorted row/column indices.
        """
        occ = self.cells_of(label)
        rows = sorted({f for f, _ in occ})
        cols = sorted({k for _, k in occ})
        cells = [[self.cell(f, k) for k in cols] for f in rows]
        return rows, cols, cells

    @classmethod
    def from_cells(cls, cells, antennas: int, v: int | None = None, alphabet=None) -> Mapda:
        """Build from nested lists of ``"*"`` and labels (ints or tuples).

        Without an explicit ``alphabet``, integer labels are taken to range over
        [S] = {1..max} (or {0..max} when 0 occurs) so that unused integers show up
        as C2 failures; any other labels form the alphabet of distinct values.
        """
        parsed = [[None if c == "*" else _parse_label(c) for c in row] for row in cells]
        F = len(parsed)
        K = len(parsed[0]) if F else 0
        if any(len(row) != K for row in parsed):
            raise ValueError("ragged grid")
        present = {c for row in parsed for c in row if c is not None}
        if alphabet is None:
            if present and all(isinstance(c, int) for c in present):
                lo = 0 if min(present) == 0 else 1
                alphabet = list(range(lo, max(present) + 1))
            else:
                alphabet = sorted(present, key=_label_key)
        alphabet = tuple(alphabet)
        index = {lab: i for i, lab in enumerate(alphabet)}
        missing = present - set(index)
        if missing:
            raise ValueError(f"labels outside the alphabet: {sorted(missing, key=_label_key)[:5]}")
        grid = np.full((F, K), STAR, dtype=np.int32)
        for f, row in enumerate(parsed):
            for k, c in enumerate(row):
                if c is not None:
                    grid[f, k] = index[c]
        return cls(grid, alphabet, antennas, v)

    def to_cells(self) -> list:
        lab = [list(x) if isinstance(x, tuple) else x for x in self.labels]
        return [["*" if x == STAR else lab[x] for x in row] for row in self.grid.tolist()]

    def to_dict(self) -> dict:
        return {"L": self.antennas, "v": self.v, "grid": self.to_cells()}

    @classmethod
    def from_dict(cls, data: dict, antennas: int | None = None) -> Mapda:
        L = antennas if antennas is not None else int(data["L"])
        v = data.get("v")
        return cls.from_cells(data["grid"], L, None if v is None else int(v))

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str, antennas: int | None = None) -> Mapda:
        return cls.from_dict(json.loads(text), antennas)

    def render(self, rows=None, cols=None) -> str:
        return render(self, rows, cols)


def render(m: Mapda, rows=None, cols=None) -> str:
    """Text rendering with column headers on top and row labels on the right."""
    rows = list(range(m.F)) if rows is None else list(rows)
    cols = list(range(m.K)) if cols is None else list(cols)
    body = [[_format_label(c) if c != "*" else "*" for c in (m.cell(f, k) for k in cols)] for f in rows]
    width = max([len(str(k)) for k in cols] + [len(x) for row in body for x in row] + [1])
    header = "  " + " ".join(str(k).rjust(width) for k in cols)
    lines = [header]
    for f, row in zip(rows, body):
        lines.append("( " + " ".join(x.rjust(width) for x in row) + " )  " + str(f))
    return "\n".join(lines)


@dataclass(frozen=True)
class SchemeParams:
    antennas: int
    users: int
    subpacketization: int
    stars: int
    symbols: int

    @property
    def memory_ratio(self) -> Fraction:
        return Fraction(self.stars, self.subpacketization)

    @property
    def sum_dof(self) -> Fraction:
        return Fraction(self.users * (self.subpacketization - self.stars), self.symbols)

    def as_tuple(self) -> tuple:
        """(L, K, F, Z, S)"""
        return (self.antennas, self.users, self.subpacketization, self.stars, self.symbols)

    def to_dict(self) -> dict:
        return {
            "L": self.antennas, "K": self.users, "F": self.subpacketization,
            "Z": self.stars, "S": self.symbols,
            "memory_ratio": str(self.memory_ratio), "sum_dof": str(self.sum_dof),
        }


@dataclass
class MapdaReport:
    mapda: Mapda
    c1: bool
    c2: bool
    c3: bool
    c4: bool
    stars_per_column: np.ndarray
    missing_symbols: list
    column_repeats: list  # (label, column, count)
    c4_violations: list  # (label, row, count)
    max_row_counts: np.ndarray

    @property
    def passed(self) -> bool:
        return self.c1 and self.c2 and self.c3 and self.c4

    @property
    def params(self) -> tuple | None:
        """(L, K, F, Z, S) when C1 holds."""
        m = self.mapda
        if not self.c1:
            return None
        return (m.antennas, m.K, m.F, m.Z, m.S)

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        flags = " ".join(f"C{i}={'ok' if ok else 'FAIL'}"
                         for i, ok in enumerate((self.c1, self.c2, self.c3, self.c4), 1))
        p = self.params
        ptxt = f"(L,K,F,Z,S)=({','.join(map(str, p))})" if p else "(L,K,F,Z,S)=undefined"
        lines = [f"{verdict} MAPDA {ptxt} {flags}"]
        if self.missing_symbols:
            lines.append(f"  C2: {len(self.missing_symbols)} symbols never occur, e.g. "
                         f"{[_format_label(x) for x in self.missing_symbols[:5]]}")
        for lab, k, cnt in self.column_repeats[:5]:
            lines.append(f"  C3: symbol {_format_label(lab)} occurs {cnt} times in column {k}")
        for lab, f, cnt in self.c4_violations[:5]:
            lines.append(f"  C4: symbol {_format_label(lab)} row {f} has {cnt} > L={self.mapda.antennas} entries")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        fmt = _format_label
        return {
            "passed": self.passed,
            "C1": self.c1, "C2": self.c2, "C3": self.c3, "C4": self.c4,
            "params": list(self.params) if self.params else None,
            "missing_symbols": [fmt(x) for x in self.missing_symbols],
            "column_repeats": [[fmt(a), k, c] for a, k, c in self.column_repeats],
            "c4_violations": [[fmt(a), f, c] for a, f, c in self.c4_violations],
        }


def verify_mapda(m: Mapda) -> MapdaReport:
    """Check C1-C4 exhaustively; violations are returned as report data."""
    spc = m.stars_per_column
    c1 = bool(spc.size == 0 or (spc == spc[0]).all())

    rows, cols, offsets = m.occurrences()
    mult = np.diff(offsets)
    missing = [m.labels[s] for s in np.flatnonzero(mult == 0)]
    c2 = not missing

    ids = np.repeat(np.arange(m.S, dtype=np.int64), mult)
    key = ids * max(m.K, 1) + cols
    uniq, cnt = np.unique(key, return_counts=True)
    repeats = [(m.labels[int(u // m.K)], int(u % m.K), int(c)) for u, c in zip(uniq[cnt > 1], cnt[cnt > 1])]
    c3 = not repeats

    max_counts, worst_rows = kernels.c4_row_counts(m.grid, rows, cols, offsets)
    bad = np.flatnonzero(max_counts > m.antennas)
    c4_violations = [(m.labels[s], int(worst_rows[s]), int(max_counts[s])) for s in bad]
    c4 = not c4_violations

    return MapdaReport(m, c1, c2, c3, c4, spc, missing, repeats, c4_violations, max_counts)


def scheme_params(m: Mapda) -> SchemeParams:
    Z = m.Z
    if Z is None:
        raise ValueError("columns have different star counts (C1 fails)")
    return SchemeParams(m.antennas, m.K, m.F, Z, m.S)


def build_mapda(h: Hsdp) -> Mapda:
    """Lift an HSDP to a v x v array via the cyclic Latin square f + k.

    Cell (f, k) holds the symbol (f + k mod v, i) when k - f mod v lies in
    block i (1-based), and a star otherwise. Symbol (c, i) has id (i-1)*v + c.
    """
    v = h.v
    block_of = np.full(v, -1, dtype=np.int64)
    for i, blk in enumerate(h.blocks):
        block_of[list(blk)] = i
    ar = np.arange(v, dtype=np.int64)
    diff = (ar[None, :] - ar[:, None]) % v
    total = (ar[:, None] + ar[None, :]) % v
    bid = block_of[diff]
    grid = np.where(bid >= 0, bid * v + total, STAR).astype(np.int32)
    labels = tuple((c, i + 1) for i in range(h.b) for c in range(v))
    return Mapda(grid, labels, h.antennas, v)


def drop_virtual_user(m: Mapda, column: int = -1) -> Mapda:
    """Remove one user (the last column by default), recounting S.

    Symbols whose only occurrences were in the removed column disappear from
    the alphabet; this is logged since it changes S.
    """
    if m.K < 2:
        raise ValueError("need at least two users to drop one")
    col = column % m.K
    grid = np.delete(m.grid, col, axis=1)
    present = np.zeros(m.S, dtype=bool)
    present[grid[grid != STAR]] = True
    lost = [m.labels[s] for s in np.flatnonzero(~present)]
    if lost:
        log.warning("dropping column %d removes %d symbols entirely", col, len(lost))
    remap = np.full(m.S + 1, STAR, dtype=np.int64)
    keep = np.flatnonzero(present)
    remap[keep] = np.arange(keep.size)
    # index -1 (star) maps to the trailing STAR slot
    new_grid = remap[grid]
    labels = tuple(m.labels[s] for s in keep)
    return Mapda(new_grid, labels, m.antennas, m.v)

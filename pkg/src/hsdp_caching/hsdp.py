"""Half-sum disjoint packings over Z_v.

An L-HSDP is a family of pairwise disjoint g-subsets ("blocks") of Z_v,
v odd, such that for every element d of a block D, at most L - 1 of the
half-sums (d + d') / 2, d' in D \\ {d}, land in the union of all blocks.

The recursive construction here builds blocks as signed sums over a basis
of n + r integers; the last r basis elements (the tail) control how many
half-sums may hit the blocks.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DegenerateRecursion, ModulusTooSmall, ParameterError

__all__ = [
    "ResidueRing",
    "ConstructionParams",
    "Hsdp",
    "HsdpViolation",
    "HsdpReport",
    "half",
    "minimal_tail_length",
    "tail_is_sound",
    "recursive_f",
    "basis",
    "phi",
    "phi_closed_form",
    "construct_hsdp",
    "verify_hsdp",
]


@dataclass(frozen=True)
class ResidueRing:
    """Integers modulo an odd ``modulus`` >= 3."""

    modulus: int

    def __post_init__(self):
        v = self.modulus
        if not isinstance(v, (int, np.integer)) or v < 3 or v % 2 == 0:
            raise ParameterError(f"modulus must be an odd integer >= 3, got {v!r}")

    @property
    def inverse_of_two(self) -> int:
        return (self.modulus + 1) // 2

    def reduce(self, a: int) -> int:
        return int(a) % self.modulus

    def half(self, a: int, b: int) -> int:
        """The unique x with 2x = a + b (mod v)."""
        return (int(a) + int(b)) * self.inverse_of_two % self.modulus


def half(a: int, b: int, ring: ResidueRing) -> int:
    return ring.half(a, b)


def minimal_tail_length(antennas: int) -> int:
    """Smallest positive r with L <= 2**r."""
    if antennas < 1:
        raise ParameterError(f"antennas must be >= 1, got {antennas}")
    return max(1, (antennas - 1).bit_length())


def tail_is_sound(antennas: int, tail_length: int) -> bool:
    """Whether the tail length guarantees the L-half-sum bound.

    The intersection bound only covers 2**(r-1) < L <= 2**r; a longer tail
    still yields disjoint blocks but can break the half-sum condition.
    """
    return 2 ** (tail_length - 1) < antennas <= 2 ** tail_length


@dataclass(frozen=True)
class ConstructionParams:
    """Inputs of the recursive construction.

    ``tail_length`` defaults to the smallest r with L <= 2**r and ``modulus``
    to the smallest admissible value 2*phi + 1.
    """

    antennas: int
    block_dims: tuple
    tail_length: int | None = None
    modulus: int | None = None

    def __post_init__(self):
        dims = tuple(int(m) for m in self.block_dims)
        if not dims:
            raise ParameterError("block_dims must contain at least one entry")
        if any(m < 1 for m in dims):
            raise ParameterError(f"block dimensions must be positive, got {dims}")
        object.__setattr__(self, "block_dims", dims)
        if self.antennas < 1:
            raise ParameterError(f"antennas must be >= 1, got {self.antennas}")
        if self.tail_length is None:
            object.__setattr__(self, "tail_length", minimal_tail_length(self.antennas))
        r = self.tail_length
        if r < 1:
            raise ParameterError(f"tail length must be >= 1, got {r}")
        if self.antennas > 2 ** r:
            raise ParameterError(f"L={self.antennas} exceeds 2**r={2 ** r}")
        if self.modulus is None:
            object.__setattr__(self, "modulus", 2 * phi(self) + 1)

    @property
    def n(self) -> int:
        return len(self.block_dims)

    @property
    def g(self) -> int:
        return 2 ** (self.n + self.tail_length)

    @property
    def b(self) -> int:
        return int(np.prod(self.block_dims, dtype=object))


def recursive_f(params: ConstructionParams) -> tuple:
    """The recursive sequence f(1..n+r) the basis is derived from."""
    L, r, m = params.antennas, params.tail_length, params.block_dims
    n = len(m)
    if r == 1 and L != 2:
        raise DegenerateRecursion(
            f"with r=1 the last term contains (2 - L)*f(n+1) on both sides; L={L} "
            "leaves it unsolvable (use a longer tail)"
        )
    f = []
    running = 0
    for i in range(n):
        fi = m[0] if i == 0 else m[i] * (2 * running + 1)
        f.append(fi)
        running += fi
    # m_{n+1..n+r} = 1, so the (m+1)/m factor is 2 after the first tail step
    f_tail0 = (m[-1] + 1) * f[-1] // m[-1]
    if r == 1:
        f.append(f_tail0)
        return tuple(f)
    f.append(f_tail0)
    for _ in range(n + 1, n + r - 1):
        f.append(2 * f[-1])
    f.append(2 * f[-1] + (2 ** r - L) * f_tail0)
    return tuple(f)


def basis(params: ConstructionParams) -> tuple:
    """x_i = f(i) / m_i, with m_i = 1 on the tail."""
    f = recursive_f(params)
    dims = params.block_dims + (1,) * params.tail_length
    out = []
    for fi, mi in zip(f, dims):
        assert fi % mi == 0
        out.append(fi // mi)
    return tuple(out)


def phi(params: ConstructionParams) -> int:
    return sum(recursive_f(params))


def phi_closed_form(antennas: int, tail_length: int, block_dims) -> int:
    """Closed-form sum of the recursive sequence, evaluated independently of it."""
    L, r = antennas, tail_length
    m = [int(x) for x in block_dims]
    n = len(m)
    c = 2 ** (r + 1) - L
    # inner = sum_{i<=n-2} m_i * prod_{i<j<=n-1} (1 + 2 m_j) + m_{n-1}; zero when n = 1
    inner = 0
    if n >= 2:
        for i in range(n - 2):
            prod = 1
            for j in range(i + 1, n - 1):
                prod *= 1 + 2 * m[j]
            inner += m[i] * prod
        inner += m[n - 2]
    return (2 * c * (1 + m[-1]) - 1) * inner + c * (1 + m[-1]) - 1


@dataclass(frozen=True)
class Hsdp:
    """A candidate packing: blocks of residues mod v plus the antenna bound L.

    Elements are reduced mod v and sorted; block order is kept as given so
    block indices stay meaningful. No packing condition is enforced here,
    see :func:`verify_hsdp`.
    """

    ring: ResidueRing
    blocks: tuple
    antennas: int
    keys: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        v = self.ring.modulus
        blocks = tuple(tuple(sorted(int(d) % v for d in blk)) for blk in self.blocks)
        object.__setattr__(self, "blocks", blocks)

    @property
    def v(self) -> int:
        return self.ring.modulus

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def g(self) -> int:
        return len(self.blocks[0]) if self.blocks else 0

    def canonical(self) -> Hsdp:
        """Blocks sorted by smallest element, elements ascending."""
        blocks = sorted(self.blocks, key=lambda blk: (blk[0] if blk else -1, blk))
        return Hsdp(self.ring, tuple(blocks), self.antennas)

    def to_dict(self) -> dict:
        c = self.canonical()
        return {"v": self.v, "L": self.antennas, "blocks": [list(blk) for blk in c.blocks]}

    @classmethod
    def from_dict(cls, data: dict) -> Hsdp:
        return cls(ResidueRing(int(data["v"])), tuple(tuple(b) for b in data["blocks"]),
                   int(data["L"]))

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> Hsdp:
        return cls.from_dict(json.loads(text))


def construct_hsdp(params: ConstructionParams) -> Hsdp:
    """Build the blocks D_a = { sum_i alpha_i a_i x_i : alpha in {-1, 1}^(n+r) }.

    One block per a in [m_1] x ... x [m_n] (a_i = 1 on the tail), in
    lexicographic order of a. Arithmetic is over the integers and only the
    final values are reduced mod v.
    """
    bound = 2 * phi(params) + 1
    v = params.modulus
    if v < bound:
        raise ModulusTooSmall(f"v={v} is below 2*phi+1={bound}")
    ring = ResidueRing(v)
    x = np.array(basis(params), dtype=np.int64)
    n, r = params.n, params.tail_length
    signs = np.array(list(itertools.product((1, -1), repeat=n + r)), dtype=np.int64)
    blocks = []
    keys = []
    for a in itertools.product(*(range(1, m + 1) for m in params.block_dims)):
        coef = np.concatenate([np.asarray(a, dtype=np.int64), np.ones(r, dtype=np.int64)])
        values = signs @ (coef * x)
        blocks.append(tuple(values % v))
        keys.append(a)
    return Hsdp(ring, tuple(blocks), params.antennas, keys=tuple(keys))


@dataclass(frozen=True)
class HsdpViolation:
    kind: str  # "duplicate", "overlap", "size" or "half-sum"
    block: int
    element_index: int | None
    element: int | None
    colliding: tuple

    def describe(self) -> str:
        if self.kind == "half-sum":
            return (f"half-sum: block {self.block} element {self.element} (index "
                    f"{self.element_index}) hits {len(self.colliding)} block residues "
                    f"{list(self.colliding)}")
        if self.kind == "size":
            return f"size: block {self.block} has {self.colliding[0]} elements, expected {self.colliding[1]}"
        return f"{self.kind}: block {self.block} residues {list(self.colliding)}"


@dataclass
class HsdpReport:
    """Outcome of :func:`verify_hsdp`.

    ``counts[i][j]`` is |B_{i,j} intersected with the union of blocks| for the
    j-th (sorted) element of block i.
    """

    hsdp: Hsdp
    distinct: bool
    uniform: bool
    disjoint: bool
    counts: list
    max_count: int
    max_at: tuple | None
    violations: list

    @property
    def passed(self) -> bool:
        return (self.distinct and self.uniform and self.disjoint
                and self.max_count < self.hsdp.antennas)

    def half_sum_set(self, i: int, j: int) -> frozenset:
        """B_{i,j} as a set of residues."""
        blk = self.hsdp.blocks[i]
        ring = self.hsdp.ring
        d = blk[j]
        return frozenset(ring.half(d, e) for jp, e in enumerate(blk) if jp != j)

    def half_sum_sets(self):
        for i, blk in enumerate(self.hsdp.blocks):
            for j in range(len(blk)):
                yield (i, j), self.half_sum_set(i, j)

    def summary(self) -> str:
        h = self.hsdp
        verdict = "PASS" if self.passed else "FAIL"
        return (f"{verdict} HSDP L={h.antennas} v={h.v} g={h.g} b={h.b} "
                f"disjoint={self.disjoint} max|B∩D|={self.max_count}")

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "distinct": self.distinct,
            "uniform": self.uniform,
            "disjoint": self.disjoint,
            "max_count": self.max_count,
            "max_at": list(self.max_at) if self.max_at else None,
            "L": self.hsdp.antennas,
            "violations": [v.describe() for v in self.violations],
        }


def verify_hsdp(candidate: Hsdp) -> HsdpReport:
    """Exhaustively check block-disjointness and the L-half-sum condition."""
    v = candidate.v
    L = candidate.antennas
    violations = []

    distinct = True
    clean_blocks = []
    for i, blk in enumerate(candidate.blocks):
        arr = np.asarray(blk, dtype=np.int64)
        uniq, cnt = np.unique(arr, return_counts=True)
        if (cnt > 1).any():
            distinct = False
            violations.append(HsdpViolation("duplicate", i, None, None, tuple(int(x) for x in uniq[cnt > 1])))
        clean_blocks.append(uniq)

    sizes = [len(blk) for blk in candidate.blocks]
    uniform = len(set(sizes)) <= 1
    if not uniform:
        for i, s in enumerate(sizes):
            if s != sizes[0]:
                violations.append(HsdpViolation("size", i, None, None, (s, sizes[0])))

    owner = np.full(v, -1, dtype=np.int64)
    disjoint = True
    for i, uniq in enumerate(clean_blocks):
        clash = uniq[owner[uniq] >= 0]
        if clash.size:
            disjoint = False
            violations.append(HsdpViolation("overlap", i, None, None, tuple(int(x) for x in clash)))
        owner[uniq[owner[uniq] < 0]] = i
    member = (owner >= 0).astype(np.uint8)

    counts = []
    max_count = 0
    max_at = None
    for i, arr in enumerate(clean_blocks):
        # duplicates are already reported; B_{i,j} is a set, so count over distinct elements
        c = kernels.halfsum_counts(arr, v, member)
        counts.append([int(x) for x in c])
        if c.size:
            j = int(np.argmax(c))
            if max_at is None or c[j] > max_count:
                max_count, max_at = int(c[j]), (i, j)
        for j in np.flatnonzero(c >= L):
            d = int(arr[j])
            hits = sorted(int(x) for x in ((d + arr) % v * candidate.ring.inverse_of_two % v)
                          if member[x] and x != d)
            violations.append(HsdpViolation("half-sum", i, int(j), d, tuple(hits)))

    return HsdpReport(candidate, distinct, uniform, disjoint, counts, max_count, max_at, violations)

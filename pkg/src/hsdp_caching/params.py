"""Choosing block dimensions for the recursive construction.

For fixed v, n and r the sum-DoF is 2**(n+r) and the memory ratio is
1 - 2**(n+r) * prod(m) / v, so the design goal is the largest product of
block dimensions with 2*phi(m) + 1 <= v. Two routes are provided: the
closed-form choice m_1 = ... = m_{n-1} = q with a matched last dimension,
and an exhaustive search used as its oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NoFeasiblePoint, NonIntegralBlockDim, ParameterError
from .hsdp import ConstructionParams, minimal_tail_length, phi, phi_closed_form, tail_is_sound

__all__ = [
    "DesignPoint",
    "feasible",
    "suboptimal_point",
    "corollary_point",
    "search_best",
    "matching_closed_form",
    "closed_form_gap",
]


@dataclass(frozen=True)
class DesignPoint:
    antennas: int
    tail_length: int
    block_dims: tuple
    modulus: int
    source: str = "manual"

    @property
    def n(self) -> int:
        return len(self.block_dims)

    @property
    def g(self) -> int:
        return 2 ** (self.n + self.tail_length)

    @property
    def b(self) -> int:
        return math.prod(self.block_dims)

    @property
    def K(self) -> int:
        return self.modulus

    F = K

    @property
    def Z(self) -> int:
        return self.modulus - self.b * self.g

    @property
    def S(self) -> int:
        return self.b * self.modulus

    @property
    def memory_ratio(self) -> Fraction:
        return 1 - Fraction(self.b * self.g, self.modulus)

    @property
    def sum_dof(self) -> Fraction:
        return Fraction(self.g)

    def construction_params(self) -> ConstructionParams:
        return ConstructionParams(self.antennas, self.block_dims, self.tail_length, self.modulus)

    def to_dict(self) -> dict:
        return {
            "L": self.antennas, "r": self.tail_length, "n": self.n,
            "m": list(self.block_dims), "v": self.modulus,
            "K": self.K, "F": self.F, "Z": self.Z, "S": self.S,
            "g": self.g, "b": self.b,
            "memory_ratio": str(self.memory_ratio), "sum_dof": str(self.sum_dof),
            "source": self.source,
        }

    @classmethod
    def from_dict(cls, data: dict) -> DesignPoint:
        return cls(int(data["L"]), int(data["r"]), tuple(int(x) for x in data["m"]),
                   int(data["v"]), data.get("source", "file"))

    def summary(self) -> str:
        return f"v={self.modulus} g={self.g} b={self.b} M/N={self.memory_ratio}"


def feasible(L: int, r: int, m, v: int) -> bool:
    """True iff phi(m) <= (v - 1) / 2, i.e. v >= 2*phi + 1."""
    if v % 2 == 0:
        raise ParameterError(f"v must be odd, got {v}")
    p = phi(ConstructionParams(L, tuple(m), r, modulus=v))
    assert p == phi_closed_form(L, r, m)
    return 2 * p + 1 <= v


def _closed_form_dims(L: int, r: int, q: int, n: int) -> tuple:
    num = (2 ** (r + 2) - 2 * L - 1) * q
    den = 2 ** (r + 1) - L
    if num % den:
        raise NonIntegralBlockDim(
            f"last block dimension {num}/{den} is not an integer (L={L}, r={r}, q={q})")
    return (q,) * (n - 1) + (num // den,)


def suboptimal_point(L: int, q: int, n: int) -> DesignPoint:
    """Closed-form design: m_1..m_{n-1} = q, m_n = (2^(r+2)-2L-1) q / (2^(r+1)-L).

    r is the smallest positive integer with L <= 2**r, and
    v = (2^(r+2) - 2L - 1) (1 + 2q)^n.
    """
    if q < 1 or n < 1:
        raise ParameterError("q and n must be positive")
    r = minimal_tail_length(L)
    dims = _closed_form_dims(L, r, q, n)
    v = (2 ** (r + 2) - 2 * L - 1) * (1 + 2 * q) ** n
    point = DesignPoint(L, r, dims, v, source="closed-form")
    if not feasible(L, r, dims, v):
        raise AssertionError(f"closed-form point {point} violates v >= 2*phi+1")
    return point


def corollary_point(r: int, q: int, n: int) -> DesignPoint:
    """The L = 2**r case: v = (2^(r+1) - 1)(1 + 2q)^n, m_n = (2^(r+1)-1) q / 2^r."""
    if r < 1 or q < 1 or n < 1:
        raise ParameterError("r, q and n must be positive")
    L = 2 ** r
    num = (2 ** (r + 1) - 1) * q
    if num % L:
        raise NonIntegralBlockDim(f"last block dimension {num}/{L} is not an integer")
    dims = (q,) * (n - 1) + (num // L,)
    v = (2 ** (r + 1) - 1) * (1 + 2 * q) ** n
    return DesignPoint(L, r, dims, v, source="closed-form")


def search_best(v: int, L: int, n: int, r: int | None = None) -> DesignPoint:
    """Exhaustive maximisation of prod(m) subject to 2*phi(m) + 1 <= v.

    phi is strictly increasing in each m_i, so prefixes are enumerated in
    lexicographic order with cutoff, and for each prefix the last coordinate
    is the largest feasible value (found by bisection). Ties on the product go
    to the lexicographically smallest vector.
    """
    if v % 2 == 0 or v < 3:
        raise ParameterError(f"v must be an odd integer >= 3, got {v}")
    if n < 1:
        raise ParameterError("n must be positive")
    if r is None:
        r = minimal_tail_length(L)
    limit = (v - 1) // 2

    def ok(dims) -> bool:
        return phi_closed_form(L, r, dims) <= limit

    # validates (L, r) and raises DegenerateRecursion where applicable
    phi(ConstructionParams(L, (1,) * n, r, modulus=v))
    if not ok((1,) * n):
        raise NoFeasiblePoint(f"no feasible block dimensions for v={v}, L={L}, n={n}, r={r}")

    best = None
    best_prod = 0

    def last_max(prefix) -> int:
        lo, hi = 1, max(1, limit)
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if ok(prefix + (mid,)):
                lo = mid
            else:
                hi = mid - 1
        return lo

    def walk(prefix):
        nonlocal best, best_prod
        depth = len(prefix)
        if depth == n - 1:
            mn = last_max(prefix)
            dims = prefix + (mn,)
            p = math.prod(dims)
            if p > best_prod:
                best, best_prod = dims, p
            return
        m = 1
        while ok(prefix + (m,) + (1,) * (n - depth - 1)):
            walk(prefix + (m,))
            m += 1

    walk(())
    return DesignPoint(L, r, best, v, source="search")


def matching_closed_form(v: int, L: int, n: int):
    """The closed-form design with exactly this v, or None."""
    r = minimal_tail_length(L)
    lead = 2 ** (r + 2) - 2 * L - 1
    if lead <= 0 or v % lead:
        return None
    rest = v // lead
    base = round(rest ** (1.0 / n))
    for cand in (base - 1, base, base + 1):
        if cand >= 3 and cand ** n == rest and cand % 2 == 1:
            try:
                return suboptimal_point(L, (cand - 1) // 2, n)
            except NonIntegralBlockDim:
                return None
    return None


def closed_form_gap(point: DesignPoint):
    """prod(m) of ``point`` minus that of the closed-form design with the same v, n, r.

    None when no closed-form design has exactly this modulus.
    """
    cf = matching_closed_form(point.modulus, point.antennas, point.n)
    if cf is None or cf.tail_length != point.tail_length:
        return None
    return point.b - cf.b


def is_sound(point: DesignPoint) -> bool:
    return tail_is_sound(point.antennas, point.tail_length)

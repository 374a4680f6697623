"""Subpacketization and sum-DoF of the existing L-antenna schemes.

Every calculator takes (K, t, L) with memory ratio t/K and returns a
:class:`BaselineResult`; parameter sets outside a scheme's stated range are
reported as inapplicable together with the limitation they violate.
Subpacketizations are exact Python integers.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParameterError
from .hsdp import construct_hsdp, verify_hsdp
from .mapda import build_mapda, scheme_params, verify_mapda
from .params import DesignPoint

__all__ = [
    "BaselineResult",
    "ywcc1",
    "ywcc1_best",
    "ywcc2",
    "npr",
    "wcc",
    "ctwwl",
    "compare_sweep",
    "ctwwl_reduction_bound",
    "write_csv",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ["scheme", "K", "L", "t", "M_over_N", "F_exact", "F_float", "g", "applicable", "reason"]

# limitation shared by every scheme except YWCC 2
COMMON_LIMIT = "t in [K], t+L <= K"


@dataclass(frozen=True)
class BaselineResult:
    scheme: str
    K: int
    L: int
    t: int
    applicable: bool
    reason: str = ""
    F: int | None = None
    g: int | None = None

    @property
    def memory_ratio(self) -> Fraction:
        return Fraction(self.t, self.K)

    @property
    def F_float(self) -> float | None:
        return None if self.F is None else float(self.F)

    def row(self) -> dict:
        return {
            "scheme": self.scheme, "K": self.K, "L": self.L, "t": self.t,
            "M_over_N": str(self.memory_ratio),
            "F_exact": "" if self.F is None else str(self.F),
            "F_float": "" if self.F is None else f"{float(self.F):.6e}",
            "g": "" if self.g is None else self.g,
            "applicable": self.applicable,
            "reason": self.reason,
        }


def _common_ok(K, t, L):
    return 1 <= t <= K and t + L <= K


def _na(scheme, K, t, L, reason):
    return BaselineResult(scheme, K, t=t, L=L, applicable=False, reason=reason)


def ywcc1(K: int, t: int, L: int, m: int) -> BaselineResult:
    """YWCC 1: F = (t+L)/gcd(m, L-m) * C(K/m, t/m) for m < L; C(K/L, t/L) for m = L."""
    name = "YWCC1"
    if not _common_ok(K, t, L):
        return _na(name, K, t, L, COMMON_LIMIT)
    if m == L:
        if K % L or t % L:
            return _na(name, K, t, L, "K/L, t/L in Z+")
        F = math.comb(K // L, t // L)
    elif 1 <= m < L:
        if K % m or t % m:
            return _na(name, K, t, L, "K/m, t/m in Z+, m<L")
        F = (t + L) // math.gcd(m, L - m) * math.comb(K // m, t // m)
    else:
        return _na(name, K, t, L, "K/m, t/m in Z+, m<L")
    return BaselineResult(name, K, L, t, True, f"m={m}", F, t + L)


def ywcc1_best(K: int, t: int, L: int) -> BaselineResult:
    """Smallest YWCC 1 subpacketization over m = 1..L."""
    options = [ywcc1(K, t, L, m) for m in range(1, L + 1)]
    ok = [o for o in options if o.applicable]
    if not ok:
        return options[0]
    return min(ok, key=lambda o: o.F)


def ywcc2(K: int, t: int, L: int) -> BaselineResult:
    name = "YWCC2"
    if not (1 <= t <= K) or t + L < K:
        return _na(name, K, t, L, "t+L >= K")
    return BaselineResult(name, K, L, t, True, "", K, t + L)


def npr(K: int, t: int, L: int) -> BaselineResult:
    """NPR: F = (t+L)/beta * C(K/beta, (t+L)/beta), beta = gcd(K, t, L)."""
    name = "NPR"
    if not _common_ok(K, t, L):
        return _na(name, K, t, L, COMMON_LIMIT)
    beta = math.gcd(K, t, L)
    if K % beta or (t + L) % beta:
        return _na(name, K, t, L, "K/beta, (t+L)/beta in Z+")
    F = (t + L) // beta * math.comb(K // beta, (t + L) // beta)
    return BaselineResult(name, K, L, t, True, f"beta={beta}", F, t + L)


def wcc(K: int, t: int, L: int) -> BaselineResult:
    name = "WCC"
    if not _common_ok(K, t, L):
        return _na(name, K, t, L, COMMON_LIMIT)
    if (K - t) % 2:
        F, why = 2 * L * K, "2 does not divide K-t"
    elif K % L:
        F, why = L * K, "2 | K-t, L does not divide K"
    else:
        F, why = K, "2 | K-t, L | K"
    return BaselineResult(name, K, L, t, True, why, F, 2 * L)


def ctwwl(K: int, t: int, L: int) -> BaselineResult:
    """CTWWL: F = g K / beta^2 with g from the residue y = (t+L) mod (K-t+L)."""
    name = "CTWWL"
    if not _common_ok(K, t, L):
        return _na(name, K, t, L, COMMON_LIMIT)
    period = K - t + L
    x, y = divmod(t + L, period)
    if L <= y < 2 * L:
        g, why = 2 * L * x + y, "L <= <t+L>_{K-t+L} < 2L"
    elif y >= 2 * L:
        g, why = 2 * L * x + 2 * L, "2L <= <t+L>_{K-t+L}"
    else:
        return _na(name, K, t, L, "<t+L>_{K-t+L} < L matches no row")
    beta = math.gcd(K, t, L)
    F = g * K // (beta * beta)
    return BaselineResult(name, K, L, t, True, why, F, g)


def ctwwl_reduction_bound(K: int, t: int, L: int):
    """Lower bound on F_CTWWL / K for L = 2^r when beta = 1 and t+L >= K-t+L.

    Returns None when those preconditions fail. The bound is 2^(r+1) when the
    residue lies in [L, 2L) and 2^(r+2) when it is at least 2L.
    """
    if L & (L - 1) or math.gcd(K, t, L) != 1 or t + L < K - t + L:
        return None
    y = (t + L) % (K - t + L)
    if L <= y < 2 * L:
        return 2 * L
    if y >= 2 * L:
        return 4 * L
    return None


def _ours_row(point: DesignPoint) -> BaselineResult:
    h = construct_hsdp(point.construction_params())
    hr = verify_hsdp(h)
    if not hr.passed:
        raise AssertionError(f"design point {point} does not give a valid HSDP")
    m = build_mapda(h)
    mr = verify_mapda(m)
    if not mr.passed:
        raise AssertionError(f"design point {point} does not give a valid MAPDA")
    sp = scheme_params(m)
    if (sp.subpacketization, sp.stars, sp.memory_ratio, sp.sum_dof) != (
            point.F, point.Z, point.memory_ratio, point.sum_dof):
        raise AssertionError(f"pipeline parameters {sp} disagree with {point}")
    if sp.sum_dof.denominator != 1:
        raise AssertionError("non-integral sum-DoF")
    return BaselineResult("ours", sp.users, sp.antennas, sp.stars, True,
                          f"n={point.n} r={point.tail_length} m={','.join(map(str, point.block_dims))}",
                          sp.subpacketization, int(sp.sum_dof))


def baseline_rows(K: int, t: int, L: int) -> list:
    return [ywcc1_best(K, t, L), ywcc2(K, t, L), npr(K, t, L), wcc(K, t, L), ctwwl(K, t, L)]


def compare_sweep(K: int, L: int, points) -> list:
    """Rows comparing our design points (run end to end) with every baseline.

    ``points`` holds DesignPoints (which must have v = K) and/or plain
    integers t, for which only baseline rows are produced.
    """
    out = []
    for p in points:
        if isinstance(p, DesignPoint):
            if p.modulus != K or p.antennas != L:
                raise ParameterError(f"design point {p} does not match K={K}, L={L}")
            ours = _ours_row(p)
            out.append(ours)
            t = ours.t
        else:
            t = int(p)
        out.extend(baseline_rows(K, t, L))
    return out


def write_csv(rows, fh=None) -> str:
    buf = fh if fh is not None else io.StringIO()
    writer = csv.DictWriter(buf, CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(r.row())
    return buf.getvalue() if fh is None else ""

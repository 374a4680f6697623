"""Noiseless zero-forcing delivery driven by a MAPDA.

Each symbol of the array is one transmission interval. The cells holding
the symbol give the served users and the packet rows they miss; every packet
gets a precoder orthogonal to the channels of the served users that neither
want nor cache it, so after subtracting cached packets each user sees only
its own packet.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import DecodeFailure, RankDeficiency
from .mapda import STAR, Mapda, _format_label

__all__ = [
    "ChannelMatrix",
    "PlacementMap",
    "TransmissionInterval",
    "SimReport",
    "place",
    "nullspace",
    "zf_precoder",
    "simulate",
]

NULL_TOL = 1e-9
DECODE_TOL = 1e-6
INTERFERENCE_TOL = 1e-8
DEFAULT_SEED = 20251015


@dataclass(frozen=True)
class ChannelMatrix:
    """K x L complex channel gains; row k belongs to user k."""

    h: np.ndarray
    source: str = "file"

    @property
    def K(self) -> int:
        return self.h.shape[0]

    @property
    def L(self) -> int:
        return self.h.shape[1]

    @classmethod
    def random(cls, K: int, L: int, seed: int = DEFAULT_SEED) -> ChannelMatrix:
        rng = np.random.default_rng(seed)
        h = rng.standard_normal((K, L)) + 1j * rng.standard_normal((K, L))
        return cls(h, source=f"seed:{seed}")

    @classmethod
    def from_rows(cls, rows) -> ChannelMatrix:
        return cls(np.asarray(rows, dtype=complex), source="rows")

    @classmethod
    def load_csv(cls, path, L: int) -> ChannelMatrix:
        """Rows of either L real values or L (re, im) pairs flattened to 2L values."""
        rows = []
        with open(path, newline="") as fh:
            for rec in csv.reader(fh):
                vals = [float(x) for x in rec if x.strip()]
                if not vals:
                    continue
                if len(vals) == L:
                    rows.append([complex(x) for x in vals])
                elif len(vals) == 2 * L:
                    rows.append([complex(vals[2 * i], vals[2 * i + 1]) for i in range(L)])
                else:
                    raise ValueError(f"channel row has {len(vals)} values, expected {L} or {2 * L}")
        return cls(np.asarray(rows, dtype=complex), source=f"file:{Path(path).name}")


@dataclass(frozen=True)
class PlacementMap:
    """caches[k] = packet rows user k stores (of every file)."""

    caches: tuple

    def size(self, k: int) -> int:
        return len(self.caches[k])


def place(m: Mapda) -> PlacementMap:
    stars = m.grid == STAR
    return PlacementMap(tuple(frozenset(np.flatnonzero(stars[:, k]).tolist()) for k in range(m.K)))


def nullspace(rows, tol: float = NULL_TOL) -> np.ndarray:
    """Basis (as columns) of {x : A x = 0} by Gaussian elimination with partial pivoting.

    ``tol`` is relative to the largest entry magnitude. Basis vector j sets
    the j-th free variable to 1 and the other free variables to 0.
    """
    A = np.array(rows, dtype=complex, ndmin=2)
    m, L = A.shape
    if m == 0 or A.size == 0:
        return np.eye(L, dtype=complex)
    scale = np.abs(A).max()
    thresh = tol * scale if scale > 0 else 0.0
    pivots = []
    row = 0
    for col in range(L):
        if row == m:
            break
        p = row + int(np.argmax(np.abs(A[row:, col])))
        if abs(A[p, col]) <= thresh:
            A[row:, col] = 0
            continue
        A[[row, p]] = A[[p, row]]
        A[row] /= A[row, col]
        others = np.arange(m) != row
        A[others] -= np.outer(A[others, col], A[row])
        pivots.append(col)
        row += 1
    free = [c for c in range(L) if c not in pivots]
    basis = np.zeros((L, len(free)), dtype=complex)
    for j, fc in enumerate(free):
        basis[fc, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = -A[i, fc]
    return basis


def _normalize(vec: np.ndarray) -> np.ndarray:
    vec = vec / np.linalg.norm(vec)
    big = vec[int(np.argmax(np.abs(vec)))]
    return vec * (abs(big) / big)


def zf_precoder(H_rows, desired=None, L: int | None = None) -> np.ndarray:
    """Unit vector orthogonal to every row of ``H_rows`` (h . v = 0).

    With no rows the answer is the first standard basis vector. When the
    null space has more than one dimension and ``desired`` (the intended
    user's channel row) is given, the projection of conj(desired) onto the
    null space is used, which keeps the useful gain non-zero; otherwise the
    first null-space basis vector. The result is scaled so that its
    largest-magnitude component is real and positive.
    """
    A = np.asarray(H_rows, dtype=complex)
    if A.size == 0:
        if L is None:
            if desired is None:
                raise ValueError("antenna count unknown: pass L or desired")
            L = len(desired)
        A = np.zeros((0, L), dtype=complex)
    A = np.atleast_2d(A)
    L = A.shape[1]
    N = nullspace(A)
    if N.shape[1] == 0:
        raise RankDeficiency(f"{A.shape[0]} interfering rows leave no null space in C^{L}")
    if N.shape[1] > 1 and desired is not None:
        Q, _ = np.linalg.qr(N)
        proj = Q @ (Q.conj().T @ np.conj(np.asarray(desired, dtype=complex)))
        if np.linalg.norm(proj) > NULL_TOL * np.linalg.norm(desired):
            return _normalize(proj)
    return _normalize(N[:, 0])


@dataclass
class TransmissionInterval:
    symbol: object
    served: list  # (user k_j, packet row f_j)
    precoders: np.ndarray  # r_s x L
    nulled: list  # users each packet is zero-forced at
    decoded: list
    decode_errors: list
    nulling_residual: float
    leak: float

    @property
    def served_count(self) -> int:
        return len(self.served)

    def to_dict(self) -> dict:
        return {
            "symbol": _format_label(self.symbol),
            "served": [[int(k), int(f)] for k, f in self.served],
            "nulled": [[int(u) for u in us] for us in self.nulled],
            "precoders": [[[float(z.real), float(z.imag)] for z in row] for row in self.precoders],
            "decoded": list(map(bool, self.decoded)),
            "decode_errors": [float(e) for e in self.decode_errors],
            "nulling_residual": float(self.nulling_residual),
            "leak": float(self.leak),
        }


@dataclass
class SimReport:
    intervals: list
    user_decoded: list
    measured_sum_dof: Fraction
    max_nulling_residual: float
    max_decode_error: float
    max_leak: float
    expected_sum_dof: Fraction
    seed: int | None = None
    demands: list = field(default_factory=list)

    @property
    def success(self) -> bool:
        return all(self.user_decoded)

    def summary(self) -> str:
        S = len(self.intervals)
        served = sorted({iv.served_count for iv in self.intervals})
        served_txt = str(served[0]) if len(served) == 1 else f"{served[0]}..{served[-1]}"
        return (f"S={S} served/interval={served_txt} sum-DoF={self.measured_sum_dof} "
                f"max-residual={self.max_nulling_residual:.3e}")

    def to_dict(self) -> dict:
        return {
            "success": self.success,
            "S": len(self.intervals),
            "measured_sum_dof": str(self.measured_sum_dof),
            "expected_sum_dof": str(self.expected_sum_dof),
            "max_nulling_residual": self.max_nulling_residual,
            "max_decode_error": self.max_decode_error,
            "max_leak": self.max_leak,
            "seed": self.seed,
            "demands": list(self.demands),
            "user_decoded": list(map(bool, self.user_decoded)),
            "intervals": [iv.to_dict() for iv in self.intervals],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def simulate(m: Mapda, H: ChannelMatrix, demands=None, seed: int = DEFAULT_SEED,
             num_files: int | None = None) -> SimReport:
    """Run every transmission interval and decode at every served user.

    ``demands`` are 1-based file indices per user (default: user k wants file
    k). Payloads are random unit-magnitude complex scalars, one per
    (file, packet row), drawn from ``seed``.

    Raises RankDeficiency when a packet cannot be zero-forced and
    DecodeFailure when a served user's estimate misses by more than 1e-6
    (relative).
    """
    K, F, L = m.K, m.F, m.antennas
    if H.h.shape != (K, L):
        raise ValueError(f"channel is {H.h.shape}, expected {(K, L)}")
    N = K if num_files is None else num_files
    if demands is None:
        demands = [min(k, N) for k in range(1, K + 1)]
    demands = [int(d) for d in demands]
    if len(demands) != K or not all(1 <= d <= N for d in demands):
        raise ValueError(f"demands must be {K} file indices in [1, {N}]")

    rng = np.random.default_rng([seed, 1])
    payload = np.exp(2j * np.pi * rng.random((N, F)))
    h = H.h
    stars = m.grid == STAR

    rows, cols, offsets = m.occurrences()
    intervals = []
    user_ok = [True] * K
    total_served = 0
    max_res = max_err = max_leak = 0.0

    for s in range(m.S):
        lo, hi = offsets[s], offsets[s + 1]
        served = [(int(k), int(f)) for f, k in zip(rows[lo:hi], cols[lo:hi])]
        users = [k for k, _ in served]
        V = np.zeros((len(served), L), dtype=complex)
        nulled = []
        for j, (kj, fj) in enumerate(served):
            targets = [u for u in users if u != kj and not stars[fj, u]]
            nulled.append(targets)
            try:
                V[j] = zf_precoder(h[targets] if targets else np.zeros((0, L)), desired=h[kj], L=L)
            except RankDeficiency as exc:
                raise RankDeficiency(f"symbol {_format_label(m.labels[s])}, packet {j}: {exc}",
                                     symbol=m.labels[s], packet=j) from None

        w = np.array([payload[demands[kj] - 1, fj] for kj, fj in served])
        gains = h[users] @ V.T  # gains[a, j] = h_{users[a]} . v_j
        received = gains @ w

        res = 0.0
        for j, targets in enumerate(nulled):
            for u in targets:
                a = users.index(u)
                res = max(res, abs(gains[a, j]) / np.linalg.norm(h[u]))

        decoded, errors = [], []
        leak = 0.0
        for a, (ka, fa) in enumerate(served):
            y = received[a]
            for j, (kj, fj) in enumerate(served):
                if j == a:
                    continue
                if stars[fj, ka]:
                    y -= gains[a, j] * w[j]
                else:
                    leak = max(leak, abs(gains[a, j]))
            own = gains[a, a]
            if abs(own) == 0:
                est = np.inf
            else:
                est = y / own
            err = abs(est - w[a]) / abs(w[a])
            errors.append(float(err))
            ok = bool(err < DECODE_TOL)
            decoded.append(ok)
            if not ok:
                user_ok[ka] = False
        if leak >= INTERFERENCE_TOL or not all(decoded):
            raise DecodeFailure(
                f"symbol {_format_label(m.labels[s])}: max decode error {max(errors):.3e}, "
                f"uncancelled interference {leak:.3e}")

        total_served += len(served)
        max_res = max(max_res, res)
        max_err = max(max_err, max(errors) if errors else 0.0)
        max_leak = max(max_leak, leak)
        intervals.append(TransmissionInterval(m.labels[s], served, V, nulled, decoded,
                                              errors, res, leak))

    Z = m.Z
    expected = Fraction(K * (F - Z), m.S) if Z is not None and m.S else Fraction(0)
    measured = Fraction(total_served, m.S) if m.S else Fraction(0)
    return SimReport(intervals, user_ok, measured, max_res, max_err, max_leak, expected,
                     seed, demands)

from fractions import Fraction

import pytest

from hsdp_caching import (
    DegenerateRecursion,
    DesignPoint,
    NoFeasiblePoint,
    NonIntegralBlockDim,
    ParameterError,
    corollary_point,
    feasible,
    search_best,
    suboptimal_point,
)
from hsdp_caching.params import is_sound, matching_closed_form


def test_closed_form_l4():
    p = suboptimal_point(4, 4, 2)
    assert p.block_dims == (4, 7) and p.tail_length == 2
    assert (p.modulus, p.g, p.b, p.Z) == (567, 16, 28, 119)
    assert p.memory_ratio == Fraction(17, 81)
    # 1 - 2^r (2q/(1+2q))^n / (2^(r+1) - L)
    assert p.memory_ratio == 1 - Fraction(4) * Fraction(8, 9) ** 2 / 4
    assert p.summary() == "v=567 g=16 b=28 M/N=17/81"


def test_closed_form_l2():
    p = suboptimal_point(2, 2, 2)
    assert p.block_dims == (2, 3) and p.modulus == 75 and p.g == 8


def test_closed_form_non_power_of_two():
    # L=3, r=2: m_n = 9q/5
    with pytest.raises(NonIntegralBlockDim):
        suboptimal_point(3, 1, 1)
    p = suboptimal_point(3, 5, 1)
    assert p.block_dims == (9,) and p.modulus == 9 * 11
    assert feasible(3, 2, (9,), 99)


def test_power_of_two_point_matches_closed_form():
    for r, q, n in [(1, 2, 1), (2, 4, 2), (1, 4, 3)]:
        a = corollary_point(r, q, n)
        b = suboptimal_point(2 ** r, q, n)
        assert (a.block_dims, a.modulus) == (b.block_dims, b.modulus)
        assert a.memory_ratio == 1 - Fraction(2 * q, 1 + 2 * q) ** n
    with pytest.raises(NonIntegralBlockDim):
        corollary_point(2, 1, 1)


def test_search_beats_closed_form_at_567():
    best = search_best(567, 4, 2)
    assert best.b >= 28
    assert feasible(4, 2, best.block_dims, 567)


def test_search_is_maximal_small():
    # brute force over a box for a small modulus
    import itertools
    v, L, n = 151, 2, 2
    best = search_best(v, L, n)
    top = max(
        (a * b for a, b in itertools.product(range(1, 40), repeat=2)
         if feasible(L, 1, (a, b), v)),
    )
    assert best.b == top


def test_search_errors():
    with pytest.raises(NoFeasiblePoint):
        search_best(3, 2, 2, 1)
    with pytest.raises(ParameterError):
        search_best(100, 2, 1)
    with pytest.raises(DegenerateRecursion):
        search_best(101, 1, 1)


def test_feasible_requires_odd():
    with pytest.raises(ParameterError):
        feasible(2, 1, (1,), 10)


def test_design_point_dict_roundtrip():
    p = suboptimal_point(4, 4, 2)
    q = DesignPoint.from_dict(p.to_dict())
    assert (q.antennas, q.tail_length, q.block_dims, q.modulus) == (4, 2, (4, 7), 567)
    assert is_sound(q)


def test_matching_closed_form():
    assert matching_closed_form(567, 4, 2).block_dims == (4, 7)
    assert matching_closed_form(569, 4, 2) is None
    assert matching_closed_form(75, 2, 2).block_dims == (2, 3)


def _closed_form_points(vmax, nmax):
    from hsdp_caching.params import minimal_tail_length
    for L in range(2, vmax):
        r = minimal_tail_length(L)
        lead = 2 ** (r + 2) - 2 * L - 1
        for n in range(1, nmax + 1):
            q = 1
            while lead * (1 + 2 * q) ** n <= vmax:
                try:
                    yield suboptimal_point(L, q, n)
                except NonIntegralBlockDim:
                    pass
                q += 1


def test_search_dominates_closed_form_up_to_1200():
    from hsdp_caching.params import closed_form_gap
    count = 0
    for p in _closed_form_points(1200, 3):
        best = search_best(p.modulus, p.antennas, p.n)
        assert best.b >= p.b
        assert closed_form_gap(best) == best.b - p.b
        count += 1
    assert count > 50


def test_memory_ratio_identity():
    from hsdp_caching.params import minimal_tail_length
    for L in range(2, 17):
        r = minimal_tail_length(L)
        for q in range(1, 7):
            for n in range(1, 5):
                try:
                    p = suboptimal_point(L, q, n)
                except NonIntegralBlockDim:
                    continue
                want = 1 - Fraction(2 ** r) * Fraction(2 * q, 1 + 2 * q) ** n / (2 ** (r + 1) - L)
                assert p.memory_ratio == want


def test_emitted_points_are_end_to_end_valid():
    from hsdp_caching import build_mapda, construct_hsdp, scheme_params, verify_hsdp, verify_mapda
    pts = [suboptimal_point(2, 2, 2), suboptimal_point(3, 5, 1), suboptimal_point(4, 4, 2),
           corollary_point(1, 2, 2), search_best(115, 4, 2), search_best(201, 3, 2),
           search_best(99, 2, 3)]
    for p in pts:
        h = construct_hsdp(p.construction_params())
        m = build_mapda(h)
        assert verify_hsdp(h).passed and verify_mapda(m).passed
        sp = scheme_params(m)
        assert sp.memory_ratio == p.memory_ratio and sp.sum_dof == p.sum_dof


def test_search_monotone_in_v():
    prev = 0
    for v in range(125, 401, 2):
        b = search_best(v, 4, 2).b
        assert b >= prev
        prev = b


def test_worked_examples():
    assert feasible(4, 2, (2, 2), 115) and not feasible(4, 2, (2, 2), 113)
    assert feasible(8, 3, (1, 1, 1), 10 ** 9 + 1)
    assert search_best(115, 4, 2, 2).b >= 4
    with pytest.raises(NonIntegralBlockDim):
        suboptimal_point(4, 1, 2)
    assert corollary_point(1, 2, 2).memory_ratio == Fraction(9, 25)

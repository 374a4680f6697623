import csv
import io
import math
from fractions import Fraction

from hsdp_caching import compare_sweep, ctwwl, npr, suboptimal_point, wcc, write_csv, ywcc1, ywcc1_best, ywcc2
from hsdp_caching.baselines import CSV_COLUMNS, ctwwl_reduction_bound


def test_ywcc1():
    r = ywcc1(11, 3, 2, 1)
    assert (r.F, r.g) == (825, 5)
    r = ywcc1(115, 51, 4, 1)
    assert r.g == 55 and r.F == 55 * math.comb(115, 51)
    assert 8.0 <= r.F / 1e34 <= 8.3
    assert not ywcc1(11, 3, 2, 2).applicable  # 11/2 not integral
    assert ywcc1(12, 4, 2, 2).F == math.comb(6, 2)


def test_ywcc1_best_picks_smallest():
    best = ywcc1_best(12, 4, 2)
    assert best.F == min(ywcc1(12, 4, 2, m).F for m in (1, 2))


def test_ywcc2_range():
    assert ywcc2(10, 8, 2).F == 10
    assert not ywcc2(10, 3, 2).applicable


def test_npr():
    r = npr(11, 3, 2)
    assert r.F == 5 * math.comb(11, 5) and r.g == 5


def test_wcc_rows():
    assert wcc(11, 3, 2).F == 22          # K - t even, L does not divide K
    assert wcc(11, 4, 2).F == 2 * 2 * 11  # K - t odd
    assert wcc(12, 4, 2).F == 12
    assert wcc(11, 3, 2).g == 4


def test_ctwwl():
    assert (ctwwl(11, 3, 2).F, ctwwl(11, 3, 2).g) == (44, 4)
    r = ctwwl(115, 51, 4)
    assert r.g == 8 and r.F == 920  # table formula; the worked example prints 960
    # residue below L has no matching row
    assert not ctwwl(12, 9, 2).applicable


def test_common_limitation():
    for fn in (npr, wcc, ctwwl):
        assert not fn(10, 9, 2).applicable


def test_reduction_bound_holds():
    # the bound assumes 2t >= K, which the closed form only reaches for larger n
    for r_, q, n in [(1, 2, 4), (1, 2, 6), (2, 4, 6), (2, 4, 8)]:
        p = suboptimal_point(2 ** r_, q, n)
        K, t, L = p.modulus, p.Z, p.antennas
        bound = ctwwl_reduction_bound(K, t, L)
        c = ctwwl(K, t, L)
        assert 2 * t >= K and bound is not None and c.applicable
        assert c.F // K >= bound >= 2 ** (r_ + 1)


def test_sweep_csv():
    p = suboptimal_point(2, 2, 2)
    rows = compare_sweep(75, 2, [p, 30])
    ours = rows[0]
    assert ours.scheme == "ours" and ours.F == 75 and ours.g == 8
    assert ours.memory_ratio == p.memory_ratio == Fraction(75 - 48, 75)
    text = write_csv(rows)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert list(parsed[0]) == CSV_COLUMNS
    assert parsed[0]["M_over_N"] == "9/25"
    assert len(parsed) == 1 + 5 + 5
    assert {r["scheme"] for r in parsed} == {"ours", "YWCC1", "YWCC2", "NPR", "WCC", "CTWWL"}


def test_reduction_bound_preconditions():
    p = suboptimal_point(4, 4, 2)
    assert ctwwl_reduction_bound(p.modulus, p.Z, 4) is None  # 2t < K
    assert ctwwl_reduction_bound(100, 60, 3) is None  # L not a power of two


def test_table_examples():
    assert (ywcc2(10, 6, 4).F, ywcc2(10, 6, 4).g) == (10, 10)
    assert (ywcc2(4, 1, 3).F, ywcc2(4, 1, 3).g) == (4, 4)
    r = npr(12, 4, 4)
    assert (r.F, r.g) == (6, 8)
    r = npr(115, 51, 4)
    assert r.F == 55 * math.comb(115, 55) and r.g == 55
    assert (wcc(75, 27, 2).F, wcc(75, 27, 2).g) == (150, 4)
    assert wcc(75, 28, 2).F == 2 * 2 * 75
    assert not ywcc1(11, 3, 2, 2).applicable


def test_sweep_k11_reproduces_worked_comparison():
    from hsdp_caching import search_best
    rows = compare_sweep(11, 2, [search_best(11, 2, 1)])
    by = {r.scheme: r for r in rows}
    assert (by["ours"].t, by["ours"].F, by["ours"].g) == (3, 11, 4)
    assert (by["YWCC1"].F, by["YWCC1"].g) == (825, 5)
    assert (by["CTWWL"].F, by["CTWWL"].g) == (44, 4)


def test_sweep_k85_and_ratio_bounds():
    from hsdp_caching.cli import default_points
    for K, L in [(85, 2), (567, 4), (1875, 2)]:
        pts = default_points(K, L)
        rows = compare_sweep(K, L, pts)
        ours = [r for r in rows if r.scheme == "ours"]
        assert len(ours) == len(pts) and all(r.F == K for r in ours)
        for r in ours:
            bound = ctwwl_reduction_bound(K, r.t, L)
            c = ctwwl(K, r.t, L)
            if bound is not None and c.applicable:
                assert c.F // r.F >= bound

import numpy as np
import pytest

from hsdp_caching import (
    STAR,
    Hsdp,
    Mapda,
    build_mapda,
    drop_virtual_user,
    load_fixture,
    scheme_params,
    verify_mapda,
)
from hsdp_caching.hsdp import ResidueRing

P11 = [
    ["*", (1, 1), "*", (8, 2)],
    [(1, 1), "*", (8, 2), "*"],
    ["*", (5, 2), "*", (1, 1)],
    [(5, 2), "*", (1, 1), "*"],
]


@pytest.fixture
def ex3():
    return build_mapda(Hsdp.from_dict(load_fixture("example2_hsdp")))


def test_example1_parameters(backend):
    m = Mapda.from_dict(load_fixture("example1"))
    rep = verify_mapda(m)
    assert rep.passed
    assert rep.params == (3, 4, 4, 1, 3)
    assert scheme_params(m).sum_dof == 4


def test_example1_with_two_antennas_fails_c4(backend):
    m = Mapda.from_dict(load_fixture("example1"), antennas=2)
    rep = verify_mapda(m)
    assert rep.c1 and rep.c2 and rep.c3 and not rep.c4
    assert {lab for lab, _, cnt in rep.c4_violations} == {1, 2, 3}


def test_example3_lift(ex3, backend):
    rep = verify_mapda(ex3)
    assert rep.passed
    assert scheme_params(ex3).as_tuple() == (2, 11, 11, 3, 22)
    rows, cols, cells = ex3.subarray((1, 1))
    assert rows == [0, 1, 4, 5] and cols == [0, 1, 7, 8]
    assert cells == P11


def test_example3_fixture_matches_lift(ex3):
    m = Mapda.from_dict(load_fixture("example3_mapda"))
    assert np.array_equal(m.grid, ex3.grid) and m.labels == ex3.labels


def test_example3_q_violates_c4(backend):
    q = Mapda.from_dict(load_fixture("example3_Q"))
    rep = verify_mapda(q)
    assert rep.c1 and rep.c2 and rep.c3 and not rep.c4
    assert all(cnt > 2 for _, _, cnt in rep.c4_violations)
    # printed Q^(1): rows 0,1,2,3,4,5,7,9 and columns 0,1,3,5,7,8,9,10
    rows, cols, _ = q.subarray(1)
    assert rows == [0, 1, 2, 3, 4, 5, 7, 9]
    assert cols == [0, 1, 3, 5, 7, 8, 9, 10]


def test_stars_follow_orbits(ex3):
    D = {1, 2, 4, 10, 5, 6, 8, 9}
    for f in range(11):
        for k in range(11):
            assert (ex3.cell(f, k) == "*") == ((k - f) % 11 not in D)


def test_c1_c2_c3_detection(backend):
    m = Mapda.from_cells([["*", 1], [1, 1], [2, "*"]], 2)
    rep = verify_mapda(m)
    assert rep.c1
    assert not rep.c3 and rep.column_repeats[0][:2] == (1, 1)
    m = Mapda.from_cells([["*", 1], [1, "*"], [3, "*"]], 2)
    rep = verify_mapda(m)
    assert not rep.c1 and not rep.c2 and rep.missing_symbols == [2]
    assert rep.params is None
    with pytest.raises(ValueError):
        scheme_params(m)


def test_json_roundtrip(ex3):
    back = Mapda.from_json(ex3.to_json())
    assert np.array_equal(back.grid, ex3.grid)
    assert back.labels == ex3.labels and back.v == 11


def test_render_layout():
    m = Mapda.from_dict(load_fixture("example1"))
    lines = m.render().splitlines()
    assert lines[0].split() == ["0", "1", "2", "3"]
    assert lines[1].startswith("(") and lines[1].endswith("0")
    assert lines[1].split()[1:5] == ["*", "1", "2", "3"]


def test_drop_virtual_user(ex3):
    m = drop_virtual_user(ex3)
    assert m.K == 10 and m.F == 11
    rep = verify_mapda(m)
    assert rep.c2 and rep.c3 and rep.c4
    assert (m.grid != STAR).sum() == (ex3.grid != STAR).sum() - 8


def test_lift_needs_two_antennas(ex3, backend):
    rep = verify_mapda(Mapda(ex3.grid, ex3.labels, 1, 11))
    assert rep.c1 and rep.c2 and rep.c3 and not rep.c4
    assert int(rep.max_row_counts.max()) == 2


def test_empty_hsdp_lifts_to_all_stars():
    m = build_mapda(Hsdp(ResidueRing(7), (), 2))
    assert m.S == 0 and m.Z == 7 and (m.grid == STAR).all()
    rep = verify_mapda(m)
    assert rep.passed and rep.params == (2, 7, 7, 7, 0)


def test_drop_virtual_user_examples(ex3):
    m = drop_virtual_user(ex3)
    assert verify_mapda(m).passed
    assert scheme_params(m).as_tuple() == (2, 10, 11, 3, 22)
    e1 = drop_virtual_user(Mapda.from_dict(load_fixture("example1")))
    assert verify_mapda(e1).passed
    assert scheme_params(e1).as_tuple() == (3, 3, 4, 1, 3)
    with pytest.raises(ValueError):
        drop_virtual_user(Mapda.from_cells([["*"], [1]], 1))


def test_scheme_params_examples(ex3):
    from fractions import Fraction
    sp = scheme_params(ex3)
    assert sp.memory_ratio == Fraction(3, 11) and sp.sum_dof == 4
    m4 = build_mapda(Hsdp.from_dict(load_fixture("example4_hsdp")))
    sp = scheme_params(m4)
    assert sp.as_tuple() == (4, 115, 115, 51, 460)
    assert sp.memory_ratio == Fraction(51, 115) and sp.sum_dof == 16

import csv
from dataclasses import replace

import pytest

from pointed_coalgebras.core import Dyadic, ONE, OutOfCarrierError, ZERO
from pointed_coalgebras.experiments import (
    APEX,
    INTERVAL_E,
    TrianglePoint,
    discontinuity_witness_bip,
    discontinuity_witness_trip,
    edge_reference,
    f_reference,
    interval_e,
    interval_e_branches,
    interval_families,
    iterated_value,
    lipschitz_table,
    sample_points,
    triangle_e_branches,
    triangle_g_claims,
    verify_claims_ab,
    write_claims_csv,
    write_lipschitz_csv,
)


def test_interval_e_branches():
    assert interval_e(Dyadic(3, 3)) == ("l", Dyadic(1, 1))
    assert interval_e(Dyadic(1, 1)) == ("l", ONE)
    assert interval_e_branches(Dyadic(1, 1)) == [("l", ONE), ("r", ZERO)]
    assert interval_e_branches(Dyadic(1, 2)) == [("l", ZERO)]
    assert interval_e_branches(Dyadic(3, 2)) == [("r", ONE)]
    assert interval_e(Dyadic(7, 3)) == ("r", ONE)
    with pytest.raises(OutOfCarrierError):
        interval_e(Dyadic(-1, 2))


def test_triangle_e_branches():
    assert triangle_e_branches(APEX) == [("a", APEX)]
    assert triangle_e_branches(TrianglePoint(Dyadic(1, 1))) == [
        ("b", TrianglePoint(ONE)),
        ("c", TrianglePoint(ZERO)),
    ]
    assert str(TrianglePoint(Dyadic(3, 3))) == "3/2^3,0"


@pytest.mark.parametrize(
    "x,want",
    [
        (ZERO, ZERO),
        (Dyadic(1, 2), ZERO),
        (Dyadic(5, 4), ZERO),
        (Dyadic(3, 3), Dyadic(1, 2)),
        (Dyadic(7, 4), Dyadic(1, 1)),
        (Dyadic(1, 1), Dyadic(1, 1)),
        (Dyadic(3, 2), ONE),
        (ONE, ONE),
    ],
)
def test_f_reference_values(x, want):
    assert f_reference(x) == want
    assert iterated_value(INTERVAL_E, x) == want


def test_f_reference_rejects_points_outside():
    with pytest.raises(OutOfCarrierError):
        f_reference(Dyadic(5, 2))
    with pytest.raises(OutOfCarrierError):
        edge_reference(APEX)


def test_interval_families():
    fam = interval_families(1)
    assert (fam.i_lo, fam.i_hi) == (Dyadic(1, 2), Dyadic(1, 2))
    assert (fam.j_lo, fam.j_hi) == (Dyadic(7, 4), Dyadic(1, 1))
    fam = interval_families(2)
    assert fam.i_hi == Dyadic(5, 4)
    for n in range(1, 12):
        fam = interval_families(n)
        assert fam.i_lo == Dyadic(1, 2)
        assert fam.j_hi <= Dyadic(1, 1)


def test_sample_points_include_endpoints():
    pts = sample_points(Dyadic(1, 2), Dyadic(5, 4), 8)
    assert pts[0] == Dyadic(1, 2)
    assert pts[-1] == Dyadic(5, 4)
    assert pts == sorted(set(pts))
    assert sample_points(Dyadic(1, 2), Dyadic(1, 2), 8) == [Dyadic(1, 2)]


@pytest.mark.parametrize("samples", [1, 2, 3, 7, 8, 15])
def test_sample_points_count_interior_separately(samples):
    fam = interval_families(3)
    pts = sample_points(fam.j_lo, fam.j_hi, samples)
    interior = [x for x in pts if fam.j_lo < x < fam.j_hi]
    assert len(interior) == samples
    assert len(pts) == samples + 2
    assert pts == sorted(set(pts))


def test_sample_points_sit_on_a_dyadic_grid():
    fam = interval_families(3)
    width = fam.j_hi - fam.j_lo
    pts = sample_points(fam.j_lo, fam.j_hi, 8)
    assert [(x - fam.j_lo).ratio(width) * 16 for x in pts] == [0, 1, 3, 5, 7, 8, 10, 12, 14, 16]


def test_claims_hold_for_both_routes():
    report = verify_claims_ab(4, 4)
    assert report.ok
    assert report.first_failure is None
    by_family = {(s.family, s.n): s.expected for s in report.samples}
    assert by_family[("I", 2)] == ZERO
    assert by_family[("J", 1)] == Dyadic(1, 1)
    assert by_family[("J", 3)] == Dyadic(1, 3)


def test_claims_detect_a_corrupted_branch():
    def corrupted(x):
        return [("r", y) if m == "l" and y != ZERO else (m, y) for m, y in interval_e_branches(x)]

    bad = replace(INTERVAL_E, name="corrupted", branches=corrupted)
    report = verify_claims_ab(2, 2, coalgebra=bad)
    assert not report.ok
    assert report.first_failure is not None


def test_claims_reject_large_nmax():
    with pytest.raises(ValueError):
        verify_claims_ab(13, 2)


def test_lipschitz_table_rows():
    rows = lipschitz_table(5)
    assert [r.ratio for r in rows] == [4, 8, 16, 32, 64]
    first = rows[0]
    assert (first.x, first.y) == (Dyadic(5, 4), Dyadic(7, 4))
    assert (first.fx, first.fy) == (ZERO, Dyadic(1, 1))
    assert all(r.ok for r in rows)


def test_triangle_claims_match_interval_claims():
    report = triangle_g_claims(3, 3)
    assert report.ok
    assert [r.ratio for r in report.lipschitz] == [r.ratio for r in lipschitz_table(3)]
    assert edge_reference(TrianglePoint(Dyadic(7, 4))) == Dyadic(1, 1)


def test_discontinuity_witnesses():
    w = discontinuity_witness_bip(3)
    assert w.inputs == (".T", "rrr.B")
    assert w.input_distance == Dyadic(1, 3)
    assert w.images == ("1", "0")
    assert w.image_distance == ONE
    t = discontinuity_witness_trip(2)
    assert t.inputs == ("aaa.T", "aaa.L")
    assert t.input_distance == Dyadic(1, 3)
    assert t.images == ("T", "L")
    assert t.image_distance == ONE


def test_csv_writers(tmp_path):
    claims = verify_claims_ab(1, 2)
    path = tmp_path / "out" / "claims.csv"
    write_claims_csv(path, claims)
    with path.open(encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][:5] == ["n", "x_num", "x_exp", "f_num", "f_exp"]
    assert len(rows) == 1 + len(claims.samples)

    lip = tmp_path / "lip.csv"
    write_lipschitz_csv(lip, lipschitz_table(3))
    with lip.open(encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert rows == [["n", "ratio_num", "ratio_exp"], ["1", "4", "0"], ["2", "8", "0"], ["3", "16", "0"]]


def test_claims_sample_endpoints_and_interior():
    report = verify_claims_ab(2, 3)
    # I_1 is the single point 1/4; every other interval gives 2 endpoints + 3 interior
    assert len(report.samples) == 1 + 5 + 5 + 5
    assert sum(1 for s in report.samples if (s.family, s.n) == ("J", 1)) == 5


def test_discontinuity_witnesses_share_a_lower_bound():
    for witness in (discontinuity_witness_bip, discontinuity_witness_trip):
        with pytest.raises(ValueError):
            witness(0)
    assert discontinuity_witness_trip(1).inputs == ("aa.T", "aa.L")

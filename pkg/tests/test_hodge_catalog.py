import math

import pytest

from torushodge.hodge_catalog import (
    KT4_B_MINUS,
    HodgeResult,
    cyclic3_h01_report,
    kt4_h11_bc,
    kt4_h11_d,
    kt4_h11_dbar,
    kt4_h12_bc,
    kt4_h21_bc,
    lattice_circle_count,
    metric_invariance_table,
)

B_8PI = 8 * math.pi


def test_lattice_circle_counts():
    assert lattice_circle_count(1, 1, sign=+1) == [(-2, 0), (-1, -1), (-1, 1)]
    assert lattice_circle_count(1, 0.5, sign=+1) == [(-2, 0)]
    assert lattice_circle_count(1, 1, sign=-1) == [(1, -1), (1, 1), (2, 0)]
    with pytest.raises(ValueError):
        lattice_circle_count(1, 0)


def test_kt4_h21_and_h12_headline_values():
    assert kt4_h21_bc(B_8PI, 1.0).value == 4
    assert kt4_h21_bc(B_8PI, 0.5).value == 2
    assert kt4_h12_bc(B_8PI, 1.0).value == 4
    assert kt4_h12_bc(B_8PI, 0.5).value == 2


def test_kt4_h21_stokes_positive_control():
    b_star = math.sqrt(8 * math.pi * (4 + math.sqrt(17)))
    res = kt4_h21_bc(b_star, 1.0, n_max=5)
    stokes = [c for c in res.contributions if c[0].startswith("infinite-orbit")]
    assert stokes == [("infinite-orbit modes n=1 (u=-1)", 1)]
    assert res.notes  # the asserted-multiplicity caveat is recorded


def test_h21_rejects_degenerate_parameters():
    with pytest.raises(ValueError):
        kt4_h21_bc(0.0, 1.0)


def test_hodge_result_checks_contribution_sum():
    with pytest.raises(ValueError):
        HodgeResult(label="bad", value=2, contributions=[("x", 1)])


def test_hodge_result_as_dict_round_trip():
    res = kt4_h21_bc(B_8PI, 1.0)
    d = res.as_dict()
    assert d["value"] == 4
    assert sum(dim for _, dim in d["contributions"]) == 4


def test_h11_dichotomy():
    assert kt4_h11_bc().value == KT4_B_MINUS + 1
    assert kt4_h11_dbar(0).value == KT4_B_MINUS + 1
    assert kt4_h11_dbar(0.3 + 1j).value == KT4_B_MINUS
    assert kt4_h11_d(0).value == KT4_B_MINUS + 1
    assert kt4_h11_d(-2.0).value == KT4_B_MINUS
    for res in (kt4_h11_bc(), kt4_h11_dbar(1.0), kt4_h11_d(0)):
        assert res.value in (KT4_B_MINUS, KT4_B_MINUS + 1)


def test_metric_invariance_table():
    table = metric_invariance_table()
    assert set(table) == {
        (0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (2, 2), (2, 1), (1, 2),
    }
    for pq, row in table.items():
        if pq in ((2, 1), (1, 2)):
            assert not row["invariant"]
            assert row["witness"]["h21_bc_values"] == [4, 2]
        else:
            assert row["invariant"]
            assert row["witness"] is None


def test_cyclic3_h01_report_small_window():
    res = cyclic3_h01_report(box=1, k_scan=8, K=120)
    assert res.value == 1
    assert res.heuristic_extra == 0
    assert res.contributions == [("orbit (0, 0, 0) (exact kernel)", 1)]
    assert any("heuristic" in note for note in res.notes)

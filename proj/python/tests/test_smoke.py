import os
import pathlib

import pytest

import crystal_ca as cc

DATA = pathlib.Path(os.environ.get("CRYSTAL_CA_TEST_DATA", pathlib.Path(__file__).parents[2] / "tests" / "data"))

INTRO = ["1112211211111111", "1111122121111111", "1111111212211111", "1111111121122111"]


def strip(row):
    assert row.startswith("... ") and row.endswith(" ...")
    return row[4:-4]


def test_algebra_basics():
    c = cc.Crystal("A1", 3)
    assert c.name == "A1_3"
    assert c.d == 3
    assert c.enumerate(1) == ["1", "2", "3", "4"]
    assert len(c.enumerate(2)) == 10


def test_raising_and_lowering():
    c = cc.Crystal("A1", 2)
    b = "1123"
    for i in range(3):
        up = c.e(i, b)
        if up is not None:
            assert c.f(i, up) == b
            assert c.eps(i, up) == c.eps(i, b) - 1
    assert c.e_max(1, "12.2") == c.e_max(1, c.e_max(1, "12.2"))
    assert c.weyl_s(2, c.weyl_s(2, "1123")) == "1123"


def test_rmatrix_example():
    c = cc.Crystal("A1", 3)
    r = cc.RMatrix(c)
    assert r.apply("111223", "344") == "223.111344"
    res = r.factorized("111223", "344", k=3)
    assert res["applicable"]
    assert [s for _, s in res["steps"]] == ["112234.344", "112234.334", "112224.334"]
    assert res["output"] == "223.111344"


def test_rmatrix_outside_domain():
    r = cc.RMatrix(cc.Crystal("A1", 3))
    assert r.apply("11223", "344") == "223.11344"
    for margin in range(4):
        res = r.factorized("11223", "344", k=3, margin=margin)
        assert not res["applicable"]
        assert res["output"] is None


def test_intro_evolution():
    a = cc.Automaton(cc.Crystal("A1", 1))
    for mode in ("carrier", "factorized", "fine"):
        assert [strip(x) for x in a.evolve(INTRO[0], k=1, steps=3, mode=mode)] == INTRO
    assert a.carrier_trace(INTRO[0], 1, 3) == ["111", "112", "122", "112", "111", "112", "111"]


def test_verify_reports():
    r = cc.RMatrix(cc.Crystal("A1", 2))
    rep = cc.verify_theorem(r, trials=30, seed=7)
    assert rep["schema"] == 1
    assert rep["ok"]
    assert rep["trials"] == 30
    assert cc.verify_theorem(r, trials=30, seed=7) == rep
    assert cc.verify_tmap(cc.Crystal("A1", 2), 3)["ok"]
    assert cc.verify_corollary(cc.Automaton(cc.Crystal("A1", 2)), trials=20)["ok"]


def test_errors():
    c = cc.Crystal("A1", 1)
    with pytest.raises(cc.ParseError):
        c.t("12x")
    with pytest.raises(ValueError):
        cc.Automaton(c).evolve("1112", k=1, mode="sideways")
    with pytest.raises(cc.BackendUnavailable):
        cc.Crystal("A2odd", 3)
    with pytest.raises(cc.Error):
        cc.Crystal("D1", 1)


@pytest.mark.skipif(not (DATA / "a2odd3" / "B1.graph").exists(), reason="no A2odd graph files")
def test_a2odd_graphs():
    graphs = [str(DATA / "a2odd3" / f"B{l}.graph") for l in (1, 2, 3)]
    c = cc.Crystal("A2odd", 3, graphs=graphs)
    assert all(c.admission(1).values())
    a = cc.Automaton(c)
    p = "3b3b.12b.3.3b1b.2.3b3b.3b3b"
    rows = a.evolve(p, k=0, steps=1, mode="factorized")
    assert strip(rows[1]) == "3b3b.3b3b.1.3b2b.1b.23.3b3b"
    assert strip(a.fine(p, 0, 2)) == "3b3b.12b.3b.2b1b.3b.22.3b3b"

import pathlib

import pytest

import amalgo

DATA = pathlib.Path(__file__).resolve().parents[1] / "data"


def test_generators_and_balls():
    g = amalgo.graph("regtree(3)")
    assert g.kind == "regtree(3)"
    assert len(g.neighbors(g.origin)) == 3
    b = amalgo.ball(g, radius=2)
    assert b["vertex_count"] == 10
    assert amalgo.distance("cycle(6)", "0", "3") == 3


def test_amalgam_document():
    g = amalgo.build(str(DATA / "cubic_amalgam.json"))
    b = amalgo.ball(g, radius=4)
    assert {v["degree"] for v in b["vertices"]} == {3}


def test_verify_contraction():
    out = amalgo.verify(str(DATA / "line_amalgam.json"), "psi", radii=[4, 6])
    assert out["result"]["verdict"] == "pass"
    assert out["claimed"] == {"gamma": "2", "c": "2", "density": "0"}


def test_verify_is_deterministic_across_jobs():
    a = amalgo.verify(str(DATA / "cubic_amalgam.json"), "normalize", radii=[4], jobs=1)
    b = amalgo.verify(str(DATA / "cubic_amalgam.json"), "normalize", radii=[4], jobs=4)
    assert a == b


def test_end_estimates():
    assert amalgo.end_estimate("doubleray", 3)["class"] == "2"
    assert amalgo.end_estimate("grid2d", 3)["class"] == "1"


def test_calculus():
    d = amalgo.decide(str(DATA / "free_equal_a.json"), str(DATA / "free_equal_b.json"))
    assert d["verdict"] == "equivalent"
    leaf = {"leaf": {"name": "a", "ends": 1}}
    assert amalgo.decide(leaf, leaf)["verdict"] == "equivalent"


def test_errors_carry_codes():
    with pytest.raises(amalgo.AmalgoError) as e:
        amalgo.build(str(DATA / "broken.json"))
    assert e.value.code == "invalid-spec"
    with pytest.raises(amalgo.AmalgoError):
        amalgo.graph("nosuch(3)")

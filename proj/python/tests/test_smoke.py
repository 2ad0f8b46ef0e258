import json
from pathlib import Path

import pytest

import gencurv

DATA = Path(__file__).resolve().parents[2] / "data" / "instances"


def test_so3_solution_is_einstein():
    r = gencurv.ricci(str(DATA / "so3.json"))
    assert r["einstein"]
    assert r["residual"] <= gencurv.tolerance()
    assert r["oracle_gap"] <= 1e-8


def test_general_metric_oracle():
    r = gencurv.ricci(str(DATA / "solvable_general_metric.json"))
    assert r["oracle_gap"] <= 1e-8
    assert len(r["plus"]) == 3


def test_family_text_round_trip():
    text = gencurv.family("t1-r31prime", {"theta": 2.0})
    assert json.loads(text)["family"] == "t1-r31prime"
    assert gencurv.ricci(text, text=True)["einstein"]
    assert "t2-heis" in gencurv.families()


def test_classify():
    assert gencurv.classify(str(DATA / "heis.json")) == "heis"
    with pytest.raises(NotImplementedError):
        gencurv.classify(str(DATA / "n4_semidirect.json"))


def test_invalid_inputs_raise_value_error():
    with pytest.raises(ValueError, match=":6: malformed JSON"):
        gencurv.ricci(str(DATA / "malformed.json"))
    v = gencurv.validate(str(DATA / "corrupted_jacobi.json"))
    assert not v["valid"]


def test_coarse_tables():
    rep = gencurv.verify_tables("coarse")
    assert rep["pass"]
    assert len(rep["table1"]) == 7 and len(rep["table2"]) == 15
    assert rep["table2_csv"].count("\n") == 16

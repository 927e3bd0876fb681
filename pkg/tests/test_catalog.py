import itertools

import pytest

from fano4 import toric
from fano4.catalog import (
    TABLE_1,
    builtin_recipes,
    evaluate_recipe,
    get_recipe,
    recipe_from_json,
    search_d1,
    verify_table,
)
from fano4.errors import DomainError, NotConstructibleError
from fano4.fan import validate_fan

TORIC_TUPLES = {(364, 196, 78), (354, 192, 76), (334, 184, 72), (324, 180, 70)}


@pytest.fixture(scope="module")
def hits3():
    return search_d1(3)


def test_builtin_recipes():
    recipes = builtin_recipes()
    assert [r.name for r in recipes] == ["K1", "K2", "K3", "K4", "ex1", "ex2"]
    assert get_recipe("ex2").expected == dict(K4=250, K2c2=172, chi_mK=57, b3=0, h22=13, h13=0, rho=5)
    k1 = get_recipe("K1").expected
    assert (k1["K4"], k1["K2c2"], k1["chi_mK"], k1["b3"], k1["h22"], k1["chiT"]) == (364, 196, 78, 0, 6, 10)
    assert not get_recipe("K1").constructible


def test_stub_not_constructible():
    with pytest.raises(NotConstructibleError):
        evaluate_recipe(get_recipe("K2"))


def test_evaluate_ex2():
    rep = evaluate_recipe(get_recipe("ex2"))
    assert (rep.K4, rep.K2c2, rep.chi_mK, rep.b3, rep.h22, rep.h13, rep.rho) == (250, 172, 57, 0, 13, 0, 5)
    assert rep.provenance["K4"] == "bundle+blowup"
    assert len(rep.steps) == 4


def test_evaluate_ex1():
    rep = evaluate_recipe(get_recipe("ex1"))
    assert (rep.K4, rep.K2c2, rep.chi_mK, rep.b3, rep.h22, rep.h13, rep.rho) == (253, 166, 57, 0, 7, 0, 5)


def test_evaluate_k4():
    rep = evaluate_recipe(get_recipe("K4"))
    assert (rep.K4, rep.K2c2, rep.chi_mK, rep.b3, rep.h22, rep.chiT, rep.rho, rep.delta) == (
        324, 180, 70, 0, 6, 10, 5, 3)
    assert rep.fano and rep.provenance["delta"] == "toric"


def test_verify_table_verdicts():
    rep = evaluate_recipe(get_recipe("ex2"))
    assert verify_table(rep, get_recipe("ex2").expected).status == "pass"
    bad = dict(get_recipe("ex2").expected, K4=251)
    v = verify_table(rep, bad)
    assert v.status == "fail" and v.diffs == {"K4": (250, 251)}
    ex1 = evaluate_recipe(get_recipe("ex1"))
    v = verify_table(ex1, dict(K4=253, chiT=3))
    assert v.status == "partial" and v.missing == ("chiT",)


@pytest.mark.parametrize("name", ["ex1", "ex2"])
def test_unreproducible_fields_are_partial(name):
    rep = evaluate_recipe(get_recipe(name))
    assert verify_table(rep, TABLE_1[name]).status == "partial"
    assert set(verify_table(rep, TABLE_1[name]).missing) == {"chiT", "delta"}
    assert verify_table(rep, {"rigid": True}).status == "partial"
    assert verify_table(rep, {"h1T": 6}).status == "partial"


def test_recipe_file_round_trip():
    r = get_recipe("ex2")
    again = recipe_from_json(r.to_json())
    assert evaluate_recipe(again).tuple == evaluate_recipe(r).tuple


def test_center_kind_mismatch():
    r = recipe_from_json({"name": "x", "base": {"type": "projective_space", "n": 4},
                          "centers": [{"type": "section", "normal_degrees": [0, -1]}]})
    with pytest.raises(DomainError):
        evaluate_recipe(r)
    r = recipe_from_json({"name": "y", "base": {"type": "split_bundle", "degrees": [0, 0, 2]},
                          "centers": [{"type": "bogus"}]})
    with pytest.raises(DomainError):
        evaluate_recipe(r)


def test_toric_recipe_with_star_centers():
    r = recipe_from_json({"name": "Bl", "base": {"type": "projective_space", "n": 4},
                          "centers": [{"type": "star", "cone": [0, 1, 2]}]})
    rep = evaluate_recipe(r)
    assert rep.K4 == 513 and rep.rho == 2


def test_split_bundle_through_toric_pipeline():
    r = recipe_from_json({"name": "d1", "base": {"type": "split_bundle", "degrees": [0, 1, 2]},
                          "centers": [{"type": "star", "cone": c} for c in ([3, 4], [3, 5], [4, 5])]})
    rep = evaluate_recipe(r)
    assert (rep.K4, rep.K2c2, rep.chi_mK, rep.delta, rep.chiT) == (354, 192, 76, 3, 10)


def test_search_d1_max3(hits3):
    assert len(hits3) == 4
    assert {(h.report.K4, h.report.K2c2, h.report.chi_mK) for h in hits3} == TORIC_TUPLES
    for h in hits3:
        r = h.report
        assert (r.rho, r.delta, r.chiT, r.b3, r.h22, r.h13) == (5, 3, 10, 0, 6, 0)
        assert h.fan.picard_number == 5 and r.fano
        v = validate_fan(h.fan)
        assert v.smooth and v.complete
        assert len(h.matches) == 1
    assert {h.matches[0] for h in hits3} == {"K1", "K2", "K3", "K4"}


def test_search_d1_max0():
    hits = search_d1(0)
    assert [(h.report.K4, h.report.K2c2, h.report.chi_mK) for h in hits] == [(324, 180, 70)]
    assert hits[0].degrees == (0, 0)


@pytest.mark.parametrize("order", list(itertools.permutations(range(3)))[1:])
def test_search_order_independent(hits3, order):
    again = search_d1(3, order=order)
    assert [(h.degrees, h.report.tuple) for h in again] == [(h.degrees, h.report.tuple) for h in hits3]


def test_search_rejects_negative():
    with pytest.raises(DomainError):
        search_d1(-1)


def test_non_fano_configurations_are_dropped():
    # (0, 3) produces a smooth complete toric fourfold that is not Fano
    from conftest import d1_fan

    f = d1_fan(0, 3)
    assert not toric.is_fano(f)
    assert all(h.degrees != (0, 3) for h in search_d1(3))

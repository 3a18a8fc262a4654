import json

import pytest

from adtchoice import EnumerationBudget, Guarantee, NotApplicable, Verdict, enumerate_representations, extension, procedure
from adtchoice.properties import (
    check,
    check_all,
    check_alpha_e,
    check_ext,
    check_gamma_e,
    check_int,
    check_sind,
    check_tiia,
    property_name,
    replay,
)
from adtchoice.replication import catalog, circular_max_tree, standard_universe
from adtchoice.schemas import LIST, TREE, lst, node

HOLDS, FALSIFIED, NO_WITNESS = Verdict.HOLDS, Verdict.FALSIFIED, Verdict.NO_WITNESS

FAST = [
    "maximize/List", "maximize/List2", "maximize/Tree", "sat_list", "sat_list2", "cond_sat/List", "default_large",
    "first_list", "first_list2", "second_list", "second_list2", "leftmost_tree", "bias_large/N1", "bias_large/N2",
    "bias_small/N1", "avoid", "circular_max",
]


@pytest.fixture(scope="module")
def matrix():
    """Every property of the fast catalog procedures at |X| = 3, default budget."""
    procs = catalog(standard_universe(3), FAST)
    return {name: (P, check_all(P)) for name, P in procs.items()}


def _v(matrix, name, prop):
    r = matrix[name][1][prop]
    return None if r is None else r.verdict


# -- single verdicts ---------------------------------------------------------


def test_ext(U3):
    P = catalog(U3, ["maximize/List", "first_list"])
    assert check_ext(P["maximize/List"]).verdict is HOLDS
    r = check_ext(P["first_list"])
    assert r.verdict is FALSIFIED
    assert replay(r, P["first_list"])


def test_int(U3):
    P = catalog(U3, ["first_list", "maximize/List"])
    assert check_int(P["first_list"]).verdict is HOLDS
    r = check_int(P["maximize/List"])
    assert r.verdict is FALSIFIED and replay(r, P["maximize/List"])


def test_sind(U3):
    P = catalog(U3, ["second_list", "maximize/Tree"])
    r = check_sind(P["second_list"])
    assert r.verdict is FALSIFIED and replay(r, P["second_list"])
    assert check_sind(P["maximize/Tree"]).verdict is HOLDS


def test_tiia_needs_substitution(U3):
    P = catalog(U3, ["maximize/List"])["maximize/List"]
    with pytest.raises(NotApplicable):
        check_tiia(P)
    assert check_all(P, props=["TIIA"]) == {"TIIA": None}


def test_tiia_circular_max_at_displayed_tree(U3):
    P = catalog(U3, ["circular_max"])["circular_max"]
    a = circular_max_tree()
    r = check_tiia(P, EnumerationBudget(max_leaves=6), terms=[a])
    assert r.verdict is NO_WITNESS
    assert r.witness["a"] == a
    assert not replay(r, P)  # existential failures have nothing to replay


def test_alpha_witness_is_genuine(U3):
    # the default z is chosen from {x, y, z} but never from {x, z}
    P = catalog(U3, ["default_large"])["default_large"]
    r = check_alpha_e(P)
    assert r.verdict is NO_WITNESS
    w = r.witness
    assert w["choice"] == P(w["a"]) and w["choice"] in w["B"] <= extension(w["a"])
    wide = EnumerationBudget().widened()
    assert all(P(b) != w["choice"] for b in enumerate_representations(P.schema, w["B"], wide, U3))


def test_gamma_witness_is_genuine(U3):
    P = catalog(U3, ["default_large"])["default_large"]
    r = check_gamma_e(P)
    assert r.verdict is NO_WITNESS
    w = r.witness
    assert P(w["a"]) == P(w["b"]) == w["choice_a"]
    assert w["union"] == extension(w["a"]) | extension(w["b"])
    wide = EnumerationBudget().widened()
    assert all(P(c) != w["choice_a"] for c in enumerate_representations(P.schema, w["union"], wide, U3))


def test_ext_restricted_to_sets_gives_textbook_pair(U3):
    P = catalog(U3, ["sat_list"])["sat_list"]
    r = check_ext(P, EnumerationBudget(max_leaves=4), sets=[frozenset("xyz")])
    assert (r.witness["a"], r.witness["b"]) == (lst("x", "y", "z"), lst("x", "z", "y"))
    assert (r.witness["choice_a"], r.witness["choice_b"]) == ("y", "z")


def test_guarantee_restores_ext(U3):
    P = procedure("sat_list", U3, LIST, u="u", threshold=0.5)
    assert check_ext(P).verdict is FALSIFIED
    assert check_ext(P, guarantee=Guarantee.sorted_by("price")).verdict is HOLDS
    Pg = procedure("sat_list", U3, LIST, Guarantee.sorted_by("price"), u="u", threshold=0.5)
    assert check_ext(Pg).verdict is HOLDS
    assert check_ext(Pg, use_procedure_guarantee=False).verdict is FALSIFIED


def test_exhaustive_collects_more_witnesses(U3):
    P = catalog(U3, ["first_list"])["first_list"]
    one = check_ext(P)
    many = check_ext(P, exhaustive=True, max_witnesses=50)
    assert len(one.witnesses) == 1 < len(many.witnesses) <= 50
    assert all(replay(type(one)("EXT", FALSIFIED, [w]), P) for w in many.witnesses)


def test_report_json(U3):
    P = catalog(U3, ["second_list"])["second_list"]
    for prop in ("EXT", "SIND", "alphaE"):
        doc = check(prop, P).to_json()
        json.dumps(doc)
        assert doc["property"] == prop


@pytest.mark.parametrize("alias,name", [("ext", "EXT"), ("alpha", "alphaE"), ("αE", "alphaE"), ("gamma+e", "gammaE"), ("Tiia", "TIIA")])
def test_property_names(alias, name):
    assert property_name(alias) == name


def test_unknown_property():
    with pytest.raises(ValueError):
        property_name("BETA")


def test_budget_monotone_for_falsified(U3):
    # a falsification at a small budget stays one at a larger budget
    P = catalog(U3, ["first_list"])["first_list"]
    assert check_ext(P, EnumerationBudget(max_leaves=3)).verdict is FALSIFIED
    assert check_ext(P, EnumerationBudget(max_leaves=5)).verdict is FALSIFIED


def test_bias_small_tiia_needs_seven_leaves(U3):
    P = catalog(U3, ["bias_small/N1"])["bias_small/N1"]
    a = node("x", node("x", "x", "y"), node("x", "x", "y"))
    r = check_tiia(P, EnumerationBudget(max_leaves=7), terms=[a])
    assert r.verdict is NO_WITNESS


# -- implications between properties ---------------------------------------


def test_int_implies_alpha_and_gamma(matrix):
    for name in matrix:
        if _v(matrix, name, "INT") is HOLDS:
            assert _v(matrix, name, "alphaE") is HOLDS, name
            assert _v(matrix, name, "gammaE") is HOLDS, name


def test_ext_and_sind_imply_alpha(matrix):
    for name in matrix:
        if _v(matrix, name, "EXT") is HOLDS and _v(matrix, name, "SIND") is HOLDS:
            assert _v(matrix, name, "alphaE") is HOLDS, name


def test_sind_and_tiia_imply_alpha_on_trees(matrix):
    for name in matrix:
        if _v(matrix, name, "SIND") is HOLDS and _v(matrix, name, "TIIA") is HOLDS:
            assert _v(matrix, name, "alphaE") is HOLDS, name


def test_sind_implies_gamma_on_trees(matrix):
    for name, (P, _) in matrix.items():
        if P.schema == TREE and _v(matrix, name, "SIND") is HOLDS:
            assert _v(matrix, name, "gammaE") is HOLDS, name


def test_under_ext_sind_alpha_gamma_coincide(matrix):
    ext = [n for n in matrix if _v(matrix, n, "EXT") is HOLDS]
    assert set(ext) == {"maximize/List", "maximize/List2", "maximize/Tree", "default_large"}
    for name in ext:
        assert len({_v(matrix, name, p) is HOLDS for p in ("SIND", "alphaE", "gammaE")}) == 1, name


@pytest.mark.parametrize(
    "name,expected",
    [
        ("first_list", {"EXT": FALSIFIED, "INT": HOLDS, "SIND": HOLDS, "alphaE": HOLDS, "gammaE": HOLDS}),
        ("second_list", {"SIND": FALSIFIED, "alphaE": HOLDS}),
        ("maximize/List", {"EXT": HOLDS, "INT": FALSIFIED, "SIND": HOLDS, "alphaE": HOLDS, "gammaE": HOLDS}),
        ("maximize/Tree", {"TIIA": HOLDS}),
        ("sat_list", {"EXT": FALSIFIED, "INT": FALSIFIED, "SIND": HOLDS, "alphaE": HOLDS, "gammaE": HOLDS}),
        ("circular_max", {"SIND": HOLDS, "TIIA": NO_WITNESS, "alphaE": NO_WITNESS, "gammaE": HOLDS}),
        ("default_large", {"EXT": HOLDS, "SIND": FALSIFIED, "alphaE": NO_WITNESS, "gammaE": NO_WITNESS}),
        ("bias_large/N1", {"SIND": FALSIFIED, "TIIA": HOLDS, "alphaE": HOLDS}),
        ("bias_small/N1", {"INT": HOLDS, "alphaE": HOLDS}),
        ("first_list2", {"INT": HOLDS, "alphaE": HOLDS}),
        ("leftmost_tree", {"INT": HOLDS, "TIIA": HOLDS, "SIND": HOLDS}),
    ],
)
def test_matrix_rows(matrix, name, expected):
    assert {p: _v(matrix, name, p) for p in expected} == expected

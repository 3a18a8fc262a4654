import json

import pytest

from adtchoice import (
    RepresentationError,
    SchemaError,
    T,
    TermError,
    Universe,
    UniverseError,
    analyze_schema,
    canonical_representation,
    equivalent,
    extension,
    format_schema,
    format_term,
    parse_schema,
    parse_term,
    rename_value,
    substitute_subproblem,
    validate_term,
)
from adtchoice.schemas import BUILTINS, FLAT, LIST, LIST2, LTREE, NON_PRODUCTIVE, TREE, UNARY_CHAIN, WINES_OF_LISTS, leaf, lst, lst2, node
from adtchoice.sexpr import ParseError


# -- schemas -----------------------------------------------------------------


def test_parse_list_schema():
    s = parse_schema("schema List; Sing: X; Cons: X, T")
    assert s.name == "List"
    assert [c.name for c in s.constructors] == ["Sing", "Cons"]
    assert s.constructor("Cons").arity == 2


def test_parse_newlines_and_comments():
    text = """
    # ternary trees
    schema Tree
    Leaf: X
    Node: T T T   # three children
    """
    s = parse_schema(text)
    assert s == TREE


def test_format_roundtrip():
    for s in (LIST, LIST2, TREE, LTREE, FLAT):
        assert parse_schema(format_schema(s)) == s


def test_nested_schema_uses_library():
    s = parse_schema("schema W; Wine: X; Red: T T; Dry: T T; inner List", BUILTINS)
    assert s.inner == LIST
    assert s.constructors == WINES_OF_LISTS.constructors


@pytest.mark.parametrize(
    "text",
    [
        "schema Bad; C: ",
        "schema Bad; C: X; C: X T",
        "schema Bad; C: X Y",
        "schema Bad",
        "Sing: X",
        "schema Bad; C: X; inner Nowhere",
    ],
)
def test_malformed_schemas(text):
    with pytest.raises(SchemaError):
        parse_schema(text, BUILTINS)


def test_flags_list():
    f = analyze_schema(LIST)
    assert (f.flat, f.productive, f.substitutable, f.expandable) == (False, True, False, True)
    assert f.representable


def test_flags_tree_substitutable():
    f = analyze_schema(TREE)
    assert f.substitutable and f.representable


@pytest.mark.parametrize("sch", [FLAT, NON_PRODUCTIVE])
def test_textbook_counterexamples_not_representable(sch):
    assert not analyze_schema(sch).representable


def test_unary_chain_discrepancy_note():
    f = analyze_schema(UNARY_CHAIN)
    assert f.productive_nonflat
    assert not f.representable
    assert f.notes and "productive and non-flat" in f.notes[0]


# -- universes ---------------------------------------------------------------


def test_universe_json_roundtrip():
    doc = {"elements": [{"id": "a", "attrs": {"p": 1}}, {"id": "b", "attrs": {"p": 2.5, "ok": True}}]}
    U = Universe.from_json(json.dumps(doc))
    assert U.ids == ("a", "b")
    assert U.attr("b", "ok") is True
    assert Universe.from_json(U.to_json()) == U


@pytest.mark.parametrize(
    "doc",
    [
        {"elements": []},
        {"elements": [{"id": "a"}, {"id": "a"}]},
        {"elements": [{"id": "a", "attrs": {"p": "high"}}]},
        {"things": []},
        {"elements": [{"id": "has space"}]},
    ],
)
def test_bad_universes(doc):
    with pytest.raises(UniverseError):
        Universe.from_json(doc)


def test_universe_sort_follows_index():
    U = Universe.of("z", "a", "m")
    assert U.sort({"a", "m", "z"}) == ("z", "a", "m")


# -- terms -------------------------------------------------------------------


def test_extension_worked_example():
    assert extension(lst("x", "x", "y")) == extension(lst("y", "x")) == {"x", "y"}
    assert equivalent(lst("x", "x", "y"), lst("y", "x"))
    assert not equivalent(lst("x", "y"), lst("x", "z"))


def test_sexpr_roundtrip():
    a = node("x", node("y", "z", "z"), "x")
    assert parse_term(TREE, None, format_term(a)) == a
    assert format_term(lst("x1", "x2")) == "(Cons x1 (Sing x2))"


def test_arity_error():
    with pytest.raises(TermError, match="arity"):
        parse_term(LIST, None, "(Sing x1 x2)")


def test_value_in_recursive_slot_rejected():
    with pytest.raises(TermError):
        validate_term(LIST, T("Cons", "x", "y"))


def test_unknown_constructor_and_alternative():
    with pytest.raises(TermError):
        parse_term(LIST, None, "(Snoc x)")
    with pytest.raises(TermError):
        parse_term(LIST, Universe.of("x", "y"), "(Sing q)")


@pytest.mark.parametrize("text", ["(Sing x", "(Sing x))", "", "()"])
def test_unbalanced(text):
    with pytest.raises((ParseError, TermError)):
        parse_term(LIST, None, text)


def test_rename_value():
    assert rename_value(lst("x", "y", "x"), "x", "z") == lst("z", "y", "z")


def test_substitution_on_tree():
    a = node("x", "y", "x")
    b = node("z", "w", "z")
    s = substitute_subproblem(TREE, a, "x", b)
    assert s == node(b, "y", b)
    assert extension(s) == (extension(a) - {"x"}) | extension(b)


def test_substitution_needs_substitutable_schema():
    with pytest.raises(SchemaError):
        substitute_subproblem(LIST, lst("x", "y"), "x", lst("z"))


# -- canonical representation -----------------------------------------------


@pytest.mark.parametrize("sch", [LIST, LIST2, TREE, LTREE, WINES_OF_LISTS])
@pytest.mark.parametrize("A", [{"x"}, {"x", "y"}, {"x", "y", "z"}, {"w", "z"}])
def test_canonical_has_extension(sch, A):
    U = Universe.of("x", "y", "z", "w")
    t = canonical_representation(sch, A, U)
    validate_term(sch, t, U)
    assert extension(t) == A


def test_canonical_list_is_universe_ordered():
    U = Universe.of("x", "y", "z")
    assert canonical_representation(LIST, {"z", "x"}, U) == lst("x", "z")
    assert canonical_representation(LIST2, {"y", "x"}, U) == lst2("x", "y")
    assert canonical_representation(TREE, {"x", "y"}, U) == node(leaf("x"), leaf("y"), leaf("x"))


def test_canonical_bounded_capacity():
    assert extension(canonical_representation(FLAT, {"x", "y"})) == {"x", "y"}
    with pytest.raises(RepresentationError):
        canonical_representation(FLAT, {"x", "y", "z"})
    with pytest.raises(RepresentationError):
        canonical_representation(NON_PRODUCTIVE, {"x"})

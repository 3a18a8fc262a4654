"""Algebraic laws on random terms."""

from hypothesis import given, settings
from hypothesis import strategies as st

from adtchoice import (
    Term,
    Universe,
    analyze_schema,
    canonical_representation,
    extension,
    format_term,
    parse_term,
    rename_value,
    substitute_subproblem,
    validate_term,
)
from adtchoice.replication import CATALOG, standard_universe
from adtchoice.schemas import LIST, LIST2, TREE, lst

from oracles import leaf_values

ALTS = st.sampled_from("xyz")

trees = st.recursive(
    ALTS.map(lambda x: Term("Leaf", (x,))),
    lambda kids: st.tuples(kids, kids, kids).map(lambda c: Term("Node", c)),
    max_leaves=9,
)
lists = st.lists(ALTS, min_size=1, max_size=8).map(lambda xs: lst(*xs))
lists2 = st.recursive(
    ALTS.map(lambda x: Term("Sing2", (x,))),
    lambda kids: st.tuples(kids, kids).map(lambda c: Term("Cat", c)),
    max_leaves=8,
)
U3 = standard_universe(3)


@given(trees)
def test_extension_is_leaf_set(a):
    assert extension(a) == set(leaf_values(a))


@given(st.one_of(trees.map(lambda t: (TREE, t)), lists.map(lambda t: (LIST, t)), lists2.map(lambda t: (LIST2, t))))
def test_sexpr_roundtrip(pair):
    sch, a = pair
    assert parse_term(sch, U3, format_term(a)) == a


@given(trees, ALTS, ALTS)
def test_rename_law(a, x, y):
    r = rename_value(a, x, y)
    validate_term(TREE, r)
    want = (extension(a) - {x}) | {y} if x in extension(a) else extension(a)
    assert extension(r) == want


@given(trees, ALTS, trees)
def test_substitution_law(a, x, b):
    s = substitute_subproblem(TREE, a, x, b)
    validate_term(TREE, s)
    if x in extension(a):
        assert extension(s) == (extension(a) - {x}) | extension(b)
    else:
        assert s == a


@given(st.sets(st.sampled_from("xyzw"), min_size=1))
def test_canonical_representation(A):
    U = Universe.of("x", "y", "z", "w")
    for sch in (LIST, LIST2, TREE):
        assert analyze_schema(sch).representable
        assert extension(canonical_representation(sch, A, U)) == A


@settings(max_examples=60)
@given(st.data())
def test_catalog_choices_are_members(data):
    for e in CATALOG:
        gen = {TREE: trees, LIST: lists, LIST2: lists2}.get(e.schema)
        if gen is None:
            continue
        a = data.draw(gen)
        assert e.build(U3)(a) in extension(a)

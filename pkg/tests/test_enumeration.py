import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adtchoice import BudgetError, EnumerationBudget, Guarantee, Universe, count_representations, enumerate_representations, extension
from adtchoice.enumeration import enumerate_shapes, surjection_count, surjections
from adtchoice.schemas import LIST, LIST2, TREE, UNARY_CHAIN, WINES_OF_LISTS, lst

from oracles import oracle_count, representations, shape_count
from oracles import surjection_count as oracle_surjections

SETS = [("x",), ("x", "y"), ("x", "y", "z")]


@pytest.mark.parametrize("sch", [LIST, LIST2, TREE], ids=lambda s: s.name)
@pytest.mark.parametrize("A", SETS, ids=len)
@pytest.mark.parametrize("max_leaves", [1, 2, 3, 4, 5])
def test_matches_oracle(sch, A, max_leaves):
    budget = EnumerationBudget(max_leaves=max_leaves)
    if max_leaves < len(A):
        with pytest.raises(BudgetError):
            list(enumerate_representations(sch, A, budget))
        assert representations(sch, A, max_leaves) == set()
        return
    got = list(enumerate_representations(sch, A, budget))
    assert len(got) == len(set(got))
    assert set(got) == representations(sch, A, max_leaves)
    assert len(got) == oracle_count(sch, A, max_leaves)
    assert sum(count_representations(sch, A, budget).values()) == len(got)


def test_list_two_elements_three_leaves():
    got = list(enumerate_representations(LIST, {"x", "y"}, EnumerationBudget(max_leaves=3)))
    assert len(got) == 8
    assert lst("x", "y") in got and lst("y", "x", "x") in got


@pytest.mark.parametrize("sch", [LIST, LIST2, TREE], ids=lambda s: s.name)
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_shape_counts(sch, n):
    assert len(enumerate_shapes(sch, n)) == shape_count(sch, n)


def test_binary_shapes_are_catalan():
    assert [shape_count(LIST2, n) for n in range(1, 7)] == [1, 1, 2, 5, 14, 42]


@given(st.integers(1, 6), st.integers(1, 4))
def test_surjections(n, k):
    atoms = "abcd"[:k]
    words = surjections(atoms, n)
    assert len(words) == surjection_count(n, k) == oracle_surjections(n, k)
    assert all(set(w) == set(atoms) for w in words)


def test_default_leaf_cap_is_size_plus_slack():
    got = list(enumerate_representations(LIST, {"x", "y"}))
    assert max(len(extension(t)) for t in got) == 2
    assert len(got) == oracle_count(LIST, "xy", 4)


def test_order_is_deterministic():
    b = EnumerationBudget(max_leaves=4)
    assert list(enumerate_representations(TREE, "xyz", b)) == list(enumerate_representations(TREE, "zyx", b))


def test_max_terms():
    with pytest.raises(BudgetError):
        list(enumerate_representations(LIST2, "xyz", EnumerationBudget(max_leaves=5, max_terms=100)))


@pytest.mark.parametrize("kw", [{"max_leaves": 0}, {"max_terms": 0}, {"slack": -1}])
def test_bad_budgets(kw):
    with pytest.raises(BudgetError):
        EnumerationBudget(**kw)


def test_guarantee_filters_words():
    U = Universe.of("x", "y", "z", price=[3, 1, 2])
    g = Guarantee.sorted_by("price")
    got = list(enumerate_representations(LIST, "xyz", EnumerationBudget(max_leaves=5), U, g))
    assert got == [lst("y", "z", "x")]


def test_no_duplicates_guarantee():
    U = Universe.of("x", "y", "z")
    got = list(enumerate_representations(LIST, "xyz", EnumerationBudget(max_leaves=5), U, Guarantee.no_duplicates()))
    assert len(got) == 6


def test_unary_recursion_terminates():
    got = list(enumerate_representations(UNARY_CHAIN, "x", EnumerationBudget(max_leaves=3)))
    assert got and all(extension(t) == {"x"} for t in got)
    assert list(enumerate_representations(UNARY_CHAIN, "xy", EnumerationBudget(max_leaves=3))) == []


def test_nested_extension():
    for t in enumerate_representations(WINES_OF_LISTS, "xy", EnumerationBudget(max_leaves=3)):
        assert extension(t) == {"x", "y"}


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([LIST, LIST2, TREE]), st.sets(st.sampled_from("xyz"), min_size=1), st.integers(1, 5))
def test_every_term_has_target_extension(sch, A, max_leaves):
    max_leaves = max(max_leaves, len(A))
    for t in enumerate_representations(sch, A, EnumerationBudget(max_leaves=max_leaves)):
        assert extension(t) == A

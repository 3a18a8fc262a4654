"""The standard datatypes: lists, concatenation lists, ternary trees, labelled
trees, the wine checklist tree and the paged search result."""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .adt import AdtSchema, AltId, Term, schema

LIST = schema("List", ("Sing", "X"), ("Cons", "X T"))
LIST2 = schema("List2", ("Sing2", "X"), ("Cat", "T T"))
TREE = schema("Tree", ("Leaf", "X"), ("Node", "T T T"))
LTREE = schema("LTree", ("LLeaf", "X"), ("Node1", "T T"), ("Node2", "T T"), ("Node3", "T T"))
WINES = schema("Wines", ("Wine", "X"), ("Red", "T T"), ("Dry", "T T"))
WINES_OF_LISTS = AdtSchema("WinesOfLists", WINES.constructors, inner=LIST)
ITEM = schema("Item", ("I", "X"))

# counterexamples to representability
FLAT = schema("Flat", ("C1", "X"), ("C2", "X X"))
NON_PRODUCTIVE = schema("NonProductive", ("C1", "T T"), ("C2", "T"))
UNARY_CHAIN = schema("UnaryChain", ("C1", "X"), ("C2", "T"))


@lru_cache(maxsize=None)
def page_schema(page_size: int = 10) -> AdtSchema:
    return schema("Page" if page_size == 10 else f"Page{page_size}", ("P", " ".join("X" * page_size)), inner=ITEM)


@lru_cache(maxsize=None)
def result_schema(page_size: int = 10) -> AdtSchema:
    name = "Result" if page_size == 10 else f"Result{page_size}"
    return schema(name, ("R1", "X"), ("R2", "X T"), inner=page_schema(page_size))


RESULT = result_schema(10)

BUILTINS: dict[str, AdtSchema] = {
    s.name: s
    for s in (LIST, LIST2, TREE, LTREE, WINES, WINES_OF_LISTS, ITEM, page_schema(10), RESULT)
}


def lst(*xs: AltId) -> Term:
    """``lst(x, y, z)`` is ``[x, y, z]`` in the List datatype."""
    if not xs:
        raise ValueError("lists are non-empty")
    t = Term("Sing", (xs[-1],))
    for x in reversed(xs[:-1]):
        t = Term("Cons", (x, t))
    return t


def lst2(*xs: AltId) -> Term:
    """Right-nested concatenation list."""
    if not xs:
        raise ValueError("lists are non-empty")
    t = Term("Sing2", (xs[-1],))
    for x in reversed(xs[:-1]):
        t = Term("Cat", (Term("Sing2", (x,)), t))
    return t


def leaf(x: AltId) -> Term:
    return Term("Leaf", (x,))


def node(*children: Term | AltId) -> Term:
    """Ternary tree node; bare ids are wrapped in ``Leaf``."""
    return Term("Node", tuple(c if isinstance(c, Term) else leaf(c) for c in children))


def page(items: Sequence[AltId]) -> Term:
    return Term("P", tuple(Term("I", (x,)) for x in items))


def search_result(pages: Sequence[Sequence[AltId]]) -> Term:
    t = Term("R1", (page(pages[-1]),))
    for p in reversed(pages[:-1]):
        t = Term("R2", (page(p), t))
    return t

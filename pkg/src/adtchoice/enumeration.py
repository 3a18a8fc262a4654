"""Bounded exhaustive enumeration of representations.

Terms are generated shape first: a shape is a constructor skeleton whose
alternative positions are holes (``_``), and a representation of ``A`` is a
shape filled with a word that hits every element of ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from itertools import product
from math import comb
from typing import Callable, Iterable, Iterator, Sequence

from .adt import AdtSchema, AltId, Child, Slot, Term, Universe, depth
from .guarantees import Guarantee

HOLE = "_"


class BudgetError(ValueError):
    """The budget cannot satisfy the request, or its safety cap was hit."""


@dataclass(frozen=True)
class EnumerationBudget:
    """Caps on enumeration.

    ``max_leaves=None`` means ``|A| + slack`` for a target set ``A``.
    A shape and a word determine their term, so enumeration never repeats
    itself; ``dedup`` adds an explicit (costly) duplicate filter anyway.
    ``max_depth`` only matters for schemas with unary recursive
    constructors, whose shapes are otherwise unbounded; by default such
    schemas get ``leaf cap + 2``.
    """

    max_leaves: int | None = None
    slack: int = 2
    max_terms: int = 5_000_000
    dedup: bool = False
    max_depth: int | None = None

    def __post_init__(self) -> None:
        if self.max_leaves is not None and self.max_leaves < 1:
            raise BudgetError("max_leaves must be positive")
        if self.max_terms < 1:
            raise BudgetError("max_terms must be positive")
        if self.slack < 0:
            raise BudgetError("slack must be non-negative")

    def leaves_for(self, size: int) -> int:
        return self.max_leaves if self.max_leaves is not None else size + self.slack

    def widened(self, extra: int = 1) -> EnumerationBudget:
        if self.max_leaves is None:
            return replace(self, slack=self.slack + extra)
        return replace(self, max_leaves=self.max_leaves + extra)

    def describe(self) -> dict:
        return {
            "max_leaves": self.max_leaves if self.max_leaves is not None else f"|A|+{self.slack}",
            "max_terms": self.max_terms,
            "dedup": self.dedup,
            "max_depth": self.max_depth,
        }


@dataclass(frozen=True)
class Shape:
    skeleton: Term
    leaf_count: int

    def fill(self, word: Sequence[AltId]) -> Term:
        if len(word) != self.leaf_count:
            raise ValueError(f"shape has {self.leaf_count} holes, got {len(word)} values")
        return _filler(self.skeleton)(word)

    def __str__(self) -> str:
        from .adt import format_term

        return format_term(self.skeleton)


@lru_cache(maxsize=1 << 16)
def _filler(skeleton: Term) -> Callable[[Sequence[AltId]], Term]:
    """Compile a skeleton into a function from words to terms.

    Filling is the innermost loop of every checker, so the skeleton is
    turned into a single expression instead of being walked per word.
    """
    holes = iter(range(1 << 30))

    def expr(t: Child) -> str:
        if isinstance(t, Term):
            args = "".join(expr(a) + "," for a in t.args)
            return f"_new(Term, ({t.ctor!r}, ({args})))"
        return f"w[{next(holes)}]"

    return eval(f"lambda w: {expr(skeleton)}", {"_new": tuple.__new__, "Term": Term})


def has_unary_recursion(sch: AdtSchema) -> bool:
    if any(c.slots == (Slot.REC,) for c in sch.constructors):
        return True
    return sch.inner is not None and has_unary_recursion(sch.inner)


@lru_cache(maxsize=None)
def min_leaves(sch: AdtSchema) -> int:
    vals = [_value_min(sch) * len(c.slots) for c in sch.constructors if c.is_base]
    if not vals:
        raise BudgetError(f"schema {sch.name} is not productive")
    return min(vals)


def _value_min(sch: AdtSchema) -> int:
    return 1 if sch.inner is None else min_leaves(sch.inner)


def max_leaf_capacity(sch: AdtSchema) -> float:
    """Largest leaf count of any finite term (``inf`` when unbounded)."""
    inner_cap = 1 if sch.inner is None else max_leaf_capacity(sch.inner)
    if any(c.is_expanding for c in sch.constructors):
        return float("inf")
    best = 0.0
    for c in sch.constructors:
        if c.is_base:
            best = max(best, len(c.slots) * inner_cap)
    return best


def _default_depth(sch: AdtSchema, leaf_cap: int, budget_depth: int | None) -> int | None:
    if budget_depth is not None:
        return budget_depth
    return leaf_cap + 2 if has_unary_recursion(sch) else None


@lru_cache(maxsize=None)
def _shapes(sch: AdtSchema, n: int, d: int | None) -> tuple[Term, ...]:
    """Skeletons with exactly ``n`` holes and depth at most ``d`` (if given)."""
    if n < 1 or (d is not None and d < 1):
        return ()
    out: list[Term] = []
    for c in sch.constructors:
        slot_mins = []
        for kind in c.slots:
            if kind is Slot.REC:
                slot_mins.append(min_leaves(sch))
            else:
                slot_mins.append(_value_min(sch))
        if sum(slot_mins) > n:
            continue
        sub_d = None if d is None else d - 1
        for split in _compositions(n, slot_mins, [k is Slot.VALUE and sch.inner is None for k in c.slots]):
            options: list[tuple[Child, ...]] = []
            for kind, k in zip(c.slots, split):
                if kind is Slot.REC:
                    options.append(_shapes(sch, k, sub_d))
                elif sch.inner is None:
                    options.append((HOLE,))
                else:
                    options.append(_shapes(sch.inner, k, sub_d))
                if not options[-1]:
                    break
            else:
                for args in product(*options):
                    out.append(Term(c.name, tuple(args)))
    return tuple(out)


def _compositions(n: int, mins: list[int], exact_one: list[bool]) -> Iterator[tuple[int, ...]]:
    if not mins:
        if n == 0:
            yield ()
        return
    rest_min = sum(mins[1:])
    hi = 1 if exact_one[0] else n - rest_min
    for k in range(mins[0], hi + 1):
        for tail in _compositions(n - k, mins[1:], exact_one[1:]):
            yield (k, *tail)


def _preorder_key(sch: AdtSchema, t: Child) -> tuple:
    order = {c.name: i for i, c in enumerate(sch.constructors)}
    inner_order = {} if sch.inner is None else {c.name: i for i, c in enumerate(sch.inner.constructors)}
    keys: list[int] = []
    stack: list[Child] = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Term):
            keys.append(order.get(node.ctor, inner_order.get(node.ctor, -1)))
            stack.extend(reversed(node.args))
        else:
            keys.append(-1)
    return tuple(keys)


@lru_cache(maxsize=None)
def _sorted_shapes(sch: AdtSchema, n: int, d: int | None) -> tuple[Shape, ...]:
    skels = sorted(_shapes(sch, n, d), key=lambda s: (depth(s), _preorder_key(sch, s)))
    return tuple(Shape(s, n) for s in skels)


def enumerate_shapes(sch: AdtSchema, leaf_count: int, max_depth: int | None = None) -> list[Shape]:
    """All skeletons with exactly ``leaf_count`` holes, by depth then
    constructor declaration order."""
    if leaf_count < 1:
        raise ValueError("leaf_count must be >= 1")
    d = _default_depth(sch, leaf_count, max_depth)
    return list(_sorted_shapes(sch, leaf_count, d))


def surjections(atoms: Sequence[AltId], n: int) -> list[tuple[AltId, ...]]:
    """Words of length ``n`` using every atom, in lexicographic order."""
    k = len(atoms)
    if n < k:
        return []
    full = set(atoms)
    return [w for w in product(atoms, repeat=n) if len(set(w)) == k and set(w) == full]


def surjection_count(n: int, k: int) -> int:
    return sum((-1) ** j * comb(k, j) * (k - j) ** n for j in range(k + 1))


def _ordered(A: Iterable[AltId], universe: Universe | None) -> tuple[AltId, ...]:
    if universe is not None:
        return universe.sort(A)
    return tuple(sorted(set(A)))


def _leaf_range(sch: AdtSchema, size: int, budget: EnumerationBudget) -> range:
    if size < 1:
        raise BudgetError("target set must be non-empty")
    cap = budget.leaves_for(size)
    if cap < size:
        raise BudgetError(f"max_leaves={cap} cannot cover a set of {size} alternatives")
    return range(max(size, min_leaves(sch)), cap + 1)


def enumerate_representations(
    sch: AdtSchema,
    A: Iterable[AltId],
    budget: EnumerationBudget | None = None,
    universe: Universe | None = None,
    guarantee: Guarantee | None = None,
) -> Iterator[Term]:
    """Every term with extension exactly ``A`` within the leaf budget.

    Order: leaf count, then shape order, then lexicographic word order
    (alternatives ordered by universe index).  With a guarantee only
    admissible terms are produced.
    """
    budget = budget or EnumerationBudget()
    atoms = _ordered(A, universe)
    if guarantee is not None and universe is None:
        raise ValueError("guarantees need a universe")
    leaf_range = _leaf_range(sch, len(atoms), budget)
    d = _default_depth(sch, leaf_range.stop - 1, budget.max_depth)
    emitted = 0
    seen: set[Term] | None = set() if budget.dedup else None
    for n in leaf_range:
        shapes = _sorted_shapes(sch, n, d)
        if not shapes:
            continue
        if guarantee is None:
            words = surjections(atoms, n)
        else:
            words = guarantee.candidate_words(atoms, n, universe)  # type: ignore[arg-type]
        for shape in shapes:
            fill = _filler(shape.skeleton)
            for w in words:
                t = fill(w)
                if seen is not None:
                    if t in seen:
                        continue
                    seen.add(t)
                emitted += 1
                if emitted > budget.max_terms:
                    raise BudgetError(f"more than max_terms={budget.max_terms} representations")
                yield t


def count_representations(
    sch: AdtSchema,
    A: Iterable[AltId],
    budget: EnumerationBudget | None = None,
    universe: Universe | None = None,
    guarantee: Guarantee | None = None,
) -> dict[int, int]:
    """Representation counts per leaf count (shapes times surjections)."""
    budget = budget or EnumerationBudget()
    atoms = _ordered(A, universe)
    leaf_range = _leaf_range(sch, len(atoms), budget)
    d = _default_depth(sch, leaf_range.stop - 1, budget.max_depth)
    out: dict[int, int] = {}
    for n in leaf_range:
        shapes = len(_sorted_shapes(sch, n, d))
        if guarantee is None:
            words = surjection_count(n, len(atoms))
        else:
            words = len(guarantee.candidate_words(atoms, n, universe))  # type: ignore[arg-type]
        if shapes and words:
            out[n] = shapes * words
    return out


def enumerate_terms(
    sch: AdtSchema,
    universe: Universe,
    budget: EnumerationBudget | None = None,
    guarantee: Guarantee | None = None,
    sets: Iterable[frozenset[AltId]] | None = None,
) -> Iterator[tuple[frozenset[AltId], Term]]:
    """``(A, t)`` for every non-empty ``A`` (default: all subsets of the
    universe) and every representation ``t`` of ``A``."""
    budget = budget or EnumerationBudget()
    for A in (universe.subsets() if sets is None else sets):
        if budget.leaves_for(len(A)) < len(A):
            continue
        for t in enumerate_representations(sch, A, budget, universe, guarantee):
            yield A, t

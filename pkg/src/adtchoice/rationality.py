"""Induced choice functions and correspondences, and their rationalizations.

Every rationalizability decision is made twice: once constructively (the
revealed binary relation, as in the characterization proofs) and once by
brute force over all candidate relations.  The two must agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Any, Iterable, Iterator, Mapping

from .adt import AltId, RepresentationError, Term, Universe, analyze_schema, canonical_representation, extension, format_term
from .enumeration import EnumerationBudget, enumerate_representations, enumerate_terms
from .guarantees import Guarantee
from .procedures import Procedure
from .properties import PropertyReport, check_alpha_e, check_ext, check_gamma_e

#: largest universe for exhaustive search over strict orders (6! = 720)
MAX_FUNCTION_SIZE = 6
#: largest universe for exhaustive search over weak orders (3^6 = 729 before filtering)
MAX_CORRESPONDENCE_SIZE = 4


class RouteDisagreement(AssertionError):
    """The constructive and brute-force routes disagree: a bug, never data."""


def _menus(universe: Universe, max_size: int | None = None) -> list[frozenset[AltId]]:
    return universe.subsets(max_size=max_size)


def _label(A: Iterable[AltId], universe: Universe) -> str:
    return "{" + ",".join(universe.sort(A)) + "}"


class ChoiceFunction(Mapping[frozenset, AltId]):
    """A map from menus to one of their elements."""

    def __init__(self, universe: Universe, table: Mapping[frozenset, AltId]):
        self.universe = universe
        self._table = {frozenset(A): x for A, x in table.items()}
        for A, x in self._table.items():
            if not A or x not in A:
                raise ValueError(f"c({_label(A, universe)}) = {x!r} is not an element of the menu")

    @classmethod
    def from_callable(cls, universe: Universe, fn, max_size: int | None = None) -> ChoiceFunction:
        return cls(universe, {A: fn(A) for A in _menus(universe, max_size)})

    def __getitem__(self, A: frozenset) -> AltId:
        return self._table[frozenset(A)]

    def __call__(self, A: Iterable[AltId]) -> AltId:
        return self._table[frozenset(A)]

    def __iter__(self) -> Iterator[frozenset]:
        return iter(self._table)

    def __len__(self) -> int:
        return len(self._table)

    def to_json(self) -> dict[str, AltId]:
        return {_label(A, self.universe): x for A, x in sorted(self._table.items(), key=lambda kv: (len(kv[0]), self.universe.sort(kv[0])))}


class ChoiceCorrespondence(Mapping[frozenset, frozenset]):
    """A map from menus to non-empty subsets of themselves."""

    def __init__(self, universe: Universe, table: Mapping[frozenset, Iterable[AltId]], budget: EnumerationBudget | None = None):
        self.universe = universe
        self.budget = budget
        self._table = {frozenset(A): frozenset(C) for A, C in table.items()}
        for A, C in self._table.items():
            if not C or not C <= A:
                raise ValueError(f"C({_label(A, universe)}) = {_label(C, universe)} must be a non-empty subset")

    def __getitem__(self, A: frozenset) -> frozenset:
        return self._table[frozenset(A)]

    def __iter__(self) -> Iterator[frozenset]:
        return iter(self._table)

    def __len__(self) -> int:
        return len(self._table)

    def to_json(self) -> dict[str, list[AltId]]:
        items = sorted(self._table.items(), key=lambda kv: (len(kv[0]), self.universe.sort(kv[0])))
        return {_label(A, self.universe): list(self.universe.sort(C)) for A, C in items}


@dataclass(frozen=True)
class PreferenceRelation:
    """``matrix[i][j]`` is true when ``ids[i]`` is at least as good as ``ids[j]``
    (weak relations) or strictly better (strict orders)."""

    ids: tuple[AltId, ...]
    matrix: tuple[tuple[bool, ...], ...]
    strict: bool = False

    @classmethod
    def from_order(cls, order: Iterable[AltId]) -> PreferenceRelation:
        """Strict total order, best first."""
        ids = tuple(order)
        return cls(ids, tuple(tuple(i < j for j in range(len(ids))) for i in range(len(ids))), strict=True)

    @classmethod
    def from_ranks(cls, ids: Iterable[AltId], ranks: Iterable[int]) -> PreferenceRelation:
        """Weak order: lower rank is better, equal ranks are indifferent."""
        ids, ranks = tuple(ids), tuple(ranks)
        return cls(ids, tuple(tuple(ranks[i] <= ranks[j] for j in range(len(ids))) for i in range(len(ids))))

    def _i(self, x: AltId) -> int:
        return self.ids.index(x)

    def holds(self, x: AltId, y: AltId) -> bool:
        return self.matrix[self._i(x)][self._i(y)]

    @property
    def complete(self) -> bool:
        n = len(self.ids)
        if self.strict:
            return all(self.matrix[i][j] or self.matrix[j][i] for i in range(n) for j in range(n) if i != j)
        return all(self.matrix[i][j] or self.matrix[j][i] for i in range(n) for j in range(n))

    @property
    def transitive(self) -> bool:
        n, m = len(self.ids), self.matrix
        return all(not (m[i][j] and m[j][k]) or m[i][k] for i in range(n) for j in range(n) for k in range(n))

    @property
    def antisymmetric(self) -> bool:
        n, m = len(self.ids), self.matrix
        return all(not (m[i][j] and m[j][i]) for i in range(n) for j in range(n) if i != j)

    @property
    def irreflexive(self) -> bool:
        return not any(self.matrix[i][i] for i in range(len(self.ids)))

    @property
    def is_strict_total_order(self) -> bool:
        return self.irreflexive and self.complete and self.transitive and self.antisymmetric

    def maxima(self, A: Iterable[AltId]) -> frozenset[AltId]:
        """Elements related to every other element of ``A``."""
        A = list(A)
        return frozenset(x for x in A if all(x == y or self.holds(x, y) for y in A))

    def ranking(self) -> list[list[AltId]]:
        """Indifference classes, best first (for complete transitive relations)."""
        classes: list[list[AltId]] = []
        rest = list(self.ids)
        while rest:
            top = [x for x in rest if all(x == y or self.holds(x, y) for y in rest)]
            if not top:
                raise ValueError("relation has no maximal elements")
            classes.append(top)
            rest = [x for x in rest if x not in top]
        return classes

    @property
    def total_indifference(self) -> bool:
        return all(all(row) for row in self.matrix)

    def __str__(self) -> str:
        sep = " > " if self.strict else " >= "
        try:
            return sep.join("~".join(c) for c in self.ranking())
        except ValueError:
            return f"PreferenceRelation({self.ids})"

    def to_json(self) -> dict[str, Any]:
        return {
            "ids": list(self.ids),
            "strict": self.strict,
            "ranking": self.ranking() if self.complete and self.transitive else None,
            "complete": self.complete,
            "transitive": self.transitive,
            "antisymmetric": self.antisymmetric,
        }


# ---------------------------------------------------------------------------
# Induced choice behaviour


def induced_choice_function(
    P: Procedure,
    max_size: int | None = None,
    guarantee: Guarantee | None = None,
    budget: EnumerationBudget | None = None,
) -> ChoiceFunction:
    """``c(A) = P(r(A))`` for the canonical representation ``r``.

    With a guarantee, ``r(A)`` is the first admissible representation in
    enumeration order instead; menus without one are left out.
    """
    U = P.universe
    if guarantee is None:
        if not analyze_schema(P.schema).representable:
            raise RepresentationError(f"schema {P.schema.name} is not representable")
        return ChoiceFunction(U, {A: P(canonical_representation(P.schema, A, U)) for A in _menus(U, max_size)})
    table = {}
    for A in _menus(U, max_size):
        r = next(enumerate_representations(P.schema, A, budget, U, guarantee), None)
        if r is not None:
            table[A] = P(r)
    return ChoiceFunction(U, table)


def induced_correspondence(
    P: Procedure,
    budget: EnumerationBudget | None = None,
    guarantee: Guarantee | None = None,
    max_size: int | None = None,
    *,
    terms: Iterable[Term] | None = None,
) -> ChoiceCorrespondence:
    """``C(A) = {P(a) : ext(a) = A}`` over representations within budget
    (or over ``terms`` when given).  Menus with no admissible
    representation are left out."""
    budget = budget or EnumerationBudget()
    g = guarantee if guarantee is not None else P.guarantee
    U = P.universe
    if terms is None:
        terms = (t for _, t in enumerate_terms(P.schema, U, budget, g, _menus(U, max_size)))
    table: dict[frozenset, set[AltId]] = {}
    for a in terms:
        table.setdefault(extension(a), set()).add(P(a))
    return ChoiceCorrespondence(U, table, budget)


# ---------------------------------------------------------------------------
# Choice functions: constructive route and strict-order oracle


def _domain_ids(universe: Universe, domain: Iterable[frozenset]) -> tuple[AltId, ...]:
    return universe.sort(set().union(*domain)) if domain else ()


def revealed_strict_order(c: ChoiceFunction) -> PreferenceRelation | None:
    """``x > y`` iff ``c({x,y}) = x``; ``None`` unless every pair is a menu."""
    ids = _domain_ids(c.universe, c.keys())
    try:
        m = tuple(tuple(i != j and c[frozenset((x, y))] == x for j, y in enumerate(ids)) for i, x in enumerate(ids))
    except KeyError:
        return None
    return PreferenceRelation(ids, m, strict=True)


def _function_consistent(rel: PreferenceRelation, c: ChoiceFunction) -> bool:
    return all(rel.maxima(A) == {x} for A, x in c.items())


def constructive_choice_rationalization(c: ChoiceFunction) -> PreferenceRelation | None:
    rel = revealed_strict_order(c)
    if rel is None or not rel.is_strict_total_order or not _function_consistent(rel, c):
        return None
    return rel


def oracle_choice_rationalizations(c: ChoiceFunction) -> list[PreferenceRelation]:
    """Every strict total order whose maxima reproduce ``c``."""
    ids = _domain_ids(c.universe, c.keys())
    if len(ids) > MAX_FUNCTION_SIZE:
        raise ValueError(f"order search is capped at {MAX_FUNCTION_SIZE} alternatives, got {len(ids)}")
    out = []
    for perm in permutations(ids):
        pos = {x: i for i, x in enumerate(perm)}
        if all(min(A, key=pos.__getitem__) == x for A, x in c.items()):
            rel = PreferenceRelation.from_order(perm)
            out.append(PreferenceRelation(ids, tuple(tuple(rel.holds(x, y) for y in ids) for x in ids), strict=True))
    return out


def rationalize_choice_function(c: ChoiceFunction) -> PreferenceRelation | None:
    """A strict order ``>`` with ``c(A) = max_> A`` for every menu, or ``None``.

    Both routes run; a disagreement raises :class:`RouteDisagreement`.
    Without every two-element menu the constructive route is unavailable
    and the oracle decides alone.
    """
    oracle = oracle_choice_rationalizations(c)
    if revealed_strict_order(c) is None:
        return oracle[0] if oracle else None
    constructive = constructive_choice_rationalization(c)
    if (constructive is None) != (not oracle):
        raise RouteDisagreement(f"constructive={constructive}, oracle found {len(oracle)} orders")
    if constructive is not None and [constructive] != oracle:
        raise RouteDisagreement(f"constructive order {constructive} differs from oracle {', '.join(map(str, oracle))}")
    return constructive


# ---------------------------------------------------------------------------
# Correspondences: constructive route and weak-order oracle


def revealed_weak_relation(C: ChoiceCorrespondence) -> PreferenceRelation | None:
    """``x >= y`` iff ``x in C({x,y})`` (reflexive)."""
    ids = _domain_ids(C.universe, C.keys())
    try:
        m = tuple(tuple(i == j or x in C[frozenset((x, y))] for j, y in enumerate(ids)) for i, x in enumerate(ids))
    except KeyError:
        return None
    return PreferenceRelation(ids, m)


def _correspondence_consistent(rel: PreferenceRelation, C: ChoiceCorrespondence) -> bool:
    return all(rel.maxima(A) == S for A, S in C.items())


def constructive_correspondence_rationalization(C: ChoiceCorrespondence) -> PreferenceRelation | None:
    rel = revealed_weak_relation(C)
    if rel is None or not rel.complete or not rel.transitive or not _correspondence_consistent(rel, C):
        return None
    return rel


def complete_relations(ids: tuple[AltId, ...]) -> Iterator[PreferenceRelation]:
    """All complete reflexive relations (three options per pair), transitive
    ones only."""
    n = len(ids)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for choice in product((0, 1, 2), repeat=len(pairs)):
        m = [[i == j for j in range(n)] for i in range(n)]
        for (i, j), k in zip(pairs, choice):
            m[i][j] = k != 1  # 0: tie, 1: j strictly better, 2: i strictly better
            m[j][i] = k != 2
        rel = PreferenceRelation(ids, tuple(map(tuple, m)))
        if rel.transitive:
            yield rel


def oracle_correspondence_rationalizations(C: ChoiceCorrespondence) -> list[PreferenceRelation]:
    ids = _domain_ids(C.universe, C.keys())
    if len(ids) > MAX_CORRESPONDENCE_SIZE:
        raise ValueError(f"relation search is capped at {MAX_CORRESPONDENCE_SIZE} alternatives, got {len(ids)}")
    return [rel for rel in complete_relations(ids) if _correspondence_consistent(rel, C)]


def rationalize_correspondence(C: ChoiceCorrespondence) -> PreferenceRelation | None:
    """A complete transitive ``>=`` with ``C(A)`` its maxima on every menu."""
    oracle = oracle_correspondence_rationalizations(C)
    if revealed_weak_relation(C) is None:
        return oracle[0] if oracle else None
    constructive = constructive_correspondence_rationalization(C)
    if (constructive is None) != (not oracle):
        raise RouteDisagreement(f"constructive={constructive}, oracle found {len(oracle)} relations")
    if constructive is not None and [constructive] != oracle:
        raise RouteDisagreement(f"constructive relation {constructive} differs from oracle {', '.join(map(str, oracle))}")
    return constructive


# ---------------------------------------------------------------------------
# Classification


@dataclass
class RationalityVerdict:
    procedure: str
    cfi: bool
    cfi_witness: Term | None
    choice_function: ChoiceFunction
    ext: PropertyReport
    alpha: PropertyReport
    gamma: PropertyReport
    cf_rationalizable: bool
    order: PreferenceRelation | None
    correspondence: ChoiceCorrespondence
    cc_rationalizable: bool
    relation: PreferenceRelation | None
    budget: EnumerationBudget = field(default_factory=EnumerationBudget)
    guarantee: Guarantee | None = None

    def to_json(self) -> dict[str, Any]:
        return {
            "procedure": self.procedure,
            "guarantee": None if self.guarantee is None else str(self.guarantee),
            "budget": self.budget.describe(),
            "CFI": self.cfi,
            "cfi_witness": None if self.cfi_witness is None else format_term(self.cfi_witness),
            "EXT": self.ext.verdict.value,
            "alphaE": self.alpha.verdict.value,
            "gammaE": self.gamma.verdict.value,
            "cf_rationalizable": self.cf_rationalizable,
            "order": None if self.order is None else self.order.to_json(),
            "cc_rationalizable": self.cc_rationalizable,
            "relation": None if self.relation is None else self.relation.to_json(),
            "choice_function": self.choice_function.to_json(),
            "correspondence": self.correspondence.to_json(),
        }

    def summary(self) -> str:
        cf = f"yes ({self.order})" if self.cf_rationalizable else "no"
        cc = f"yes ({self.relation})" if self.cc_rationalizable else "no"
        return f"{self.procedure}: CFI={'yes' if self.cfi else 'no'} CF-rationalizable={cf} CC-rationalizable={cc}"


def classify_procedure(
    P: Procedure,
    budget: EnumerationBudget | None = None,
    guarantee: Guarantee | None = None,
) -> RationalityVerdict:
    """Decide CFI, choice-function and correspondence rationalizability, each
    by the axioms and by the oracles; disagreements raise."""
    budget = budget or EnumerationBudget()
    U = P.universe
    g = guarantee if guarantee is not None else P.guarantee
    if len(U) > MAX_CORRESPONDENCE_SIZE:
        raise ValueError(f"classification is exhaustive only up to {MAX_CORRESPONDENCE_SIZE} alternatives")

    # (i) implementation of a choice function, checked directly
    c = induced_choice_function(P, guarantee=g, budget=budget)
    # the universal domain is shared by every check below
    domain = [t for _, t in enumerate_terms(P.schema, U, budget, g)]
    cfi_witness = next((a for a in domain if extension(a) in c and P(a) != c[extension(a)]), None)
    cfi = cfi_witness is None
    ext = check_ext(P, budget, g, terms=domain)
    if cfi != ext.holds:
        raise RouteDisagreement(f"CFI={cfi} but EXT is {ext.verdict}")

    # (ii) choice-function rationalizability: EXT and alphaE vs order search
    alpha = check_alpha_e(P, budget, g, terms=domain)
    cf_theorem = ext.holds and alpha.holds
    order = rationalize_choice_function(c) if cfi else None
    if cf_theorem != (order is not None):
        raise RouteDisagreement(f"EXT={ext.verdict}, alphaE={alpha.verdict} but order search found {order}")

    # (iii) correspondence rationalizability: alphaE and gammaE vs relation search
    gamma = check_gamma_e(P, budget, g, terms=domain)
    C = induced_correspondence(P, budget, g, terms=domain)
    relation = rationalize_correspondence(C)
    cc_theorem = alpha.holds and gamma.holds
    if cc_theorem != (relation is not None):
        raise RouteDisagreement(f"alphaE={alpha.verdict}, gammaE={gamma.verdict} but relation search found {relation}")

    return RationalityVerdict(
        procedure=P.name,
        cfi=cfi,
        cfi_witness=cfi_witness,
        choice_function=c,
        ext=ext,
        alpha=alpha,
        gamma=gamma,
        cf_rationalizable=order is not None,
        order=order,
        correspondence=C,
        cc_rationalizable=relation is not None,
        relation=relation,
        budget=budget,
        guarantee=g,
    )

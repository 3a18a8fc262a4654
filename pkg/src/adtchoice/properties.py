"""Bounded checkers for the procedural axioms EXT, INT, SIND, TIIA, αE and γ⁺E.

Universal clauses are checked over every enumerated term within the budget;
a violation is reported as ``Falsified`` with a replayable witness.
Existential clauses search a budget one leaf wider; when no witness turns
up the verdict is ``NoWitnessWithinBudget``, never ``Falsified``.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Any, Callable, Iterable, Iterator

from .adt import (
    AdtSchema,
    AltId,
    Child,
    Slot,
    Term,
    analyze_schema,
    extension,
    format_term,
    rename_value,
)
from .enumeration import EnumerationBudget, enumerate_representations, enumerate_terms
from .guarantees import Guarantee
from .procedures import Procedure

PROPERTIES = ("EXT", "INT", "SIND", "TIIA", "alphaE", "gammaE")

#: leaf cap for sub-terms plugged into recursive slots by the SIND checker
SIND_LEAVES = 3


class Verdict(str, enum.Enum):
    FALSIFIED = "Falsified"
    HOLDS = "HoldsUpToBudget"
    NO_WITNESS = "NoWitnessWithinBudget"

    def __str__(self) -> str:
        return self.value


class NotApplicable(ValueError):
    """The property is undefined for this schema (e.g. TIIA needs substitution)."""


def _jsonable(v: Any) -> Any:
    if isinstance(v, Term):
        return format_term(v)
    if isinstance(v, (frozenset, set)):
        return sorted(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


@dataclass
class PropertyReport:
    property: str
    verdict: Verdict
    witnesses: list[dict[str, Any]] = field(default_factory=list)
    budget: EnumerationBudget = field(default_factory=EnumerationBudget)
    guarantee: Guarantee | None = None
    checked: int = 0
    seconds: float = 0.0

    @property
    def witness(self) -> dict[str, Any] | None:
        return self.witnesses[0] if self.witnesses else None

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    def to_json(self) -> dict[str, Any]:
        return {
            "property": self.property,
            "verdict": self.verdict.value,
            "witnesses": [_jsonable(w) for w in self.witnesses],
            "budget": self.budget.describe(),
            "guarantee": None if self.guarantee is None else str(self.guarantee),
            "checked": self.checked,
            "seconds": round(self.seconds, 4),
        }

    def __str__(self) -> str:
        s = f"{self.property}: {self.verdict}"
        if self.witness:
            s += " " + ", ".join(f"{k}={_fmt(v)}" for k, v in self.witness.items())
        return s


def _fmt(v: Any) -> str:
    j = _jsonable(v)
    if isinstance(j, list):
        return "{" + ",".join(map(str, j)) + "}" if isinstance(v, frozenset) else str(j)
    return str(j)


# ---------------------------------------------------------------------------
# Domains and witness search


def _domain(
    P: Procedure,
    budget: EnumerationBudget,
    guarantee: Guarantee | None,
    sets: Iterable[frozenset[AltId]] | None,
    terms: Iterable[Term] | None,
) -> Iterator[Term]:
    if terms is not None:
        for t in terms:
            if guarantee is None or guarantee.accepts(t, P.universe):
                yield t
        return
    for _, t in enumerate_terms(P.schema, P.universe, budget, guarantee, sets):
        yield t


class _Finder:
    """Lazily searches representations of a set for a prescribed choice.

    Each target set keeps one shared generator; choices seen so far are
    remembered with their first witness, so repeated queries are cheap.
    """

    def __init__(self, P: Procedure, budget: EnumerationBudget, guarantee: Guarantee | None):
        self.P = P
        self.budget = budget
        self.guarantee = guarantee
        self._state: dict[frozenset, tuple[Iterator[Term], dict[AltId, Term]]] = {}
        self.evaluated = 0

    def find(self, B: frozenset[AltId], x: AltId) -> Term | None:
        if B not in self._state:
            gen = enumerate_representations(self.P.schema, B, self.budget, self.P.universe, self.guarantee)
            self._state[B] = (gen, {})
        gen, found = self._state[B]
        if x in found:
            return found[x]
        for b in gen:
            self.evaluated += 1
            found.setdefault(self.P(b), b)
            if x in found:
                return found[x]
        return None


def _budget(budget: EnumerationBudget | None) -> EnumerationBudget:
    return budget or EnumerationBudget()


def _guarantee(P: Procedure, guarantee: Guarantee | None, use_procedure_guarantee: bool) -> Guarantee | None:
    if guarantee is None and use_procedure_guarantee:
        return P.guarantee
    return guarantee


def _report(name, witnesses, bad: Verdict, budget, guarantee, checked, t0) -> PropertyReport:
    verdict = bad if witnesses else Verdict.HOLDS
    return PropertyReport(name, verdict, witnesses, budget, guarantee, checked, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# Checkers. Shared keyword arguments:
#   guarantee  restricts both the universal domain and existential searches
#   sets       only enumerate representations of these menus
#   terms      use exactly these terms as the universal domain
#   exhaustive keep collecting witnesses (up to ``max_witnesses``)


def check_ext(
    P: Procedure,
    budget: EnumerationBudget | None = None,
    guarantee: Guarantee | None = None,
    *,
    sets=None,
    terms=None,
    exhaustive: bool = False,
    max_witnesses: int = 20,
    use_procedure_guarantee: bool = True,
) -> PropertyReport:
    t0 = time.perf_counter()
    budget = _budget(budget)
    g = _guarantee(P, guarantee, use_procedure_guarantee)
    first: dict[frozenset, tuple[Term, AltId]] = {}
    flagged: set[frozenset] = set()
    witnesses: list[dict[str, Any]] = []
    checked = 0
    for a in _domain(P, budget, g, sets, terms):
        checked += 1
        A = extension(a)
        x = P(a)
        if A not in first:
            first[A] = (a, x)
            continue
        b, y = first[A]
        if x != y and A not in flagged:
            flagged.add(A)
            witnesses.append({"a": b, "b": a, "choice_a": y, "choice_b": x})
            if not exhaustive or len(witnesses) >= max_witnesses:
                break
    return _report("EXT", witnesses, Verdict.FALSIFIED, budget, g, checked, t0)


def check_int(
    P: Procedure,
    budget: EnumerationBudget | None = None,
    guarantee: Guarantee | None = None,
    *,
    sets=None,
    terms=None,
    exhaustive: bool = False,
    max_witnesses: int = 20,
    use_procedure_guarantee: bool = True,
) -> PropertyReport:
    """Renaming the chosen value ``x`` to any ``y`` must make ``y`` the choice.
    Renamings that leave the guaranteed domain are skipped."""
    t0 = time.perf_counter()
    budget = _budget(budget)
    g = _guarantee(P, guarantee, use_procedure_guarantee)
    witnesses: list[dict[str, Any]] = []
    checked = 0
    for a in _domain(P, budget, g, sets, terms):
        checked += 1
        x = P(a)
        for y in P.universe:
            if y == x:
                continue
            b = rename_value(a, x, y)
            if g is not None and not g.accepts(b, P.universe):
                continue
            if P(b) != y:
                witnesses.append({"a": a, "x": x, "y": y, "renamed": b, "choice": P(b)})
                break
        if witnesses and (not exhaustive or len(witnesses) >= max_witnesses):
            break
    return _report("INT", witnesses, Verdict.FALSIFIED, budget, g, checked, t0)


def _subproblem_ctor(sch: AdtSchema) -> str | None:
    for c in sch.constructors:
        if c.slots == (Slot.VALUE,):
            return c.name
    return None


def _child_terms(sch: AdtSchema, universe, leaves: int) -> list[Term]:
    out: list[Term] = []
    b = EnumerationBudget(max_leaves=leaves)
    for A in universe.subsets(max_size=leaves):
        out.extend(enumerate_representations(sch, A, b, universe))
    return out


def check_sind(
    P: Procedure,
    budget: EnumerationBudget | None = None,
    guarantee: Guarantee | None = None,
    *,
    child_leaves: int = SIND_LEAVES,
    exhaustive: bool = False,
    max_witnesses: int = 20,
    use_procedure_guarantee: bool = True,
) -> PropertyReport:
    """For every constructor, instantiate its slots (values over the
    universe, recursive slots over small terms) and group the instantiated
    problems by the tuple of sub-choices.  Within a group the top choice
    must be one fixed coordinate of that tuple.

    The sub-choice of a recursive child is ``P(child)``.  A value slot's
    sub-problem is the value wrapped in the schema's unary value
    constructor (for plain schemas this is the value itself).
    """
    t0 = time.perf_counter()
    budget = _budget(budget)
    g = _guarantee(P, guarantee, use_procedure_guarantee)
    sch, U = P.schema, P.universe
    unary = _subproblem_ctor(sch)
    if sch.inner is not None:
        if unary is None:
            raise NotApplicable(f"SIND needs a unary value constructor on nested schema {sch.name}")
        values: list[Child] = _child_terms(sch.inner, U, child_leaves)

        def value_choice(v: Child) -> AltId:
            return P(Term(unary, (v,)))
    else:
        values = list(U)

        def value_choice(v: Child) -> AltId:
            return v  # type: ignore[return-value]

    rec_terms = _child_terms(sch, U, child_leaves)
    witnesses: list[dict[str, Any]] = []
    checked = 0
    for c in sch.constructors:
        pools = [values if k is Slot.VALUE else rec_terms for k in c.slots]
        seen: dict[tuple, tuple[Term, AltId, int | None]] = {}
        for args in product(*pools):
            top = Term(c.name, tuple(args))
            if g is not None and not g.accepts(top, U):
                continue
            checked += 1
            sub = tuple(value_choice(v) if k is Slot.VALUE else P(v) for k, v in zip(c.slots, args))  # type: ignore[arg-type]
            x = P(top)
            if x not in sub:
                witnesses.append({"a": top, "subchoices": sub, "choice": x, "reason": "choice is no sub-choice"})
            elif sub not in seen:
                seen[sub] = (top, x, None)
                continue
            elif seen[sub][1] != x:
                other, y, _ = seen[sub]
                witnesses.append({"a": other, "b": top, "subchoices": sub, "choice_a": y, "choice_b": x,
                                  "reason": "same sub-choices, different choice"})
            else:
                continue
            if not exhaustive or len(witnesses) >= max_witnesses:
                return _report("SIND", witnesses, Verdict.FALSIFIED, budget, g, checked, t0)
    return _report("SIND", witnesses, Verdict.FALSIFIED, budget, g, checked, t0)


def check_tiia(
    P: Procedure,
    budget: EnumerationBudget | None = None,
    guarantee: Guarantee | None = None,
    *,
    sets=None,
    terms=None,
    search_budget: EnumerationBudget | None = None,
    exhaustive: bool = False,
    max_witnesses: int = 20,
    use_procedure_guarantee: bool = True,
) -> PropertyReport:
    """For ``a`` with an immediate recursive child ``a'`` whose choice ``y``
    lost to ``x = P(a)``, some ``b`` with extension
    ``(ext(a') - {y}) | {x}`` must put back ``x`` when it replaces ``a'``."""
    if not analyze_schema(P.schema).substitutable:
        raise NotApplicable(f"TIIA needs a substitutable schema; {P.schema.name} is not")
    t0 = time.perf_counter()
    budget = _budget(budget)
    search = search_budget or budget.widened(1)
    g = _guarantee(P, guarantee, use_procedure_guarantee)
    sch, U = P.schema, P.universe
    cache: dict[tuple, Term | None] = {}
    witnesses: list[dict[str, Any]] = []
    checked = 0
    for a in _domain(P, budget, g, sets, terms):
        x = P(a)
        slots = sch.constructor(a.ctor).slots
        for i, (kind, child) in enumerate(zip(slots, a.args)):
            if kind is not Slot.REC:
                continue
            y = P(child)  # type: ignore[arg-type]
            if y == x:
                continue
            checked += 1
            target = (extension(child) - {y}) | {x}
            key = (a, i)
            if key not in cache:
                cache[key] = None
                for b in enumerate_representations(sch, target, search, U):
                    d = Term(a.ctor, a.args[:i] + (b,) + a.args[i + 1:])
                    if g is not None and not g.accepts(d, U):
                        continue
                    if P(d) == x:
                        cache[key] = b
                        break
            if cache[key] is None:
                witnesses.append({"a": a, "child": child, "x": x, "y": y, "target": frozenset(target)})
                break
        if witnesses and (not exhaustive or len(witnesses) >= max_witnesses):
            break
    return _report("TIIA", witnesses, Verdict.NO_WITNESS, budget, g, checked, t0)


def check_alpha_e(
    P: Procedure,
    budget: EnumerationBudget | None = None,
    guarantee: Guarantee | None = None,
    *,
    sets=None,
    terms=None,
    search_budget: EnumerationBudget | None = None,
    exhaustive: bool = False,
    max_witnesses: int = 20,
    use_procedure_guarantee: bool = True,
) -> PropertyReport:
    """For ``x = P(a)`` and every ``B`` with ``x in B <= ext(a)``, some
    representation of ``B`` must also yield ``x``."""
    t0 = time.perf_counter()
    budget = _budget(budget)
    g = _guarantee(P, guarantee, use_procedure_guarantee)
    finder = _Finder(P, search_budget or budget.widened(1), g)
    # the clause only depends on (ext(a), P(a)); keep one source term per pair
    sources: dict[tuple[frozenset, AltId], Term] = {}
    for a in _domain(P, budget, g, sets, terms):
        sources.setdefault((extension(a), P(a)), a)
    witnesses: list[dict[str, Any]] = []
    checked = 0
    for (A, x), a in sources.items():
        rest = sorted(A - {x}, key=P.universe.index)
        for k in range(len(rest) + 1):
            for extra in combinations(rest, k):
                B = frozenset((x, *extra))
                checked += 1
                if finder.find(B, x) is None:
                    witnesses.append({"a": a, "choice": x, "B": B})
                    break
            else:
                continue
            break
        if witnesses and (not exhaustive or len(witnesses) >= max_witnesses):
            break
    return _report("alphaE", witnesses, Verdict.NO_WITNESS, budget, g, checked, t0)


def check_gamma_e(
    P: Procedure,
    budget: EnumerationBudget | None = None,
    guarantee: Guarantee | None = None,
    *,
    sets=None,
    terms=None,
    search_budget: EnumerationBudget | None = None,
    exhaustive: bool = False,
    max_witnesses: int = 20,
    use_procedure_guarantee: bool = True,
) -> PropertyReport:
    """For ``a, b`` with ``P(b) in ext(a)``, some representation of
    ``ext(a) | ext(b)`` must yield ``P(a)``."""
    t0 = time.perf_counter()
    budget = _budget(budget)
    g = _guarantee(P, guarantee, use_procedure_guarantee)
    finder = _Finder(P, search_budget or budget.widened(1), g)
    sources: dict[tuple[frozenset, AltId], Term] = {}
    for a in _domain(P, budget, g, sets, terms):
        sources.setdefault((extension(a), P(a)), a)
    witnesses: list[dict[str, Any]] = []
    checked = 0
    items = list(sources.items())
    for (A, x), a in items:
        for (B, y), b in items:
            if y not in A:
                continue
            checked += 1
            if finder.find(A | B, x) is None:
                witnesses.append({"a": a, "b": b, "choice_a": x, "choice_b": y, "union": A | B})
                break
        if witnesses and (not exhaustive or len(witnesses) >= max_witnesses):
            break
    return _report("gammaE", witnesses, Verdict.NO_WITNESS, budget, g, checked, t0)


CHECKERS: dict[str, Callable[..., PropertyReport]] = {
    "EXT": check_ext,
    "INT": check_int,
    "SIND": check_sind,
    "TIIA": check_tiia,
    "alphaE": check_alpha_e,
    "gammaE": check_gamma_e,
}

_ALIASES = {"αe": "alphaE", "alpha": "alphaE", "γ⁺e": "gammaE", "gamma": "gammaE", "gamma+e": "gammaE"}


def property_name(name: str) -> str:
    for p in PROPERTIES:
        if p.lower() == name.lower():
            return p
    if name.lower() in _ALIASES:
        return _ALIASES[name.lower()]
    raise ValueError(f"unknown property {name!r}; expected one of {', '.join(PROPERTIES)}")


def check(prop: str, P: Procedure, budget: EnumerationBudget | None = None, guarantee: Guarantee | None = None, **kw) -> PropertyReport:
    return CHECKERS[property_name(prop)](P, budget, guarantee, **kw)


def check_all(P: Procedure, budget: EnumerationBudget | None = None, guarantee: Guarantee | None = None,
              props: Iterable[str] = PROPERTIES) -> dict[str, PropertyReport | None]:
    """All requested properties; inapplicable ones map to ``None``."""
    out: dict[str, PropertyReport | None] = {}
    for p in props:
        try:
            out[property_name(p)] = check(p, P, budget, guarantee)
        except NotApplicable:
            out[property_name(p)] = None
    return out


def replay(report: PropertyReport, P: Procedure) -> bool:
    """Re-run a ``Falsified`` witness; true iff the violation reproduces."""
    if report.verdict is not Verdict.FALSIFIED or not report.witness:
        return False
    w = report.witness
    if report.property == "EXT":
        return extension(w["a"]) == extension(w["b"]) and P(w["a"]) == w["choice_a"] and P(w["b"]) == w["choice_b"] != w["choice_a"]
    if report.property == "INT":
        renamed = rename_value(w["a"], w["x"], w["y"])
        return P(w["a"]) == w["x"] and renamed == w["renamed"] and P(renamed) != w["y"]
    if report.property == "SIND":
        if "b" not in w:
            return P(w["a"]) not in w["subchoices"]
        return P(w["a"]) == w["choice_a"] and P(w["b"]) == w["choice_b"] != w["choice_a"]
    return False

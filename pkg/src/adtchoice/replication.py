"""Scripted reproduction of the propositions, counterexamples and worked
examples, at desk scale.

Each case records where its expectation comes from:

* ``PAPER``: stated in the source text,
* ``TRIVIAL``: follows directly from a definition,
* ``DERIVED``: computed independently and frozen here.
"""

from __future__ import annotations

import fnmatch
import time
import traceback
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

from .adt import (
    AdtSchema,
    T,
    Term,
    Universe,
    analyze_schema,
    canonical_representation,
    equivalent,
    extension,
    format_term,
    substitute_subproblem,
)
from .enumeration import EnumerationBudget
from .guarantees import Guarantee
from .procedures import Procedure, ProcedureSpec, apply, instantiate_procedure, procedure
from .properties import (
    NotApplicable,
    PropertyReport,
    Verdict,
    check_all,
    check_alpha_e,
    check_ext,
    check_gamma_e,
    check_int,
    check_sind,
    check_tiia,
)
from .rationality import classify_procedure, induced_correspondence
from .schemas import (
    FLAT,
    LIST,
    LIST2,
    NON_PRODUCTIVE,
    RESULT,
    TREE,
    UNARY_CHAIN,
    WINES,
    WINES_OF_LISTS,
    lst,
    lst2,
    node,
    result_schema,
    search_result,
)

HOLDS, FALSIFIED, NO_WITNESS = Verdict.HOLDS, Verdict.FALSIFIED, Verdict.NO_WITNESS

# ---------------------------------------------------------------------------
# Shared fixtures


def standard_universe(n: int = 3) -> Universe:
    """``x, y, z, w`` (first ``n``); rank makes ``x`` best; ``u`` puts ``x``
    below the satisficing threshold 0.5; ``x`` and ``y`` are known."""
    if not 1 <= n <= 4:
        raise ValueError("standard universe has 1..4 alternatives")
    ids = ("x", "y", "z", "w")[:n]
    return Universe.of(
        *ids,
        rank=list(range(n, 0, -1)),
        u=[0.0, 1.0, 1.0, 1.0][:n],
        known=[True, True, False, False][:n],
        price=[3, 1, 2, 4][:n],
    )


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str
    schema: AdtSchema
    params: tuple[tuple[str, Any], ...] = ()
    needs_cycle: bool = False

    def build(self, universe: Universe, guarantee: Guarantee | None = None) -> Procedure:
        params = dict(self.params)
        if self.kind == "default_large":
            params.setdefault("default", universe.ids[-1])
        return instantiate_procedure(ProcedureSpec(self.kind, params, guarantee), universe, self.schema)


def _entry(name: str, kind: str, schema: AdtSchema, **params: Any) -> CatalogEntry:
    return CatalogEntry(name, kind, schema, tuple(sorted(params.items())), needs_cycle=kind == "circular_max")


#: the procedure catalog on plain (non-nested) schemas, with the parameters
#: used throughout the checks
CATALOG: tuple[CatalogEntry, ...] = (
    _entry("maximize/List", "maximize", LIST, order="rank"),
    _entry("maximize/List2", "maximize", LIST2, order="rank"),
    _entry("maximize/Tree", "maximize", TREE, order="rank"),
    _entry("sat_list", "sat_list", LIST, u="u", threshold=0.5),
    _entry("sat_list2", "sat_list2", LIST2, u="u", threshold=0.5),
    _entry("cond_sat/List", "cond_sat", LIST, known="known", order="rank"),
    _entry("default_large", "default_large", LIST, N=2, order="rank"),
    _entry("first_list", "first_list", LIST),
    _entry("first_list2", "first_list2", LIST2),
    _entry("second_list", "second_list", LIST),
    _entry("second_list2", "second_list2", LIST2),
    _entry("leftmost_tree", "leftmost_tree", TREE),
    _entry("bias_large/N1", "bias_large", TREE, N=1, order="rank"),
    _entry("bias_large/N2", "bias_large", TREE, N=2, order="rank"),
    _entry("bias_small/N1", "bias_small", TREE, N=1, order="rank"),
    _entry("avoid", "avoid", LIST2, avoid="x", N=2),
    _entry("circular_max", "circular_max", TREE, cycle="x,y,z"),
    _entry("wine_checklist", "wine_checklist", WINES),
)


def catalog(universe: Universe, names: Iterable[str] | None = None) -> dict[str, Procedure]:
    wanted = None if names is None else set(names)
    out = {}
    for e in CATALOG:
        if wanted is not None and e.name not in wanted:
            continue
        if e.needs_cycle and not {"x", "y", "z"} <= set(universe.ids):
            continue
        out[e.name] = e.build(universe)
    return out


def circular_max_tree() -> Term:
    """``Node (Leaf x) (Leaf x) (Node (Leaf y) (Leaf z) (Leaf z))``."""
    return node("x", "x", node("y", "z", "z"))


def satisficing_table_procedure(universe: Universe) -> Procedure:
    """x when it is first or last of a three-element list, else y; other
    lists take their first element.  Runs on duplicate-free lists."""
    table = {lst(*w): ("x" if w[0] == "x" or w[-1] == "x" else "y") for w in
             (("x", "y", "z"), ("x", "z", "y"), ("y", "z", "x"), ("z", "y", "x"), ("y", "x", "z"), ("z", "x", "y"))}
    return procedure("table", universe, LIST, Guarantee.no_duplicates(), table=table)


def wine_universe() -> Universe:
    return Universe.of(
        "barolo", "chianti", "lambrusco", "brachetto", "chablis", "riesling", "moscato",
        red=[True, True, True, True, False, False, False],
        dry=[True, True, False, False, True, False, False],
        price=[40, 18, 9, 12, 25, 14, 8],
    )


def wine_fixture(u: Universe) -> Term:
    """Red? splits reds (left) from whites; Dry? splits dry (left) from
    non-dry.  Each list is sorted by increasing price."""

    def wines(pred) -> Term:
        ws = sorted((w for w in u if pred(w)), key=lambda w: u.attr(w, "price"))
        return T("Wine", lst(*ws))

    red = lambda w: u.attr(w, "red")  # noqa: E731
    dry = lambda w: u.attr(w, "dry")  # noqa: E731
    return T(
        "Red",
        T("Dry", wines(lambda w: red(w) and dry(w)), wines(lambda w: red(w) and not dry(w))),
        T("Dry", wines(lambda w: not red(w) and dry(w)), wines(lambda w: not red(w) and not dry(w))),
    )


def search_universe(n: int = 20) -> Universe:
    """``i1 .. in`` with page rank decreasing in the index."""
    return Universe.of(*(f"i{k}" for k in range(1, n + 1)), rank=[n + 1 - k for k in range(1, n + 1)])


# ---------------------------------------------------------------------------
# Cases


@dataclass
class CaseOutcome:
    passed: bool
    observed: dict[str, Any] = field(default_factory=dict)
    expected: dict[str, Any] = field(default_factory=dict)
    artifacts: dict[str, Any] = field(default_factory=dict)
    note: str = ""


@dataclass(frozen=True)
class ReplicationCase:
    id: str
    anchor: str
    claim: str
    provenance: str
    run: Callable[[], CaseOutcome]


@dataclass
class CaseResult:
    case: ReplicationCase
    outcome: CaseOutcome
    seconds: float
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.outcome.passed

    def to_json(self) -> dict[str, Any]:
        return {
            "id": self.case.id,
            "anchor": self.case.anchor,
            "claim": self.case.claim,
            "provenance": self.case.provenance,
            "passed": self.passed,
            "expected": _plain(self.outcome.expected),
            "observed": _plain(self.outcome.observed),
            "artifacts": _plain(self.outcome.artifacts),
            "note": self.outcome.note,
            "error": self.error,
            "seconds": round(self.seconds, 3),
        }


def _plain(v: Any) -> Any:
    if isinstance(v, Term):
        return format_term(v)
    if isinstance(v, Verdict):
        return v.value
    if isinstance(v, PropertyReport):
        return v.to_json()
    if isinstance(v, (frozenset, set)):
        return sorted(v)
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return v


@dataclass
class ReplicationReport:
    results: list[CaseResult]
    uncovered: list[str]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results) and not self.uncovered

    @property
    def failures(self) -> list[CaseResult]:
        return [r for r in self.results if not r.passed]

    def to_json(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "cases": [r.to_json() for r in self.results],
            "uncovered_anchors": self.uncovered,
            "summary": {"total": len(self.results), "failed": len(self.failures)},
        }


CASES: list[ReplicationCase] = []


def case(id: str, anchor: str, provenance: str, claim: str):
    def deco(fn: Callable[[], CaseOutcome]) -> Callable[[], CaseOutcome]:
        CASES.append(ReplicationCase(id, anchor, claim, provenance, fn))
        return fn

    return deco


def _verdicts(reports: dict[str, PropertyReport]) -> dict[str, Verdict]:
    return {k: v.verdict for k, v in reports.items()}


def _expect(observed: dict[str, Any], expected: dict[str, Any], artifacts: dict[str, Any] | None = None, note: str = "") -> CaseOutcome:
    ok = all(observed.get(k) == v for k, v in expected.items())
    return CaseOutcome(ok, observed, expected, artifacts or {}, note)


def _witnesses(*reports: PropertyReport) -> dict[str, Any]:
    return {r.property: r.witness for r in reports if r.witness}


# -- representation --------------------------------------------------------


@case("extension-example", "sub-sec-dec-prob", "PAPER", "ext [x,x,y] = ext [y,x] = {x,y}")
def _extension_example() -> CaseOutcome:
    a, b = lst("x", "x", "y"), lst("y", "x")
    return _expect(
        {"ext_a": extension(a), "ext_b": extension(b), "equivalent": equivalent(a, b)},
        {"ext_a": frozenset("xy"), "ext_b": frozenset("xy"), "equivalent": True},
    )


@case("representability", "def-t-representation", "PAPER",
      "List, List2, Tree represent every menu; flat and non-productive grammars do not")
def _representability() -> CaseOutcome:
    flags = {s.name: analyze_schema(s).representable for s in (LIST, LIST2, TREE, FLAT, NON_PRODUCTIVE)}
    return _expect(flags, {"List": True, "List2": True, "Tree": True, "Flat": False, "NonProductive": False})


@case("representability-expandable", "def-t-representation", "DERIVED",
      "C1 X | C2 T is productive and non-flat yet cannot represent two-element menus")
def _expandable() -> CaseOutcome:
    f = analyze_schema(UNARY_CHAIN)
    return _expect(
        {"productive_nonflat": f.productive_nonflat, "representable": f.representable, "note": bool(f.notes)},
        {"productive_nonflat": True, "representable": False, "note": True},
        note="; ".join(f.notes),
    )


@case("substitution", "sub-sec-dec-prob", "TRIVIAL", "ext a[b/x] = (ext a - {x}) | ext b on substitutable Tree")
def _substitution() -> CaseOutcome:
    a, b = node("x", "y", node("x", "z", "z")), node("y", "z", "z")
    d = substitute_subproblem(TREE, a, "x", b)
    return _expect(
        {"ext": extension(d), "substitutable": analyze_schema(TREE).substitutable, "list_substitutable": analyze_schema(LIST).substitutable},
        {"ext": frozenset("yz"), "substitutable": True, "list_substitutable": False},
        {"result": d},
    )


# -- example procedures ----------------------------------------------------


@case("example-max", "example-max", "PAPER", "maximizing works on every representation and is extensional")
def _example_max() -> CaseOutcome:
    U = standard_universe(3)
    P = catalog(U, ["maximize/List", "maximize/List2", "maximize/Tree"])
    choices = {n: apply(p, canonical_representation(p.schema, {"y", "z", "x"}, U)) for n, p in P.items()}
    exts = {n: check_ext(p).verdict for n, p in P.items()}
    return _expect({"choices": choices, "ext": exts},
                   {"choices": {n: "x" for n in P}, "ext": {n: HOLDS for n in P}})


@case("satis1-choices", "ex:satis1", "PAPER", "P([x,y,z]) = y and P([x,z,y]) = z when u(y), u(z) > u* > u(x)")
def _satis1() -> CaseOutcome:
    P = catalog(standard_universe(3), ["sat_list"])["sat_list"]
    return _expect({"xyz": apply(P, lst("x", "y", "z")), "xzy": apply(P, lst("x", "z", "y"))}, {"xyz": "y", "xzy": "z"})


@case("satis1-ext", "ex:satis1", "PAPER", "satisficing is not extensional, witnessed by [x,y,z] and [x,z,y]")
def _satis1_ext() -> CaseOutcome:
    P = catalog(standard_universe(3), ["sat_list"])["sat_list"]
    r = check_ext(P, EnumerationBudget(max_leaves=4), sets=[frozenset("xyz")])
    w = r.witness or {}
    return _expect(
        {"verdict": r.verdict, "pair": (w.get("a"), w.get("b")), "choices": (w.get("choice_a"), w.get("choice_b"))},
        {"verdict": FALSIFIED, "pair": (lst("x", "y", "z"), lst("x", "z", "y")), "choices": ("y", "z")},
        _witnesses(r),
    )


@case("satis1-sind-alpha", "ex:satis1", "PAPER", "satisficing is SIND and alphaE, so CC-rationalizable but not CF")
def _satis1_sind() -> CaseOutcome:
    P = catalog(standard_universe(3), ["sat_list"])["sat_list"]
    v = classify_procedure(P)
    return _expect(
        {"SIND": check_sind(P).verdict, "alphaE": v.alpha.verdict, "gammaE": v.gamma.verdict, "CF": v.cf_rationalizable, "CC": v.cc_rationalizable},
        {"SIND": HOLDS, "alphaE": HOLDS, "gammaE": HOLDS, "CF": False, "CC": True},
        {"relation": str(v.relation)},
    )


@case("T2satis", "ex:T2satis", "DERIVED", "List2 satisficing picks the left-most acceptable element")
def _t2satis() -> CaseOutcome:
    U = standard_universe(3)
    P = catalog(U, ["sat_list2"])["sat_list2"]
    a = T("Cat", T("Cat", T("Sing2", "x"), T("Sing2", "z")), T("Sing2", "y"))
    return _expect({"left_nested": apply(P, a), "xyz": apply(P, lst2("x", "y", "z")), "all_low": apply(P, lst2("x", "x"))},
                   {"left_nested": "z", "xyz": "y", "all_low": "x"})


@case("example-G", "example-G", "DERIVED", "conditional satisficing: known majority -> first known, else maximize")
def _example_g() -> CaseOutcome:
    U = standard_universe(4)
    P = catalog(U, ["cond_sat/List"])["cond_sat/List"]
    return _expect(
        {"zyx": apply(P, lst("z", "y", "x")), "zwy": apply(P, lst("z", "w", "y")), "wzyx": apply(P, lst("w", "z", "y", "x"))},
        {"zyx": "y", "zwy": "y", "wzyx": "x"},
        note="{z,y,x}: 2 of 3 known, first known is y; {z,w,y}: 1 of 3 known, maximize gives y; 2 of 4 is no majority",
    )


@case("example-C", "example-C", "PAPER", "default on large problems is EXT but not gammaE")
def _example_c() -> CaseOutcome:
    P = catalog(standard_universe(3), ["default_large"])["default_large"]
    ext, gamma = check_ext(P), check_gamma_e(P)
    return _expect({"EXT": ext.verdict, "gammaE": gamma.verdict, "xyz": apply(P, lst("x", "y", "z")), "xz": apply(P, lst("x", "z"))},
                   {"EXT": HOLDS, "gammaE": NO_WITNESS, "xyz": "z", "xz": "x"}, _witnesses(gamma))


@case("example-D", "example-D", "PAPER", "first option is INT and its correspondence is the identity")
def _example_d() -> CaseOutcome:
    U = standard_universe(3)
    P = catalog(U, ["first_list"])["first_list"]
    C = induced_correspondence(P)
    return _expect({"INT": check_int(P).verdict, "identity": all(C[A] == A for A in C), "menus": len(C)},
                   {"INT": HOLDS, "identity": True, "menus": 7})


@case("example-E", "example-E", "PAPER", "second option: [x,y,z] -> y; alphaE but not SIND")
def _example_e() -> CaseOutcome:
    P = catalog(standard_universe(3), ["second_list"])["second_list"]
    s = check_sind(P)
    return _expect({"xyz": apply(P, lst("x", "y", "z")), "alphaE": check_alpha_e(P).verdict, "SIND": s.verdict},
                   {"xyz": "y", "alphaE": HOLDS, "SIND": FALSIFIED}, _witnesses(s))


@case("example-bigproblem", "example-bigproblem", "DERIVED", "larger sub-problem bias follows the largest sub-tree")
def _example_big() -> CaseOutcome:
    P = catalog(standard_universe(3), ["bias_large/N1"])["bias_large/N1"]
    # {x,y} is the largest child but still above N, so its own tie sends it right
    return _expect({"a": apply(P, node("z", node("x", "y", "y"), "y")), "b": apply(P, node("z", node("x", "x", "y"), "y")),
                    "tie": apply(P, node("x", "y", "z"))},
                   {"a": "y", "b": "y", "tie": "z"})


@case("example-F", "example-F", "DERIVED", "smaller sub-problem bias follows the smallest sub-tree")
def _example_f() -> CaseOutcome:
    P = catalog(standard_universe(3), ["bias_small/N1"])["bias_small/N1"]
    return _expect({"a": apply(P, node(node("x", "y", "y"), "z", node("x", "y", "z"))), "tie": apply(P, node("x", "y", "z"))},
                   {"a": "z", "tie": "z"})


@case("example-H", "example-H", "DERIVED", "avoid x* on large problems by moving right")
def _example_h() -> CaseOutcome:
    P = catalog(standard_universe(3), ["avoid"])["avoid"]
    return _expect({"xy": apply(P, lst2("x", "y")), "xyz": apply(P, lst2("x", "y", "z")), "yx": apply(P, lst2("y", "x"))},
                   {"xy": "x", "xyz": "y", "yx": "y"})


# -- propositions ----------------------------------------------------------


@case("prop-sind-tiia-i", "prop-sind-tiia", "PAPER", "circular max is SIND but not TIIA, at the displayed tree")
def _sind_tiia_i() -> CaseOutcome:
    P = catalog(standard_universe(3), ["circular_max"])["circular_max"]
    a = circular_max_tree()
    b = EnumerationBudget(max_leaves=6)
    sind = check_sind(P, b)
    tiia = check_tiia(P, b, terms=[a])
    replaced = node("x", "x", node("x", "z", "z"))
    return _expect(
        {"P(a)": apply(P, a), "after_replacing_y": apply(P, replaced), "SIND": sind.verdict, "TIIA": tiia.verdict,
         "TIIA_witness": (tiia.witness or {}).get("a")},
        {"P(a)": "x", "after_replacing_y": "z", "SIND": HOLDS, "TIIA": NO_WITNESS, "TIIA_witness": a},
        _witnesses(tiia),
    )


@case("prop-sind-tiia-ii", "prop-sind-tiia", "PAPER", "larger sub-problem bias is TIIA but not SIND")
def _sind_tiia_ii() -> CaseOutcome:
    P = catalog(standard_universe(3), ["bias_large/N1"])["bias_large/N1"]
    b = EnumerationBudget(max_leaves=6)
    sind, tiia = check_sind(P, b), check_tiia(P, b)
    return _expect({"SIND": sind.verdict, "TIIA": tiia.verdict}, {"SIND": FALSIFIED, "TIIA": HOLDS}, _witnesses(sind),
                   note="with 7 leaves a tie between sub-tree sizes breaks TIIA (see ledger)")


def _matrix(names: Iterable[str], n: int, budget: EnumerationBudget, props: Iterable[str]) -> dict[str, dict[str, Verdict | None]]:
    out = {}
    for name, P in catalog(standard_universe(n), names).items():
        out[name] = {k: (None if r is None else r.verdict) for k, r in check_all(P, budget, props=props).items()}
    return out


@case("prop-ind-implies-alpha-i", "prop-ind-implies-alpha", "PAPER", "INT implies alphaE")
def _ia_i() -> CaseOutcome:
    m = _matrix(["first_list", "first_list2", "leftmost_tree", "wine_checklist"], 3, EnumerationBudget(), ["INT", "alphaE"])
    return _expect(m, {k: {"INT": HOLDS, "alphaE": HOLDS} for k in m})


@case("prop-ind-implies-alpha-ii", "prop-ind-implies-alpha", "PAPER", "EXT and SIND imply alphaE")
def _ia_ii() -> CaseOutcome:
    m = _matrix(["maximize/List", "maximize/Tree"], 4, EnumerationBudget(), ["EXT", "SIND", "alphaE"])
    return _expect(m, {k: {"EXT": HOLDS, "SIND": HOLDS, "alphaE": HOLDS} for k in m})


@case("prop-ind-implies-alpha-iii", "prop-ind-implies-alpha", "PAPER", "on substitutable types SIND and TIIA imply alphaE")
def _ia_iii() -> CaseOutcome:
    m = _matrix(["maximize/Tree", "leftmost_tree", "first_list2"], 3, EnumerationBudget(), ["SIND", "TIIA", "alphaE"])
    return _expect(m, {k: {"SIND": HOLDS, "TIIA": HOLDS, "alphaE": HOLDS} for k in m})


@case("prop-ind-implies-alpha-iv", "prop-ind-implies-alpha", "PAPER", "alphaE implies neither SIND nor INT")
def _ia_iv() -> CaseOutcome:
    m = _matrix(["second_list", "maximize/List", "sat_list"], 4, EnumerationBudget(), ["alphaE", "SIND", "INT"])
    return _expect(
        {"second_list": m["second_list"]["alphaE"], "second_list_SIND": m["second_list"]["SIND"],
         "maximize_INT": m["maximize/List"]["INT"], "maximize_alphaE": m["maximize/List"]["alphaE"],
         "sat_list_INT": m["sat_list"]["INT"], "sat_list_alphaE": m["sat_list"]["alphaE"]},
        {"second_list": HOLDS, "second_list_SIND": FALSIFIED, "maximize_INT": FALSIFIED, "maximize_alphaE": HOLDS,
         "sat_list_INT": FALSIFIED, "sat_list_alphaE": HOLDS},
    )


@case("prop-ind-implies-alpha-v", "prop-ind-implies-alpha", "PAPER", "TIIA does not imply alphaE (larger sub-problem bias)")
def _ia_v() -> CaseOutcome:
    P = catalog(standard_universe(3), ["bias_large/N2"])["bias_large/N2"]
    b = EnumerationBudget(max_leaves=6)
    tiia, alpha = check_tiia(P, b), check_alpha_e(P, b)
    return _expect({"TIIA": tiia.verdict, "alphaE": alpha.verdict}, {"TIIA": HOLDS, "alphaE": NO_WITNESS}, _witnesses(tiia, alpha),
                   note="the TIIA witness shrinks a sub-problem into the maximizing base case; see ledger")


@case("prop-ind-implies-alpha-vi", "prop-ind-implies-alpha", "PAPER", "alphaE does not imply TIIA (smaller sub-problem bias)")
def _ia_vi() -> CaseOutcome:
    P = catalog(standard_universe(3), ["bias_small/N1"])["bias_small/N1"]
    b = EnumerationBudget(max_leaves=7)
    tiia, alpha = check_tiia(P, b), check_alpha_e(P, b)
    # the displayed binary tree, padded to ternary nodes with a copy of the left leaf
    U6 = Universe.of("x", "y", "z", "v", "w", "u", rank=[6, 5, 4, 3, 2, 1])
    P6 = procedure("bias_small", U6, TREE, N=1, order="rank")
    padded = node(node("x", "x", node("y", "y", "z")), node("v", "v", node("w", "w", node("u", "u", "x"))), "x")
    return _expect(
        {"alphaE": alpha.verdict, "TIIA": tiia.verdict, "padded_choice": apply(P6, padded)},
        {"alphaE": HOLDS, "TIIA": NO_WITNESS},
        {**_witnesses(tiia), "padded_tree": padded},
        note="witness needs 7 leaves: equal sub-tree sizes send the choice to the third child",
    )


@case("prop-fac_gamma-i", "prop:fac_gamma", "PAPER", "INT implies gammaE; maximize is gammaE without INT")
def _fg_i() -> CaseOutcome:
    m = _matrix(["first_list", "second_list", "leftmost_tree", "maximize/List"], 3, EnumerationBudget(), ["INT", "gammaE"])
    exp = {k: {"INT": HOLDS, "gammaE": HOLDS} for k in m}
    exp["maximize/List"] = {"INT": FALSIFIED, "gammaE": HOLDS}
    return _expect(m, exp)


@case("prop-fac_gamma-ii", "prop:fac_gamma", "PAPER", "SIND implies gammaE on substitutable types; gammaE does not imply SIND")
def _fg_ii() -> CaseOutcome:
    m = _matrix(["maximize/Tree", "circular_max", "bias_small/N1"], 3, EnumerationBudget(), ["SIND", "gammaE"])
    return _expect(m, {"maximize/Tree": {"SIND": HOLDS, "gammaE": HOLDS}, "circular_max": {"SIND": HOLDS, "gammaE": HOLDS},
                       "bias_small/N1": {"SIND": FALSIFIED, "gammaE": HOLDS}})


@case("prop-fac_gamma-iii", "prop:fac_gamma", "PAPER", "EXT and gammaE are independent")
def _fg_iii() -> CaseOutcome:
    m = _matrix(["maximize/List", "default_large", "first_list"], 3, EnumerationBudget(), ["EXT", "gammaE"])
    return _expect(m, {"maximize/List": {"EXT": HOLDS, "gammaE": HOLDS}, "default_large": {"EXT": HOLDS, "gammaE": NO_WITNESS},
                       "first_list": {"EXT": FALSIFIED, "gammaE": HOLDS}})


def ext_equivalence_rows(n: int = 3, budget: EnumerationBudget | None = None) -> dict[str, dict[str, Verdict | None]]:
    """SIND, alphaE, gammaE verdicts of every catalog procedure that is EXT."""
    rows = {}
    for name, P in catalog(standard_universe(n)).items():
        if check_ext(P, budget).holds:
            rows[name] = {k: (None if r is None else r.verdict) for k, r in check_all(P, budget, props=("SIND", "alphaE", "gammaE")).items()}
    return rows


@case("prop-EXT_alleq", "prop:EXT_alleq", "PAPER", "under EXT, SIND, alphaE and gammaE coincide")
def _ext_alleq() -> CaseOutcome:
    rows = ext_equivalence_rows(3)
    agree = {name: len({v is HOLDS for v in r.values()}) == 1 for name, r in rows.items()}
    return _expect({"agree": agree, "procedures": sorted(rows)},
                   {"agree": {k: True for k in rows}, "procedures": ["default_large", "maximize/List", "maximize/List2", "maximize/Tree"]},
                   {"rows": rows})


def classification_rows(n: int = 3, names: Iterable[str] | None = None) -> dict[str, Any]:
    """Classify catalog procedures; route disagreements raise."""
    return {name: classify_procedure(P) for name, P in catalog(standard_universe(n), names).items()}


@case("prop-CFI_EXT", "prop:CFI_EXT", "PAPER", "a procedure implements a choice function iff it is EXT")
def _cfi_ext() -> CaseOutcome:
    rows = classification_rows(3)
    return _expect({n: v.cfi == v.ext.holds for n, v in rows.items()}, {n: True for n in rows})


@case("prop-choice_function_rational", "prop:choice_function_rational", "PAPER",
      "CF-rationalizable iff EXT and alphaE (checked against the order search)")
def _cf_rational() -> CaseOutcome:
    rows = classification_rows(3)
    obs = {n: v.cf_rationalizable for n, v in rows.items()}
    return _expect(obs, {n: n.startswith("maximize") for n in rows}, {n: str(v.order) for n, v in rows.items() if v.order})


@case("prop-pmax_gamma+", "prop:pmax_gamma+", "PAPER", "CC-rationalizable iff alphaE and gammaE (checked against the relation search)")
def _cc_rational() -> CaseOutcome:
    rows = classification_rows(3)
    obs = {n: v.cc_rationalizable for n, v in rows.items()}
    exp = {n: v.alpha.holds and v.gamma.holds for n, v in rows.items()}
    return _expect(obs, exp, {n: str(v.relation) for n, v in rows.items() if v.relation})


@case("corollary-ext-sind", "prop:choice_function_rational", "PAPER", "EXT and SIND procedures are CF-rationalizable")
def _cor_ext_sind() -> CaseOutcome:
    U = standard_universe(4)
    P = catalog(U, ["maximize/List", "maximize/Tree"])
    obs = {n: (check_ext(p).holds and check_sind(p).holds, classify_procedure(p).cf_rationalizable) for n, p in P.items()}
    return _expect(obs, {n: (True, True) for n in P})


@case("corollary-intensional", "corollary:intensional", "PAPER", "INT procedures are CC-rationalizable by total indifference")
def _cor_int() -> CaseOutcome:
    rows = classification_rows(3, ["first_list", "second_list", "first_list2", "leftmost_tree"])
    return _expect({n: (v.cc_rationalizable, v.relation is not None and v.relation.total_indifference) for n, v in rows.items()},
                   {n: (True, True) for n in rows})


@case("coro-SIND", "coro:SIND", "PAPER", "SIND and TIIA on a substitutable type give CC-rationalizability")
def _cor_sind() -> CaseOutcome:
    names = ["maximize/Tree", "leftmost_tree", "first_list2", "sat_list2"]
    m = _matrix(names, 3, EnumerationBudget(), ["SIND", "TIIA"])
    rows = classification_rows(3, names)
    obs = {n: (m[n]["SIND"], m[n]["TIIA"], rows[n].cc_rationalizable) for n in names}
    return _expect(obs, {n: (HOLDS, HOLDS, True) for n in names})


@case("correspondence-table", "def-choice-corr-proc", "PAPER", "the six-list table induces C({x,y,z}) = {x,y}")
def _corr_table() -> CaseOutcome:
    P = satisficing_table_procedure(standard_universe(3))
    C = induced_correspondence(P)
    return _expect({"C_xyz": C[frozenset("xyz")]}, {"C_xyz": frozenset("xy")})


# -- guarantees and meaning ------------------------------------------------


@case("satis2-ext", "ex:satis2", "PAPER", "satisficing on lists sorted by a fixed order is EXT and CF-rationalizable")
def _satis2() -> CaseOutcome:
    U = standard_universe(3)
    g = Guarantee.sorted_by("price")
    P = procedure("sat_list", U, LIST, g, u="u", threshold=0.5)
    v = classify_procedure(P)
    return _expect({"EXT": v.ext.verdict, "alphaE": v.alpha.verdict, "CF": v.cf_rationalizable},
                   {"EXT": HOLDS, "alphaE": HOLDS, "CF": True}, {"order": str(v.order)})


@case("checklist-wine", "sec:meaning", "PAPER", "choosing by checklist is INT and CC-rationalizable")
def _wine() -> CaseOutcome:
    P = catalog(standard_universe(3), ["wine_checklist"])["wine_checklist"]
    v = classify_procedure(P)
    a = T("Red", T("Dry", T("Wine", "x"), T("Wine", "y")), T("Wine", "z"))
    return _expect({"INT": check_int(P).verdict, "CC": v.cc_rationalizable, "choice": apply(P, a)},
                   {"INT": HOLDS, "CC": True, "choice": "y"}, {"relation": str(v.relation)})


@case("nested-wine", "sec:meaning", "PAPER", "the nested checklist picks the cheapest non-dry red wine")
def _nested_wine() -> CaseOutcome:
    U = wine_universe()
    P = procedure("wine_checklist_nested", U, WINES_OF_LISTS)
    a = wine_fixture(U)
    cheapest = min((w for w in U if U.attr(w, "red") and not U.attr(w, "dry")), key=lambda w: U.attr(w, "price"))
    return _expect({"choice": apply(P, a)}, {"choice": cheapest}, {"fixture": a})


@case("search-first", "sec:meaning", "PAPER", "first result of the first page; EXT under the rank guarantee")
def _search() -> CaseOutcome:
    U20 = search_universe(20)
    P20 = procedure("first_of_search", U20, RESULT)
    two_pages = search_result([[f"i{k}" for k in range(1, 11)], [f"i{k}" for k in range(11, 21)]])
    U = search_universe(4)
    g = Guarantee.sorted_by("rank", descending=True)
    P = procedure("first_of_search", U, result_schema(2), g)
    plain = procedure("first_of_search", U, result_schema(2))
    return _expect(
        {"item": apply(P20, two_pages), "EXT_guaranteed": check_ext(P).verdict, "EXT_plain": check_ext(plain).verdict},
        {"item": "i1", "EXT_guaranteed": HOLDS, "EXT_plain": FALSIFIED},
        note="extensionality is checked on two-item pages over four items",
    )


# ---------------------------------------------------------------------------
# Running

#: every in-scope anchor must be exercised by at least one case
MANIFEST: tuple[str, ...] = (
    "def-t-representation", "sub-sec-dec-prob", "example-max", "ex:satis1", "ex:T2satis", "example-G",
    "example-C", "example-D", "example-E", "example-bigproblem", "example-F", "example-H",
    "prop-sind-tiia", "prop-ind-implies-alpha", "prop:fac_gamma", "prop:EXT_alleq", "prop:CFI_EXT",
    "prop:choice_function_rational", "prop:pmax_gamma+", "corollary:intensional", "coro:SIND",
    "def-choice-corr-proc", "ex:satis2", "sec:meaning",
)


def uncovered_anchors(cases: Iterable[ReplicationCase] = CASES) -> list[str]:
    covered = {c.anchor for c in cases}
    return [a for a in MANIFEST if a not in covered]


def select_cases(pattern: str | None = None) -> list[ReplicationCase]:
    cases = sorted(CASES, key=lambda c: c.id)
    if not pattern:
        return cases
    return [c for c in cases if fnmatch.fnmatch(c.id, pattern) or pattern in c.id]


def run_case(c: ReplicationCase) -> CaseResult:
    t0 = time.perf_counter()
    try:
        outcome = c.run()
        err = None
    except (NotApplicable, ValueError, AssertionError) as exc:
        outcome, err = CaseOutcome(False), f"{type(exc).__name__}: {exc}\n{traceback.format_exc(limit=3)}"
    return CaseResult(c, outcome, time.perf_counter() - t0, err)


def run_replication_suite(filter: str | None = None) -> ReplicationReport:
    cases = select_cases(filter)
    results = [run_case(c) for c in cases]
    return ReplicationReport(results, uncovered_anchors() if not filter else [])


# helpers re-exported for tests and the command line
__all__ = [
    "CASES",
    "CATALOG",
    "MANIFEST",
    "ReplicationCase",
    "ReplicationReport",
    "catalog",
    "circular_max_tree",
    "classification_rows",
    "ext_equivalence_rows",
    "run_case",
    "run_replication_suite",
    "satisficing_table_procedure",
    "search_universe",
    "select_cases",
    "standard_universe",
    "uncovered_anchors",
    "wine_fixture",
    "wine_universe",
]

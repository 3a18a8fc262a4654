"""Decision procedures: total maps from terms to one of their alternatives,
defined by case analysis on constructors."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Mapping

from .adt import (
    AdtSchema,
    AltId,
    Child,
    Slot,
    Term,
    TermError,
    Universe,
    UniverseError,
    extension,
    format_term,
    leaves,
    validate_term,
)
from .guarantees import Guarantee, guarantee_filter

__all__ = [
    "KINDS",
    "Procedure",
    "ProcedureError",
    "ProcedureSpec",
    "apply",
    "guarantee_filter",
    "instantiate_procedure",
    "lift_choice_function",
]


class ProcedureError(ValueError):
    """Bad procedure parameters, or a kind applied to the wrong schema."""


class GuaranteeViolation(TermError):
    pass


@dataclass(frozen=True)
class ProcedureSpec:
    kind: str
    params: Mapping[str, Any] = field(default_factory=dict)
    guarantee: Guarantee | None = None

    def describe(self) -> dict[str, Any]:
        params = {k: v for k, v in self.params.items() if isinstance(v, (str, int, float, bool, list, tuple))}
        out: dict[str, Any] = {"kind": self.kind, "params": params}
        if self.guarantee is not None:
            out["guarantee"] = str(self.guarantee)
        return out


class Procedure:
    """A procedure instantiated on a schema and universe; call it on terms."""

    def __init__(self, spec: ProcedureSpec, universe: Universe, schema: AdtSchema, fn: Callable[[Term], AltId]):
        self.spec = spec
        self.universe = universe
        self.schema = schema
        self._fn = lru_cache(maxsize=1 << 17)(fn)

    @property
    def name(self) -> str:
        return self.spec.kind

    @property
    def guarantee(self) -> Guarantee | None:
        return self.spec.guarantee

    def __call__(self, a: Term) -> AltId:
        return self._fn(a)

    def __repr__(self) -> str:
        return f"Procedure({self.spec.kind}, schema={self.schema.name})"


def apply(P: Procedure, a: Term, *, validate: bool = True, enforce_guarantee: bool = False) -> AltId:
    """Run ``P`` on ``a``; optionally validate the term and its guarantee."""
    if validate:
        validate_term(P.schema, a, P.universe)
    if enforce_guarantee and P.guarantee is not None and not P.guarantee.accepts(a, P.universe):
        raise GuaranteeViolation(f"{format_term(a)} violates guarantee {P.guarantee}")
    x = P(a)
    if x not in extension(a):
        raise AssertionError(f"{P.name} chose {x!r} outside the extension of {format_term(a)}")
    return x


# ---------------------------------------------------------------------------
# Strict orders and parameter helpers


def order_key(universe: Universe, attribute: str | None) -> Callable[[AltId], tuple]:
    """Sort key whose minimum is the ``≻``-maximum: attribute descending,
    ties broken by universe index; without an attribute, index alone."""
    if attribute is None:
        return universe.index
    universe.require_attr(attribute)

    def key(x: AltId) -> tuple:
        return (-float(universe.attr(x, attribute)), universe.index(x))

    return key


def _best(key: Callable[[AltId], Any]) -> Callable[[Any], AltId]:
    return lambda xs: min(xs, key=key)


def _num(params: Mapping[str, Any], name: str, default: Any = None, cast: type = float) -> Any:
    v = params.get(name, default)
    if v is None:
        raise ProcedureError(f"missing parameter {name!r}")
    try:
        out = cast(v)
    except (TypeError, ValueError):
        raise ProcedureError(f"parameter {name!r} must be {cast.__name__}, got {v!r}") from None
    if cast is float and (out != out or out in (float("inf"), float("-inf"))):
        raise ProcedureError(f"parameter {name!r} must be finite")
    return out


def _alt(params: Mapping[str, Any], name: str, universe: Universe) -> AltId:
    v = params.get(name)
    if v is None:
        raise ProcedureError(f"missing parameter {name!r}")
    if v not in universe:
        raise ProcedureError(f"parameter {name!r}: {v!r} is not in the universe")
    return v


def _attr(params: Mapping[str, Any], name: str, universe: Universe, default: str | None = None) -> str:
    v = params.get(name, default)
    if v is None:
        raise ProcedureError(f"missing parameter {name!r}")
    try:
        universe.require_attr(v)
    except UniverseError as exc:
        raise ProcedureError(str(exc)) from None
    return v


def _size(t: Child) -> int:
    return len(extension(t))


# ---------------------------------------------------------------------------
# Schema roles (matched by slot signature, not by constructor name)


def _sig(sch: AdtSchema) -> dict[tuple[Slot, ...], list[str]]:
    out: dict[tuple[Slot, ...], list[str]] = {}
    for c in sch.constructors:
        out.setdefault(c.slots, []).append(c.name)
    return out


X, R = Slot.VALUE, Slot.REC


def _roles(sch: AdtSchema, kind: str, wanted: dict[str, tuple[Slot, ...]], nested: bool = False) -> dict[str, str]:
    sig = _sig(sch)
    if nested != (sch.inner is not None) or set(sig) != set(wanted.values()):
        raise ProcedureError(f"{kind} does not apply to schema {sch.name}")
    if any(len(v) != 1 for v in sig.values()):
        raise ProcedureError(f"{kind} does not apply to schema {sch.name}")
    return {role: sig[s][0] for role, s in wanted.items()}


def _list_roles(sch: AdtSchema, kind: str, nested: bool = False) -> tuple[str, str]:
    r = _roles(sch, kind, {"sing": (X,), "cons": (X, R)}, nested)
    return r["sing"], r["cons"]


def _list2_roles(sch: AdtSchema, kind: str) -> tuple[str, str]:
    r = _roles(sch, kind, {"sing": (X,), "cat": (R, R)})
    return r["sing"], r["cat"]


def _tree_roles(sch: AdtSchema, kind: str) -> tuple[str, str]:
    r = _roles(sch, kind, {"leaf": (X,), "node": (R, R, R)})
    return r["leaf"], r["node"]


# ---------------------------------------------------------------------------
# The catalog.  Each builder returns the term -> alternative function.

Builder = Callable[[Mapping[str, Any], Universe, AdtSchema], Callable[[Term], AltId]]
KINDS: dict[str, Builder] = {}


def _kind(name: str):
    def deco(fn: Builder) -> Builder:
        KINDS[name] = fn
        return fn

    return deco


@_kind("maximize")
def _maximize(params, universe, sch):
    best = _best(order_key(universe, params.get("order") and _attr(params, "order", universe)))

    def P(a: Child) -> AltId:
        if not isinstance(a, Term):
            return a
        return best([P(c) for c in a.args])

    return P


@_kind("circular_max")
def _circular_max(params, universe, sch):
    """Maximize a possibly cyclic relation: each element of ``cycle`` beats
    the next one (the last beats the first); other pairs fall back to the
    strict order.  When no child choice beats all others, the first child's
    choice is kept."""
    cycle = params.get("cycle")
    if isinstance(cycle, str):
        cycle = [c.strip() for c in cycle.split(",") if c.strip()]
    if not cycle or len(cycle) < 2:
        raise ProcedureError("circular_max needs a 'cycle' of at least two alternatives")
    for c in cycle:
        if c not in universe:
            raise ProcedureError(f"cycle element {c!r} is not in the universe")
    pos = {c: i for i, c in enumerate(cycle)}
    key = order_key(universe, params.get("order"))

    def beats(p: AltId, q: AltId) -> bool:
        if p in pos and q in pos:
            return pos[q] == (pos[p] + 1) % len(cycle)
        return key(p) < key(q)

    def P(a: Child) -> AltId:
        if not isinstance(a, Term):
            return a
        choices = [P(c) for c in a.args]
        distinct = list(dict.fromkeys(choices))
        winners = [p for p in distinct if all(p == q or beats(p, q) for q in distinct)]
        return winners[0] if len(winners) == 1 else choices[0]

    return P


def _satisficer(u: Callable[[AltId], float], threshold: float, sing: str, cons: str) -> Callable[[Term], AltId]:
    def P(a: Term) -> AltId:
        while a.ctor == cons:
            x, rest = a.args
            if u(x) >= threshold:
                return x  # type: ignore[return-value]
            a = rest  # type: ignore[assignment]
        return a.args[0]  # type: ignore[return-value]

    return P


def _satisficer2(u: Callable[[AltId], float], threshold: float, sing: str, cat: str) -> Callable[[Term], AltId]:
    def P(a: Term) -> AltId:
        if a.ctor == sing:
            return a.args[0]  # type: ignore[return-value]
        left = P(a.args[0])  # type: ignore[arg-type]
        return left if u(left) >= threshold else P(a.args[1])  # type: ignore[arg-type]

    return P


@_kind("sat_list")
def _sat_list(params, universe, sch):
    sing, cons = _list_roles(sch, "sat_list")
    attr = _attr(params, "u", universe)
    return _satisficer(lambda x: float(universe.attr(x, attr)), _num(params, "threshold"), sing, cons)


@_kind("sat_list2")
def _sat_list2(params, universe, sch):
    sing, cat = _list2_roles(sch, "sat_list2")
    attr = _attr(params, "u", universe)
    return _satisficer2(lambda x: float(universe.attr(x, attr)), _num(params, "threshold"), sing, cat)


@_kind("cond_sat")
def _cond_sat(params, universe, sch):
    """Known-majority satisficing on List or List2, else maximize."""
    attr = _attr(params, "known", universe, "known")
    known = frozenset(x for x in universe if universe.attr(x, attr))
    u = lambda x: 1.0 if x in known else 0.0  # noqa: E731
    if sch.has_constructor("Cat") or _sig(sch).get((R, R)):
        first_known = _satisficer2(u, 0.5, *_list2_roles(sch, "cond_sat"))
    else:
        first_known = _satisficer(u, 0.5, *_list_roles(sch, "cond_sat"))
    best = _best(order_key(universe, params.get("order")))

    def P(a: Term) -> AltId:
        ext = extension(a)
        if 2 * len(ext & known) > len(ext):
            return first_known(a)
        return best(ext)

    return P


@_kind("default_large")
def _default_large(params, universe, sch):
    default = _alt(params, "default", universe)
    n = _num(params, "N", cast=int)
    if n < 1:
        raise ProcedureError("N must be >= 1")
    best = _best(order_key(universe, params.get("order")))

    def P(a: Term) -> AltId:
        ext = extension(a)
        if default in ext and len(ext) > n:
            return default
        return best(ext)

    return P


@_kind("first_list")
def _first_list(params, universe, sch):
    _list_roles(sch, "first_list")
    return lambda a: a.args[0]


@_kind("first_list2")
def _first_list2(params, universe, sch):
    sing, cat = _list2_roles(sch, "first_list2")

    def P(a: Term) -> AltId:
        while a.ctor == cat:
            a = a.args[0]  # type: ignore[assignment]
        return a.args[0]  # type: ignore[return-value]

    return P


@_kind("second_list")
def _second_list(params, universe, sch):
    sing, cons = _list_roles(sch, "second_list")

    def P(a: Term) -> AltId:
        if a.ctor == sing:
            return a.args[0]  # type: ignore[return-value]
        return a.args[1].args[0]  # type: ignore[union-attr,return-value]

    return P


@_kind("second_list2")
def _second_list2(params, universe, sch):
    sing, cat = _list2_roles(sch, "second_list2")

    def P(a: Term) -> AltId:
        if a.ctor == sing:
            return a.args[0]  # type: ignore[return-value]
        left, right = a.args
        if left.ctor == sing:  # type: ignore[union-attr]
            return P(right)  # type: ignore[arg-type]
        return P(left)  # type: ignore[arg-type]

    return P


@_kind("leftmost_tree")
def _leftmost_tree(params, universe, sch):
    _tree_roles(sch, "leftmost_tree")
    return lambda a: leaves(a)[0]


def _bias(params, universe, sch, kind: str, prefer: Callable[[int, int, int], bool]):
    leaf, nodec = _tree_roles(sch, kind)
    n = _num(params, "N", 1, int)
    if n < 1:
        raise ProcedureError("N must be >= 1")
    best = _best(order_key(universe, params.get("order")))

    def P(a: Term) -> AltId:
        ext = extension(a)
        if len(ext) <= n:
            return best(ext)
        t1, t2, t3 = a.args
        s1, s2, s3 = _size(t1), _size(t2), _size(t3)
        if prefer(s1, s2, s3):
            return P(t1)  # type: ignore[arg-type]
        if prefer(s2, s1, s3):
            return P(t2)  # type: ignore[arg-type]
        return P(t3)  # type: ignore[arg-type]

    return P


@_kind("bias_large")
def _bias_large(params, universe, sch):
    return _bias(params, universe, sch, "bias_large", lambda s, p, q: s > max(p, q))


@_kind("bias_small")
def _bias_small(params, universe, sch):
    return _bias(params, universe, sch, "bias_small", lambda s, p, q: s < min(p, q))


@_kind("avoid")
def _avoid(params, universe, sch):
    sing, cat = _list2_roles(sch, "avoid")
    bad = _alt(params, "avoid", universe)
    n = _num(params, "N", cast=int)
    if n < 1:
        raise ProcedureError("N must be >= 1")

    def P(a: Term) -> AltId:
        if a.ctor == sing:
            return a.args[0]  # type: ignore[return-value]
        left = P(a.args[0])  # type: ignore[arg-type]
        if left != bad or _size(a) <= n:
            return left
        return P(a.args[1])  # type: ignore[arg-type]

    return P


def _wine_roles(params, sch: AdtSchema, kind: str, nested: bool) -> tuple[str, int, int]:
    red = params.get("red", "Red")
    dry = params.get("dry", "Dry")
    sig = _sig(sch)
    if (sch.inner is not None) != nested or not sch.has_constructor(red) or not sch.has_constructor(dry):
        raise ProcedureError(f"{kind} does not apply to schema {sch.name}")
    if sch.constructor(red).slots != (R, R) or sch.constructor(dry).slots != (R, R) or len(sig.get((X,), [])) != 1:
        raise ProcedureError(f"{kind} does not apply to schema {sch.name}")
    if len(sch.constructors) != 3:
        raise ProcedureError(f"{kind} does not apply to schema {sch.name}")
    branches = {"left": 0, "right": 1}
    try:
        rb = branches[params.get("red_branch", "left")]
        db = branches[params.get("dry_branch", "right")]
    except KeyError as exc:
        raise ProcedureError(f"branch must be 'left' or 'right', got {exc.args[0]!r}") from None
    return red, rb, db


@_kind("wine_checklist")
def _wine_checklist(params, universe, sch):
    """Red nodes follow ``red_branch`` (default left), dry nodes follow
    ``dry_branch`` (default right)."""
    red, rb, db = _wine_roles(params, sch, "wine_checklist", nested=False)

    def P(a: Child) -> AltId:
        while isinstance(a, Term) and len(a.args) == 2:
            a = a.args[rb] if a.ctor == red else a.args[db]
        return a.args[0] if isinstance(a, Term) else a  # type: ignore[return-value]

    return P


@_kind("wine_checklist_nested")
def _wine_checklist_nested(params, universe, sch):
    red, rb, db = _wine_roles(params, sch, "wine_checklist_nested", nested=True)
    _list_roles(sch.inner, "wine_checklist_nested")  # type: ignore[arg-type]

    def P(a: Term) -> AltId:
        while len(a.args) == 2:
            a = a.args[rb] if a.ctor == red else a.args[db]  # type: ignore[assignment]
        return a.args[0].args[0]  # type: ignore[union-attr,return-value]

    return P


@_kind("first_of_search")
def _first_of_search(params, universe, sch):
    _list_roles(sch, "first_of_search", nested=True)
    pg = sch.inner
    if pg is None or len(pg.constructors) != 1 or pg.inner is None or Slot.REC in pg.constructors[0].slots:
        raise ProcedureError(f"first_of_search does not apply to schema {sch.name}")
    _roles(pg.inner, "first_of_search", {"item": (X,)})

    def first_of_page(p: Term) -> AltId:
        return p.args[0].args[0]  # type: ignore[union-attr,return-value]

    # R1 p -> first_of_page p ; R2 p ps -> first_of_page p
    return lambda a: first_of_page(a.args[0])  # type: ignore[arg-type]


@_kind("table")
def _table(params, universe, sch):
    """Explicit ``term -> choice`` entries; unlisted terms use ``fallback``
    (another kind, default ``leftmost``: the first leaf)."""
    from .sexpr import parse_term

    raw = params.get("table")
    if raw is None:
        raise ProcedureError("table needs a 'table' parameter")
    if isinstance(raw, str):
        import json
        from pathlib import Path

        raw = json.loads(Path(raw).read_text())
    table: dict[Term, AltId] = {}
    for k, v in dict(raw).items():
        t = k if isinstance(k, Term) else parse_term(sch, universe, k)
        if v not in extension(t):
            raise ProcedureError(f"table entry {format_term(t)} -> {v!r} chooses outside the extension")
        table[t] = v
    fb_kind = params.get("fallback", "leftmost")
    if fb_kind == "leftmost":
        fallback: Callable[[Term], AltId] = lambda a: leaves(a)[0]  # noqa: E731
    else:
        fb_params = {k[len("fallback."):]: v for k, v in params.items() if k.startswith("fallback.")}
        fallback = _build(fb_kind, fb_params, universe, sch)

    return lambda a: table[a] if a in table else fallback(a)


@_kind("lifted")
def _lifted(params, universe, sch):
    c = params.get("choice")
    if c is None:
        raise ProcedureError("lifted needs a 'choice' function")
    choose = c if callable(c) else c.__getitem__

    def P(a: Term) -> AltId:
        A = extension(a)
        try:
            x = choose(A)
        except KeyError:
            raise ProcedureError(f"choice function undefined on {sorted(A)}") from None
        if x not in A:
            raise ProcedureError(f"choice function picks {x!r} outside {sorted(A)}")
        return x

    return P


def _build(kind: str, params: Mapping[str, Any], universe: Universe, sch: AdtSchema) -> Callable[[Term], AltId]:
    if kind not in KINDS:
        raise ProcedureError(f"unknown procedure kind {kind!r}")
    return KINDS[kind](params, universe, sch)


def instantiate_procedure(spec: ProcedureSpec, universe: Universe, schema: AdtSchema) -> Procedure:
    fn = _build(spec.kind, spec.params, universe, schema)
    if spec.guarantee is not None:
        spec.guarantee.check_universe(universe)
    return Procedure(spec, universe, schema, fn)


def procedure(kind: str, universe: Universe, schema: AdtSchema, guarantee: Guarantee | None = None, **params: Any) -> Procedure:
    """Convenience wrapper around :func:`instantiate_procedure`."""
    return instantiate_procedure(ProcedureSpec(kind, params, guarantee), universe, schema)


def lift_choice_function(c: Mapping[frozenset, AltId] | Callable[[frozenset], AltId], universe: Universe, schema: AdtSchema) -> Procedure:
    """The canonical procedure ``a -> c(extension(a))``."""
    return instantiate_procedure(ProcedureSpec("lifted", {"choice": c}), universe, schema)

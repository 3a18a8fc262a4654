"""Algebraic datatype schemas, terms over a universe of alternatives, and the
basic operations on them (extension, equivalence, substitution, renaming and
canonical representations).

Terms are plain named tuples ``Term(ctor, args)``; a child is either an
alternative id (``str``) sitting in a value slot, a ``Term`` of the same
schema in a recursive slot, or, for nested schemas, a ``Term`` of the inner
schema in a value slot.
"""

from __future__ import annotations

import enum
import json
import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable, Mapping, NamedTuple, Sequence, Union

log = logging.getLogger(__name__)

AltId = str
_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_'.\-]*$|^[0-9]+$")


class SchemaError(ValueError):
    """Malformed schema text or schema definition."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TermError(ValueError):
    """A term does not conform to its schema or universe."""


class UniverseError(ValueError):
    pass


class RepresentationError(ValueError):
    """A set cannot be represented by the schema."""


class Slot(enum.Enum):
    VALUE = "X"
    REC = "T"


@dataclass(frozen=True)
class ConstructorSpec:
    name: str
    slots: tuple[Slot, ...]

    def __post_init__(self) -> None:
        if not self.slots:
            raise SchemaError(f"constructor {self.name!r} has zero arity")

    @property
    def arity(self) -> int:
        return len(self.slots)

    @property
    def is_base(self) -> bool:
        return Slot.REC not in self.slots

    @property
    def is_expanding(self) -> bool:
        return self.arity >= 2 and Slot.REC in self.slots

    def __str__(self) -> str:
        return f"{self.name}: " + ", ".join(s.value for s in self.slots)


@dataclass(frozen=True)
class AdtSchema:
    name: str
    constructors: tuple[ConstructorSpec, ...]
    inner: AdtSchema | None = None

    def __post_init__(self) -> None:
        if not self.constructors:
            raise SchemaError(f"schema {self.name!r} has no constructors")
        names = [c.name for c in self.constructors]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise SchemaError(f"duplicate constructor name(s) {', '.join(dupes)}")

    def constructor(self, name: str) -> ConstructorSpec:
        for c in self.constructors:
            if c.name == name:
                return c
        raise KeyError(name)

    def has_constructor(self, name: str) -> bool:
        return any(c.name == name for c in self.constructors)

    @property
    def depth(self) -> int:
        return 1 if self.inner is None else 1 + self.inner.depth

    def __str__(self) -> str:
        return format_schema(self)


def schema(name: str, *ctors: tuple[str, str], inner: AdtSchema | None = None) -> AdtSchema:
    """Shorthand: ``schema("List", ("Sing", "X"), ("Cons", "X T"))``."""
    specs = []
    for cname, slots in ctors:
        kinds = tuple(Slot(s) for s in slots.replace(",", " ").split())
        specs.append(ConstructorSpec(cname, kinds))
    return AdtSchema(name, tuple(specs), inner)


# ---------------------------------------------------------------------------
# Schema files


def parse_schema(text: str, library: Mapping[str, AdtSchema] | None = None) -> AdtSchema:
    """Parse schema-file text and return its first schema.

    Lines are ``schema <Name>``, ``<Ctor>: <slot>(, <slot>)*`` with slots
    ``X``/``T``, and an optional ``inner <Name>`` footer.  ``;`` separates
    lines as well as newlines; ``#`` starts a comment.  Further ``schema``
    blocks in the same text, and ``library``, resolve ``inner`` references.
    """
    blocks: list[dict[str, Any]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        for part in raw.split("#", 1)[0].split(";"):
            line = part.strip()
            if not line:
                continue
            head, _, rest = line.partition(" ")
            if head == "schema":
                name = rest.strip()
                if not _IDENT.match(name):
                    raise SchemaError(f"bad schema name {name!r}", lineno)
                blocks.append({"name": name, "ctors": [], "inner": None, "line": lineno, "names": {}})
                continue
            if not blocks:
                raise SchemaError("expected 'schema <Name>' header", lineno)
            block = blocks[-1]
            if head == "inner":
                block["inner"] = (rest.strip(), lineno)
                continue
            if ":" not in line:
                raise SchemaError(f"expected '<Constructor>: <slots>', got {line!r}", lineno)
            cname, _, slots_txt = line.partition(":")
            cname = cname.strip()
            if not _IDENT.match(cname):
                raise SchemaError(f"bad constructor name {cname!r}", lineno)
            if cname in block["names"]:
                raise SchemaError(f"duplicate constructor name {cname!r}", lineno)
            toks = [t.strip() for t in slots_txt.replace(",", " ").split()]
            if not toks:
                raise SchemaError(f"constructor {cname!r} has zero arity", lineno)
            bad = [t for t in toks if t not in ("X", "T")]
            if bad:
                raise SchemaError(f"unknown slot kind {bad[0]!r} (expected X or T)", lineno)
            block["names"][cname] = lineno
            block["ctors"].append(ConstructorSpec(cname, tuple(Slot(t) for t in toks)))
    if not blocks:
        raise SchemaError("empty schema text", 1)

    known: dict[str, AdtSchema] = dict(library or {})
    pending = {b["name"]: b for b in blocks}
    building: set[str] = set()

    def build(name: str, ref_line: int) -> AdtSchema:
        if name in pending:
            if name in building:
                raise SchemaError(f"cyclic inner reference through {name!r}", ref_line)
            b = pending[name]
            building.add(name)
            if not b["ctors"]:
                raise SchemaError(f"schema {name!r} has no constructors", b["line"])
            inner = build(*b["inner"]) if b["inner"] else None
            building.discard(name)
            sch = AdtSchema(name, tuple(b["ctors"]), inner)
            known[name] = sch
            del pending[name]
            return sch
        if name in known:
            return known[name]
        raise SchemaError(f"unknown inner schema {name!r}", ref_line)

    return build(blocks[0]["name"], blocks[0]["line"])


def format_schema(sch: AdtSchema) -> str:
    lines = [f"schema {sch.name}"]
    lines += [str(c) for c in sch.constructors]
    if sch.inner is not None:
        lines.append(f"inner {sch.inner.name}")
        lines.append("")
        lines.append(format_schema(sch.inner))
    return "\n".join(lines)


@dataclass(frozen=True)
class SchemaFlags:
    flat: bool
    productive: bool
    substitutable: bool
    expandable: bool
    representable: bool
    # "productive and non-flat", the weaker textbook condition
    productive_nonflat: bool
    notes: tuple[str, ...] = ()

    def as_dict(self) -> dict[str, Any]:
        return {
            "flat": self.flat,
            "productive": self.productive,
            "substitutable": self.substitutable,
            "expandable": self.expandable,
            "representable": self.representable,
            "productive_nonflat": self.productive_nonflat,
            "notes": list(self.notes),
        }


def analyze_schema(sch: AdtSchema) -> SchemaFlags:
    ctors = sch.constructors
    flat = all(c.is_base for c in ctors)
    productive = any(c.is_base for c in ctors)
    substitutable = all(c.arity == 1 for c in ctors if Slot.VALUE in c.slots)
    expandable = any(c.is_expanding for c in ctors)
    representable = productive and expandable
    notes = []
    if sch.inner is not None:
        inner = analyze_schema(sch.inner)
        # an outer base constructor can wrap an arbitrarily large inner term
        representable = productive and (expandable or inner.representable)
        substitutable = False
        notes.append(f"nested over {sch.inner.name}; substitution is not defined on nested terms")
    nonflat = productive and not flat
    if nonflat and not representable:
        notes.append(
            "productive and non-flat, yet no constructor combines a recursive slot with a "
            "second slot: every finite term has a bounded number of leaves, so large sets "
            "are not representable"
        )
    return SchemaFlags(flat, productive, substitutable, expandable, representable, nonflat, tuple(notes))


# ---------------------------------------------------------------------------
# Universe


@dataclass(frozen=True)
class Universe:
    """Ordered alternatives with attributes; order gives the tie-break index."""

    ids: tuple[AltId, ...]
    attrs: Mapping[AltId, Mapping[str, float | bool]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.ids:
            raise UniverseError("universe must be non-empty")
        if len(set(self.ids)) != len(self.ids):
            raise UniverseError("universe ids must be pairwise distinct")
        for x in self.ids:
            if not _IDENT.match(x) or x == "_":
                raise UniverseError(f"bad alternative id {x!r}")
        object.__setattr__(self, "_index", {x: i for i, x in enumerate(self.ids)})

    @classmethod
    def of(cls, *ids: AltId, **columns: Sequence[float | bool]) -> Universe:
        """``Universe.of("x", "y", u=[1, 2])`` builds attributes column-wise."""
        attrs = {x: {k: col[i] for k, col in columns.items()} for i, x in enumerate(ids)}
        return cls(tuple(ids), attrs)

    @classmethod
    def from_json(cls, data: str | Mapping[str, Any]) -> Universe:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            elements = data["elements"]
            ids = tuple(str(e["id"]) for e in elements)
            attrs = {str(e["id"]): dict(e.get("attrs", {})) for e in elements}
        except (KeyError, TypeError) as exc:
            raise UniverseError(f"malformed universe document: {exc}") from exc
        for x, a in attrs.items():
            for k, v in a.items():
                if not isinstance(v, (int, float, bool)):
                    raise UniverseError(f"attribute {k!r} of {x!r} must be a number or boolean")
        return cls(ids, attrs)

    def to_json(self) -> dict[str, Any]:
        return {"elements": [{"id": x, "attrs": dict(self.attrs.get(x, {}))} for x in self.ids]}

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self):
        return iter(self.ids)

    def __contains__(self, x: object) -> bool:
        return x in self._index  # type: ignore[attr-defined]

    def index(self, x: AltId) -> int:
        return self._index[x]  # type: ignore[attr-defined]

    def attr(self, x: AltId, name: str) -> float | bool:
        try:
            return self.attrs[x][name]
        except KeyError:
            raise UniverseError(f"alternative {x!r} has no attribute {name!r}") from None

    def require_attr(self, name: str) -> None:
        missing = [x for x in self.ids if name not in self.attrs.get(x, {})]
        if missing:
            raise UniverseError(f"attribute {name!r} missing on {', '.join(missing)}")

    def sort(self, xs: Iterable[AltId]) -> tuple[AltId, ...]:
        return tuple(sorted(set(xs), key=self.index))

    def subsets(self, max_size: int | None = None, min_size: int = 1) -> list[frozenset[AltId]]:
        """Non-empty subsets, by size then lexicographically by index."""
        from itertools import combinations

        top = len(self.ids) if max_size is None else min(max_size, len(self.ids))
        return [frozenset(c) for k in range(min_size, top + 1) for c in combinations(self.ids, k)]


# ---------------------------------------------------------------------------
# Terms


class Term(NamedTuple):
    ctor: str
    args: tuple[Union["Term", AltId], ...]

    def __str__(self) -> str:
        return format_term(self)


Child = Union[Term, AltId]


def T(ctor: str, *args: Child) -> Term:
    return Term(ctor, tuple(args))


def format_term(t: Child) -> str:
    if isinstance(t, Term):
        return "(" + " ".join([t.ctor] + [format_term(a) for a in t.args]) + ")"
    return str(t)


def leaves(t: Child) -> tuple[AltId, ...]:
    """Left-to-right sequence of alternatives (innermost, for nested terms)."""
    out: list[AltId] = []
    stack: list[Child] = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Term):
            stack.extend(reversed(node.args))
        else:
            out.append(node)
    return tuple(out)


@lru_cache(maxsize=1 << 18)
def extension(t: Child) -> frozenset[AltId]:
    if isinstance(t, Term):
        if len(t.args) == 1:
            return extension(t.args[0])
        return frozenset().union(*(extension(a) for a in t.args))
    return frozenset((t,))


def equivalent(a: Term, b: Term) -> bool:
    return extension(a) == extension(b)


def skeleton(t: Child) -> Child:
    """Constructor skeleton: every alternative replaced by ``_``."""
    if isinstance(t, Term):
        return Term(t.ctor, tuple(skeleton(a) for a in t.args))
    return "_"


def depth(t: Child) -> int:
    if isinstance(t, Term):
        return 1 + max(depth(a) for a in t.args)
    return 0


def validate_term(sch: AdtSchema, t: Child, universe: Universe | None = None) -> Term:
    """Check ``t`` against ``sch`` (and ``universe``); return it unchanged."""
    if not isinstance(t, Term):
        raise TermError(f"expected a {sch.name} term, got bare value {t!r}")
    if not sch.has_constructor(t.ctor):
        raise TermError(f"unknown constructor {t.ctor!r} for schema {sch.name}")
    spec = sch.constructor(t.ctor)
    if len(t.args) != spec.arity:
        raise TermError(
            f"arity mismatch: {t.ctor} takes {spec.arity} argument(s), got {len(t.args)}"
        )
    for i, (kind, child) in enumerate(zip(spec.slots, t.args), start=1):
        if kind is Slot.REC:
            if not isinstance(child, Term):
                raise TermError(f"slot-kind mismatch: argument {i} of {t.ctor} must be a {sch.name} term")
            validate_term(sch, child, universe)
        elif sch.inner is not None:
            if not isinstance(child, Term):
                raise TermError(
                    f"slot-kind mismatch: argument {i} of {t.ctor} must be a {sch.inner.name} term"
                )
            validate_term(sch.inner, child, universe)
        else:
            if isinstance(child, Term):
                raise TermError(f"slot-kind mismatch: argument {i} of {t.ctor} must be an alternative")
            if universe is not None and child not in universe:
                raise TermError(f"unknown alternative {child!r}")
    return t


def rename_value(a: Child, x: AltId, y: AltId) -> Child:
    """``a[y/x]``: replace every leaf equal to ``x`` by ``y``."""
    if isinstance(a, Term):
        return Term(a.ctor, tuple(rename_value(c, x, y) for c in a.args))
    return y if a == x else a


def substitute_subproblem(sch: AdtSchema, a: Term, x: AltId, b: Term) -> Term:
    """``a[b/x]``: replace each unary-constructor occurrence of ``x`` by ``b``.

    Only defined on substitutable schemas.  If ``x`` does not occur in ``a``
    the term is returned unchanged (and a debug note is logged).
    """
    if not analyze_schema(sch).substitutable:
        raise SchemaError(f"schema {sch.name} is not substitutable")
    if x not in extension(a):
        log.debug("substitute_subproblem: %s does not occur in %s", x, format_term(a))
        return a
    return _subst(a, x, b)


def _subst(a: Term, x: AltId, b: Term) -> Term:
    if len(a.args) == 1 and not isinstance(a.args[0], Term):
        return b if a.args[0] == x else a
    return Term(a.ctor, tuple(_subst(c, x, b) if isinstance(c, Term) else c for c in a.args))


# ---------------------------------------------------------------------------
# Canonical representations


def canonical_representation(
    sch: AdtSchema, A: Iterable[AltId], universe: Universe | None = None, order: Sequence[AltId] | None = None
) -> Term:
    """Deterministic term with extension exactly ``A``.

    ``A`` is sorted by universe index (or by ``order``, e.g. a guarantee's
    order).  ``r({x})`` fills the first all-value constructor with ``x``;
    ``r({a1} | rest)`` uses the first constructor with a recursive slot and
    at least two slots: value slots get ``a1``; the first recursive slot gets
    ``r(rest)`` when a value slot exists, otherwise the first recursive slot
    gets ``r({a1})`` and the second ``r(rest)``; leftover recursive slots get
    ``r({a1})``.
    """
    members = set(A)
    if not members:
        raise RepresentationError("cannot represent the empty set")
    if order is not None:
        pos = {x: i for i, x in enumerate(order)}
        seq = tuple(sorted(members, key=lambda x: pos[x]))
    elif universe is not None:
        seq = universe.sort(members)
    else:
        seq = tuple(sorted(members))
    flags = analyze_schema(sch)
    if not flags.productive:
        raise RepresentationError(f"schema {sch.name} is not productive: no finite terms")
    if flags.representable:
        return _canon(sch, seq)
    # bounded capacity: fall back to the first enumerated representation
    from .enumeration import EnumerationBudget, enumerate_representations, max_leaf_capacity

    cap = max_leaf_capacity(sch)
    if len(seq) > cap:
        raise RepresentationError(
            f"schema {sch.name} cannot represent {len(seq)} alternatives (capacity {cap})"
        )
    for t in enumerate_representations(sch, seq, EnumerationBudget(max_leaves=cap)):
        return t
    raise RepresentationError(f"schema {sch.name} cannot represent {set(seq)}")


def _canon_value(sch: AdtSchema, x: AltId) -> Child:
    return x if sch.inner is None else _canon(sch.inner, (x,))


def _canon(sch: AdtSchema, seq: tuple[AltId, ...]) -> Term:
    flags = analyze_schema(sch)
    if len(seq) == 1 or (not flags.expandable and sch.inner is not None):
        base = next(c for c in sch.constructors if c.is_base)
        if len(seq) == 1:
            return Term(base.name, tuple(_canon_value(sch, seq[0]) for _ in base.slots))
        # outer grammar cannot grow: put the whole set into one inner term
        inner = _canon(sch.inner, seq)  # type: ignore[arg-type]
        return Term(base.name, tuple(inner for _ in base.slots))
    head, rest = seq[0], seq[1:]
    rec = next(c for c in sch.constructors if c.is_expanding)
    has_value = Slot.VALUE in rec.slots
    args: list[Child] = []
    rec_seen = 0
    for kind in rec.slots:
        if kind is Slot.VALUE:
            args.append(_canon_value(sch, head))
            continue
        rec_seen += 1
        if has_value:
            args.append(_canon(sch, rest) if rec_seen == 1 else _canon(sch, (head,)))
        elif rec_seen == 2:
            args.append(_canon(sch, rest))
        else:
            args.append(_canon(sch, (head,)))
    return Term(rec.name, tuple(args))

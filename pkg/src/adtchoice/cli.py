"""Command-line interface.

Exit status: 0 success (property holds, rationalization found, all cases
pass); 1 falsified / no witness / none found / a case failed; 2 usage or
input errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .adt import AdtSchema, SchemaError, TermError, Universe, UniverseError, analyze_schema, format_schema, format_term, parse_schema
from .enumeration import BudgetError, EnumerationBudget, count_representations, enumerate_representations
from .guarantees import Guarantee
from .procedures import KINDS, ProcedureError, ProcedureSpec, apply, instantiate_procedure
from .properties import PROPERTIES, NotApplicable, check, check_ext, property_name
from .rationality import (
    RouteDisagreement,
    classify_procedure,
    induced_choice_function,
    induced_correspondence,
    rationalize_choice_function,
    rationalize_correspondence,
)
from .schemas import BUILTINS
from .sexpr import parse_term


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # let main() map this to exit status 2
        self.print_usage(sys.stderr)
        raise UsageError(message)


# ---------------------------------------------------------------------------
# Inputs


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


class Inputs:
    """Resolved schema/universe plus their digests for the report."""

    def __init__(self) -> None:
        self.schema: AdtSchema | None = None
        self.universe: Universe | None = None
        self.digests: dict[str, Any] = {}

    def load_schema(self, ref: str | None) -> AdtSchema:
        if ref is None:
            raise UsageError("--schema is required")
        if ref in BUILTINS and not Path(ref).exists():
            self.schema = BUILTINS[ref]
            text = format_schema(self.schema)
        else:
            text = _read(ref)
            self.schema = parse_schema(text, BUILTINS)
        self.digests["schema"] = {"name": self.schema.name, "source": ref, "digest": _digest(text)}
        return self.schema

    def load_universe(self, path: str | None, fallback_ids: Sequence[str] | None = None) -> Universe:
        if path is None:
            if not fallback_ids:
                raise UsageError("--universe is required")
            self.universe = Universe(tuple(fallback_ids))
            text = json.dumps(self.universe.to_json(), sort_keys=True)
        else:
            text = _read(path)
            try:
                self.universe = Universe.from_json(text)
            except json.JSONDecodeError as exc:
                raise UsageError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
        self.digests["universe"] = {"size": len(self.universe), "source": path, "digest": _digest(text)}
        return self.universe


def _value(text: str) -> Any:
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def _params(items: Sequence[str] | None) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for item in items or ():
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects key=value, got {item!r}")
        out[key.strip()] = _value(val.strip())
    return out


def _guarantee(text: str | None) -> Guarantee | None:
    if text is None:
        return None
    try:
        return Guarantee.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _budget(args) -> EnumerationBudget:
    kw: dict[str, Any] = {}
    if args.max_leaves is not None:
        kw["max_leaves"] = args.max_leaves
    if args.max_terms is not None:
        kw["max_terms"] = args.max_terms
    return EnumerationBudget(**kw)


def _set(text: str | None, universe: Universe | None = None) -> frozenset[str] | None:
    if text is None:
        return None
    ids = [s.strip() for s in text.split(",") if s.strip()]
    if not ids:
        raise UsageError("--set must name at least one alternative")
    if universe is not None:
        missing = [x for x in ids if x not in universe]
        if missing:
            raise UsageError(f"--set: {', '.join(missing)} not in the universe")
    return frozenset(ids)


def _procedure(args, inputs: Inputs):
    sch = inputs.load_schema(args.schema)
    U = inputs.load_universe(args.universe)
    if args.procedure is None:
        raise UsageError("--procedure is required")
    spec = ProcedureSpec(args.procedure, _params(args.param), _guarantee(args.guarantee))
    return instantiate_procedure(spec, U, sch)


# ---------------------------------------------------------------------------
# Commands. Each returns (exit status, results, human-readable lines).


def cmd_schema_check(args, inputs: Inputs):
    sch = inputs.load_schema(args.schema)
    flags = analyze_schema(sch)
    lines = [f"schema {sch.name}: " + ", ".join(f"{k}={v}" for k, v in flags.as_dict().items() if k != "notes")]
    lines += [f"  note: {n}" for n in flags.notes]
    return 0, {"schema": format_schema(sch), "flags": flags.as_dict()}, lines


def cmd_proc_run(args, inputs: Inputs):
    P = _procedure(args, inputs)
    if args.term is None:
        raise UsageError("--term is required")
    a = parse_term(P.schema, P.universe, args.term)
    x = apply(P, a, enforce_guarantee=args.enforce_guarantee)
    return 0, {"term": format_term(a), "choice": x, "procedure": P.spec.describe()}, [x]


def cmd_enum(args, inputs: Inputs):
    sch = inputs.load_schema(args.schema)
    A = _set(args.set)
    if A is None:
        raise UsageError("--set is required")
    U = inputs.load_universe(args.universe, sorted(A) if args.universe is None else None)
    A = _set(args.set, U)
    budget = _budget(args)
    g = _guarantee(args.guarantee)
    terms = [format_term(t) for t in enumerate_representations(sch, A, budget, U, g)]  # type: ignore[arg-type]
    counts = count_representations(sch, A, budget, U, g)  # type: ignore[arg-type]
    return 0, {"set": U.sort(A), "count": len(terms), "counts_by_leaves": counts, "terms": terms}, terms  # type: ignore[arg-type]


def cmd_check(args, inputs: Inputs):
    P = _procedure(args, inputs)
    budget = _budget(args)
    props = args.property or list(PROPERTIES)
    kw: dict[str, Any] = {}
    if args.set is not None:
        kw["sets"] = [_set(args.set, P.universe)]
    if args.term is not None:
        kw["terms"] = [parse_term(P.schema, P.universe, args.term)]
    reports, lines, status = [], [], 0
    for name in props:
        prop = property_name(name)
        extra = {} if prop == "SIND" else kw  # SIND quantifies over constructors, not sets
        try:
            r = check(prop, P, budget, **extra)
        except NotApplicable as exc:
            reports.append({"property": prop, "verdict": "NotApplicable", "reason": str(exc)})
            lines.append(f"{prop}: not applicable ({exc})")
            continue
        reports.append(r.to_json())
        lines.append(str(r))
        if not r.holds:
            status = 1
    return status, {"procedure": P.spec.describe(), "reports": reports}, lines


def cmd_rationalize(args, inputs: Inputs):
    P = _procedure(args, inputs)
    budget = _budget(args)
    if args.kind == "function":
        c = induced_choice_function(P, guarantee=P.guarantee, budget=budget)
        ext = check_ext(P, budget)
        # a procedure that is not EXT implements no choice function at all
        rel = rationalize_choice_function(c) if ext.holds else None
        data = {"kind": "function", "choice_function": c.to_json(), "EXT": ext.to_json()}
    else:
        C = induced_correspondence(P, budget)
        rel = rationalize_correspondence(C)
        data = {"kind": "correspondence", "correspondence": C.to_json()}
    data["relation"] = None if rel is None else rel.to_json()
    line = f"{args.kind}: " + ("none" if rel is None else str(rel))
    return (0 if rel is not None else 1), data, [line]


def cmd_classify(args, inputs: Inputs):
    P = _procedure(args, inputs)
    v = classify_procedure(P, _budget(args))
    return 0, v.to_json(), [v.summary()]


def cmd_replicate(args, inputs: Inputs):
    from .replication import run_replication_suite

    report = run_replication_suite(args.filter)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.case.id}  ({r.case.provenance}) {r.case.claim}" for r in report.results]
    if report.uncovered:
        lines.append("uncovered anchors: " + ", ".join(report.uncovered))
    lines.append(f"{len(report.results) - len(report.failures)}/{len(report.results)} cases passed")
    return (0 if report.passed else 1), report.to_json(), lines


# ---------------------------------------------------------------------------
# Parser


def _common(p: argparse.ArgumentParser, *, procedure: bool = True, budget: bool = True) -> None:
    p.add_argument("--schema", help="schema file or builtin name (" + ", ".join(BUILTINS) + ")")
    p.add_argument("--universe", help="universe JSON file")
    if procedure:
        p.add_argument("--procedure", help="procedure kind (" + ", ".join(KINDS) + ")")
        p.add_argument("--param", action="append", metavar="KEY=VALUE", help="procedure parameter (repeatable)")
    p.add_argument("--guarantee", help="sorted_by:<attr>:<asc|desc> or no_duplicates")
    if budget:
        p.add_argument("--max-leaves", type=int)
        p.add_argument("--max-terms", type=int)
    p.add_argument("--out", metavar="PATH", help="write a JSON report here")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="adtchoice", description="Decision procedures on algebraic datatypes.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    schema = sub.add_parser("schema", help="schema tools")
    schema_sub = schema.add_subparsers(dest="action", required=True, parser_class=_Parser)
    sc = schema_sub.add_parser("check", help="parse a schema and report its flags")
    sc.add_argument("--schema")
    sc.add_argument("--out", metavar="PATH")
    sc.set_defaults(func=cmd_schema_check)

    proc = sub.add_parser("proc", help="procedure tools")
    proc_sub = proc.add_subparsers(dest="action", required=True, parser_class=_Parser)
    run = proc_sub.add_parser("run", help="apply a procedure to one term")
    _common(run, budget=False)
    run.add_argument("--term", help="term as an s-expression")
    run.add_argument("--enforce-guarantee", action="store_true", help="reject terms violating --guarantee")
    run.set_defaults(func=cmd_proc_run)

    enum = sub.add_parser("enum", help="list the representations of a set")
    _common(enum, procedure=False)
    enum.add_argument("--set", help="comma-separated alternatives")
    enum.set_defaults(func=cmd_enum)

    chk = sub.add_parser("check", help="check procedural properties")
    _common(chk)
    chk.add_argument("--property", action="append", choices=PROPERTIES, help="property to check (repeatable; default all)")
    chk.add_argument("--set", help="restrict the universal domain to representations of this set")
    chk.add_argument("--term", help="check at this single term")
    chk.set_defaults(func=cmd_check)

    rat = sub.add_parser("rationalize", help="rationalize the induced choice function or correspondence")
    _common(rat)
    rat.add_argument("--kind", choices=("function", "correspondence"), default="correspondence")
    rat.set_defaults(func=cmd_rationalize)

    cls = sub.add_parser("classify", help="full rationality classification")
    _common(cls)
    cls.set_defaults(func=cmd_classify)

    rep = sub.add_parser("replicate", help="run the replication suite")
    rep.add_argument("--filter", metavar="PATTERN", help="case id glob or substring")
    rep.add_argument("--out", metavar="PATH")
    rep.set_defaults(func=cmd_replicate)
    return parser


def _write_atomic(path: str, doc: dict[str, Any]) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=".report-", suffix=".json")
    with os.fdopen(fd, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=False)
        fh.write("\n")
    os.replace(tmp, target)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"adtchoice: error: {exc}", file=sys.stderr)
        return 2
    inputs = Inputs()
    t0 = time.perf_counter()
    try:
        status, results, lines = args.func(args, inputs)
    except (UsageError, SchemaError, TermError, UniverseError, ProcedureError, BudgetError, NotApplicable) as exc:
        print(f"adtchoice: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"adtchoice: error: {exc}", file=sys.stderr)
        return 2
    except RouteDisagreement as exc:
        print(f"adtchoice: internal error: {exc}", file=sys.stderr)
        return 3
    if not getattr(args, "out", None):
        for line in lines:
            print(line)
    else:
        doc = {
            "tool": {"name": "adtchoice", "version": __version__},
            "command": argv,
            "inputs": inputs.digests,
            "exit_status": status,
            "results": results,
            "timing": {"seconds": round(time.perf_counter() - t0, 4)},
        }
        _write_atomic(args.out, doc)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

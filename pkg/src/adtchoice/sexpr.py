"""Reading terms from s-expression text."""

from __future__ import annotations

import re
from typing import Union

from .adt import AdtSchema, Term, TermError, Universe, validate_term

SExpr = Union[str, list]

_TOKEN = re.compile(r"\s*(?:(\()|(\))|([^\s()]+))")


class ParseError(TermError):
    pass


def read(text: str) -> SExpr:
    """Read exactly one s-expression."""
    pos = 0
    stack: list[list] = []
    result: SExpr | None = None
    n = len(text)
    while True:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"unexpected input at offset {pos}")
            break
        pos = m.end()
        lpar, rpar, atom = m.groups()
        if result is not None and not stack:
            raise ParseError(f"trailing input after expression at offset {m.start()}")
        if lpar:
            stack.append([])
        elif rpar:
            if not stack:
                raise ParseError(f"unbalanced ')' at offset {m.start()}")
            done = stack.pop()
            if stack:
                stack[-1].append(done)
            else:
                result = done
        else:
            if stack:
                stack[-1].append(atom)
            else:
                result = atom
        if pos >= n:
            break
    if stack:
        raise ParseError("unbalanced '(' : expression not closed")
    if result is None:
        raise ParseError("empty input")
    return result


def _to_term(e: SExpr) -> Union[Term, str]:
    if isinstance(e, str):
        return e
    if not e:
        raise ParseError("empty list '()' is not a term")
    head, *rest = e
    if not isinstance(head, str):
        raise ParseError("constructor position must hold a name")
    return Term(head, tuple(_to_term(x) for x in rest))


def parse_term(sch: AdtSchema, universe: Universe | None, text: str) -> Term:
    """Parse and validate a term, e.g. ``(Cons x1 (Sing x2))``."""
    t = _to_term(read(text))
    return validate_term(sch, t, universe)

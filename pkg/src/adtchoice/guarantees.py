"""Guarantees: restrictions on which representations may occur."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence

from .adt import AltId, Child, Universe, UniverseError, leaves


@dataclass(frozen=True)
class Guarantee:
    """``sorted_by`` (strict, on the left-to-right leaf sequence) or
    ``no_duplicates``."""

    kind: str
    attribute: str | None = None
    descending: bool = False

    def __post_init__(self) -> None:
        if self.kind not in ("sorted_by", "no_duplicates"):
            raise ValueError(f"unknown guarantee kind {self.kind!r}")
        if self.kind == "sorted_by" and not self.attribute:
            raise ValueError("sorted_by needs an attribute")

    @classmethod
    def sorted_by(cls, attribute: str, descending: bool = False) -> Guarantee:
        return cls("sorted_by", attribute, descending)

    @classmethod
    def no_duplicates(cls) -> Guarantee:
        return cls("no_duplicates")

    @classmethod
    def parse(cls, text: str) -> Guarantee:
        """``sorted_by:<attr>:<asc|desc>`` or ``no_duplicates``."""
        parts = text.split(":")
        if parts == ["no_duplicates"]:
            return cls.no_duplicates()
        if len(parts) == 3 and parts[0] == "sorted_by" and parts[2] in ("asc", "desc"):
            return cls.sorted_by(parts[1], parts[2] == "desc")
        raise ValueError(f"bad guarantee {text!r}; expected sorted_by:<attr>:<asc|desc> or no_duplicates")

    def __str__(self) -> str:
        if self.kind == "no_duplicates":
            return "no_duplicates"
        return f"sorted_by:{self.attribute}:{'desc' if self.descending else 'asc'}"

    def check_universe(self, universe: Universe) -> None:
        if self.kind == "sorted_by":
            universe.require_attr(self.attribute)  # type: ignore[arg-type]
            for x in universe:
                v = universe.attr(x, self.attribute)  # type: ignore[arg-type]
                if isinstance(v, bool) or not isinstance(v, (int, float)):
                    raise UniverseError(f"sorted_by needs a numeric attribute; {x}.{self.attribute} = {v!r}")

    def accepts_word(self, word: Sequence[AltId], universe: Universe) -> bool:
        if self.kind == "no_duplicates":
            return len(set(word)) == len(word)
        vals = [universe.attr(x, self.attribute) for x in word]  # type: ignore[arg-type]
        if self.descending:
            return all(a > b for a, b in zip(vals, vals[1:]))
        return all(a < b for a, b in zip(vals, vals[1:]))

    def accepts(self, term: Child, universe: Universe) -> bool:
        return self.accepts_word(leaves(term), universe)

    def order(self, xs: Iterable[AltId], universe: Universe) -> tuple[AltId, ...]:
        """``xs`` in the order a guaranteed representation lists them."""
        xs = universe.sort(xs)
        if self.kind == "no_duplicates":
            return xs
        return tuple(sorted(xs, key=lambda x: universe.attr(x, self.attribute), reverse=self.descending))  # type: ignore[arg-type]

    def candidate_words(self, atoms: Sequence[AltId], n: int, universe: Universe) -> list[tuple[AltId, ...]]:
        """All words of length ``n`` onto ``atoms`` that satisfy the guarantee."""
        if n != len(atoms):
            return []
        if self.kind == "no_duplicates":
            return list(permutations(atoms))
        word = self.order(atoms, universe)
        return [word] if self.accepts_word(word, universe) else []


def guarantee_filter(g: Guarantee, a: Child, universe: Universe) -> bool:
    return g.accepts(a, universe)

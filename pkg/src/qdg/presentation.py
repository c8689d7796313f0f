"""Semigroup presentations and words.

Words are tuples of generator names.  Single-character alphabets can be
written as plain strings (``"xax"``) anywhere a word is accepted; the
tokenizer splits them into letters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

Word = tuple[str, ...]
WordLike = Union[str, Sequence[str]]

SEPARATOR = ","


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    """A machine-readable invariant violation."""

    code: str
    message: str
    location: object = None

    def as_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "location": self.location}


def as_word(w: WordLike) -> Word:
    if isinstance(w, str):
        return tuple(w)
    return tuple(w)


def word_str(w: Sequence[str]) -> str:
    if all(len(s) == 1 for s in w):
        return "".join(w)
    return " ".join(w)


def count_letter(w: WordLike, p: str) -> int:
    """Number of occurrences of the letter ``p`` in ``w``."""
    return sum(1 for s in as_word(w) if s == p)


@dataclass(frozen=True)
class Relation:
    lhs: Word
    rhs: Word

    def __post_init__(self):
        object.__setattr__(self, "lhs", as_word(self.lhs))
        object.__setattr__(self, "rhs", as_word(self.rhs))


@dataclass(frozen=True)
class SemigroupPresentation:
    generators: tuple[str, ...]
    relations: tuple[Relation, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(sorted(set(self.generators))))
        rels = tuple(r if isinstance(r, Relation) else Relation(*r) for r in self.relations)
        object.__setattr__(self, "relations", rels)

    def allows(self, top: Sequence[str], bottom: Sequence[str]) -> bool:
        """True if a transistor may carry labels ``top``/``bottom``.

        Relations are symmetric at the diagram level.
        """
        top, bottom = tuple(top), tuple(bottom)
        return any(
            (r.lhs == top and r.rhs == bottom) or (r.lhs == bottom and r.rhs == top)
            for r in self.relations
        )

    def oriented_relations(self) -> list[tuple[Word, Word]]:
        """Every relation in both directions, deduplicated, in input order."""
        out: list[tuple[Word, Word]] = []
        for r in self.relations:
            for pair in ((r.lhs, r.rhs), (r.rhs, r.lhs)):
                if pair not in out:
                    out.append(pair)
        return out

    def single_letter(self) -> bool:
        return all(len(g) == 1 for g in self.generators)

    def to_json(self) -> dict:
        if self.single_letter():
            rels = [["".join(r.lhs), "".join(r.rhs)] for r in self.relations]
        else:
            rels = [[list(r.lhs), list(r.rhs)] for r in self.relations]
        return {"generators": list(self.generators), "relations": rels}

    @classmethod
    def from_json(cls, obj: dict) -> "SemigroupPresentation":
        try:
            gens = list(obj["generators"])
            raw = obj["relations"]
        except (KeyError, TypeError) as exc:
            raise PresentationError(f"malformed presentation object: {exc}") from None
        single = all(isinstance(g, str) and len(g) == 1 for g in gens)
        rels = []
        for side_pair in raw:
            if len(side_pair) != 2:
                raise PresentationError("a relation has exactly two sides")
            sides = []
            for side in side_pair:
                if isinstance(side, str):
                    if not single:
                        raise PresentationError(
                            "string relation sides need single-character generators"
                        )
                    sides.append(tuple(side))
                else:
                    sides.append(tuple(side))
            rels.append(Relation(*sides))
        return cls(tuple(gens), tuple(rels))

    def __str__(self) -> str:
        rels = ", ".join(f"{word_str(r.lhs)} = {word_str(r.rhs)}" for r in self.relations)
        return f"<{', '.join(self.generators)} | {rels}>"


def validate(p: SemigroupPresentation) -> list[Violation]:
    """Return every invariant violation of ``p`` (empty list means ok)."""
    out = []
    for g in p.generators:
        if not g or any(c.isspace() for c in g) or SEPARATOR in g:
            out.append(Violation("bad-generator", f"invalid generator name {g!r}", g))
    alphabet = set(p.generators)
    for i, r in enumerate(p.relations):
        for side in (r.lhs, r.rhs):
            if not side:
                out.append(Violation("empty-side", "relation sides must be nonempty", i))
            for s in side:
                if s not in alphabet:
                    out.append(Violation("unknown-letter", f"letter {s!r} not in alphabet", i))
        if r.lhs == r.rhs:
            out.append(Violation("reflexive-relation", "relations of shape (u,u) are forbidden", i))
    return out


def make_standard_presentation(kind: str, n: int | None = None) -> SemigroupPresentation:
    """Presentations used throughout: ``"QV"``, ``"V"`` or ``"n-ary"`` (with ``n``).

    QV-base is <x, a | x = xax>, V-base is <x | x = x^2> and n-ary(n) is
    <x, a | x = x^n a>.
    """
    key = kind.lower().replace("_", "-")
    if key in ("qv", "qv-base"):
        return SemigroupPresentation(("x", "a"), (Relation(("x",), ("x", "a", "x")),))
    if key in ("v", "v-base"):
        return SemigroupPresentation(("x",), (Relation(("x",), ("x", "x")),))
    if key in ("n-ary", "nary"):
        if n is None or n < 2:
            raise PresentationError("n-ary presentations need n >= 2")
        return SemigroupPresentation(("x", "a"), (Relation(("x",), ("x",) * n + ("a",)),))
    raise PresentationError(f"unknown presentation kind {kind!r}")


QV_BASE = make_standard_presentation("QV")
V_BASE = make_standard_presentation("V")


def erase_from_presentation(p: SemigroupPresentation, letter: str) -> SemigroupPresentation:
    """Delete ``letter`` from every relation side.

    Raises if a side becomes empty or a relation becomes reflexive.
    """
    rels: list[Relation] = []
    for r in p.relations:
        lhs = tuple(s for s in r.lhs if s != letter)
        rhs = tuple(s for s in r.rhs if s != letter)
        if not lhs or not rhs:
            raise PresentationError(f"erasing {letter!r} empties a side of {r}")
        if lhs == rhs:
            raise PresentationError(f"erasing {letter!r} makes {r} reflexive")
        rel = Relation(lhs, rhs)
        if rel not in rels:
            rels.append(rel)
    gens = tuple(g for g in p.generators if g != letter)
    return SemigroupPresentation(gens, tuple(rels))


def parse_word(text: WordLike, p: SemigroupPresentation | None = None) -> Word:
    """Tokenize a word.  Comma/space separated names are split on separators."""
    if not isinstance(text, str):
        return tuple(text)
    if SEPARATOR in text or " " in text.strip():
        return tuple(t for t in text.replace(SEPARATOR, " ").split() if t)
    if p is not None and not p.single_letter():
        raise PresentationError("multi-character alphabets need separated words")
    return tuple(text)


def words_equal_up_to_permutation(u: Iterable[str], v: Iterable[str]) -> bool:
    return sorted(u) == sorted(v)

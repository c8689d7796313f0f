"""Braided diagrams over semigroup presentations.

A diagram is stored as pure incidence data: a label per wire id, the ordered
wire ids hitting the top and bottom of the frame, and for every transistor the
ordered wire ids on its top and bottom sides.  A wire listed on the *top* side
of a transistor has its bottom end there (it runs upward from the transistor);
a wire on the *bottom* side has its top end there.  No crossing data is kept.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

from .presentation import (
    PresentationError,
    SemigroupPresentation,
    Violation,
    Word,
    erase_from_presentation,
)

FRAME_TOP = "frame-top"
FRAME_BOTTOM = "frame-bottom"
T_TOP = "transistor-top"
T_BOTTOM = "transistor-bottom"

FLAVORS = ("full", "bottom-unordered", "bottom-cyclic")


class DiagramError(ValueError):
    """Invalid diagram data or an operation on incompatible diagrams."""

    def __init__(self, message, violations: Sequence[Violation] = (), code="invalid-diagram"):
        super().__init__(message)
        self.violations = list(violations)
        self.code = code


class Port(NamedTuple):
    owner: str
    index: int
    tid: int | None = None


@dataclass(frozen=True)
class Transistor:
    id: int
    top: tuple[int, ...]
    bottom: tuple[int, ...]

    @property
    def top_arity(self) -> int:
        return len(self.top)

    @property
    def bottom_arity(self) -> int:
        return len(self.bottom)


@dataclass(frozen=True, eq=False)
class Diagram:
    presentation: SemigroupPresentation
    wires: Mapping[int, str]
    transistors: tuple[Transistor, ...]
    frame_top: tuple[int, ...]
    frame_bottom: tuple[int, ...]
    annular: bool = False

    def __post_init__(self):
        object.__setattr__(self, "wires", dict(self.wires))
        object.__setattr__(self, "transistors", tuple(self.transistors))
        object.__setattr__(self, "frame_top", tuple(self.frame_top))
        object.__setattr__(self, "frame_bottom", tuple(self.frame_bottom))
        if not self.frame_top or not self.frame_bottom:
            raise DiagramError("frame sides need at least one contact", code="empty-frame")

    # -- incidence views -------------------------------------------------

    @cached_property
    def by_id(self) -> dict[int, Transistor]:
        return {t.id: t for t in self.transistors}

    @cached_property
    def ends(self) -> dict[int, tuple[Port | None, Port | None]]:
        """wire id -> (top end, bottom end)."""
        top: dict[int, Port] = {}
        bot: dict[int, Port] = {}
        for i, w in enumerate(self.frame_top):
            top[w] = Port(FRAME_TOP, i)
        for i, w in enumerate(self.frame_bottom):
            bot[w] = Port(FRAME_BOTTOM, i)
        for t in self.transistors:
            for i, w in enumerate(t.bottom):
                top[w] = Port(T_BOTTOM, i, t.id)
            for i, w in enumerate(t.top):
                bot[w] = Port(T_TOP, i, t.id)
        return {w: (top.get(w), bot.get(w)) for w in self.wires}

    def labels(self, wire_ids: Iterable[int]) -> Word:
        return tuple(self.wires[w] for w in wire_ids)

    def top_label_of(self, t: Transistor) -> Word:
        return self.labels(t.top)

    def bottom_label_of(self, t: Transistor) -> Word:
        return self.labels(t.bottom)

    @cached_property
    def covers(self) -> dict[int, set[int]]:
        """tid -> ids of transistors directly above it (T1 below T2 via a wire)."""
        up: dict[int, set[int]] = {t.id: set() for t in self.transistors}
        for t in self.transistors:
            for w in t.top:
                end = self.ends[w][0]
                if end is not None and end.owner == T_BOTTOM:
                    up[t.id].add(end.tid)
        return up

    @cached_property
    def topological_order(self) -> list[int] | None:
        """Transistor ids listed bottom-up, or None if the order has a cycle."""
        indeg = {t.id: 0 for t in self.transistors}
        for t, ups in self.covers.items():
            for u in ups:
                indeg[u] += 1
        ready = sorted(t for t, d in indeg.items() if d == 0)
        order = []
        while ready:
            t = ready.pop(0)
            order.append(t)
            for u in sorted(self.covers[t]):
                indeg[u] -= 1
                if indeg[u] == 0:
                    ready.append(u)
        return order if len(order) == len(indeg) else None

    def with_(self, **changes) -> "Diagram":
        args = dict(
            presentation=self.presentation,
            wires=self.wires,
            transistors=self.transistors,
            frame_top=self.frame_top,
            frame_bottom=self.frame_bottom,
            annular=self.annular,
        )
        args.update(changes)
        return Diagram(**args)

    def __repr__(self) -> str:
        return (
            f"Diagram({''.join(top_label(self))} -> {''.join(bottom_label(self))}, "
            f"{len(self.transistors)} transistors)"
        )


# -- construction helpers ---------------------------------------------------


def permutation_diagram(
    presentation: SemigroupPresentation, word: Sequence[str], perm: Sequence[int] | None = None,
    annular: bool = False,
) -> Diagram:
    """Diagram without transistors.  Wire i runs from top position i to bottom position perm[i]."""
    word = tuple(word)
    n = len(word)
    perm = list(range(n)) if perm is None else list(perm)
    if sorted(perm) != list(range(n)):
        raise DiagramError("perm is not a permutation", code="bad-permutation")
    bottom = [0] * n
    for i, j in enumerate(perm):
        bottom[j] = i
    return Diagram(presentation, dict(enumerate(word)), (), tuple(range(n)), tuple(bottom), annular)


def identity_diagram(presentation, word, annular=False) -> Diagram:
    return permutation_diagram(presentation, word, None, annular)


def single_transistor_diagram(
    presentation: SemigroupPresentation,
    word: Sequence[str],
    positions: Sequence[int],
    bottom: Sequence[str],
) -> Diagram:
    """One transistor fed by the frame-top wires at ``positions`` (in that order).

    Its bottom side carries ``bottom``; the new wires are spliced into the
    frame bottom where the first consumed wire sat.
    """
    word = tuple(word)
    n = len(word)
    if len(set(positions)) != len(positions) or not all(0 <= p < n for p in positions):
        raise DiagramError("positions must be distinct frame-top indices", code="bad-positions")
    wires = dict(enumerate(word))
    new = list(range(n, n + len(bottom)))
    for w, s in zip(new, bottom):
        wires[w] = s
    t = Transistor(0, tuple(positions), tuple(new))
    used = set(positions)
    first = min(positions)
    fb: list[int] = []
    for i in range(n):
        if i == first:
            fb.extend(new)
        if i not in used:
            fb.append(i)
    d = Diagram(presentation, wires, (t,), tuple(range(n)), tuple(fb))
    _raise_if_invalid(d)
    return d


# -- validation ---------------------------------------------------------------


def validate_diagram(d: Diagram) -> list[Violation]:
    """All invariant violations of ``d``; an empty list means the diagram is valid."""
    out: list[Violation] = []
    if not d.wires:
        out.append(Violation("no-wires", "a diagram has at least one wire"))
    alphabet = set(d.presentation.generators)
    for w, s in d.wires.items():
        if s not in alphabet:
            out.append(Violation("unknown-letter", f"wire {w} label {s!r} not in alphabet", w))
    tops: dict[int, int] = {}
    bots: dict[int, int] = {}
    ids = [t.id for t in d.transistors]
    if len(set(ids)) != len(ids):
        out.append(Violation("duplicate-transistor", "transistor ids repeat", ids))
    for w in d.frame_top:
        tops[w] = tops.get(w, 0) + 1
    for w in d.frame_bottom:
        bots[w] = bots.get(w, 0) + 1
    for t in d.transistors:
        if not t.top or not t.bottom:
            out.append(Violation("empty-side", f"transistor {t.id} has an empty side", t.id))
        for w in t.bottom:
            tops[w] = tops.get(w, 0) + 1
        for w in t.top:
            bots[w] = bots.get(w, 0) + 1
    for w in set(tops) | set(bots):
        if w not in d.wires:
            out.append(Violation("unknown-wire", f"port references unknown wire {w}", w))
    for w in d.wires:
        if tops.get(w, 0) != 1:
            out.append(Violation("top-end", f"wire {w} top end attached {tops.get(w, 0)} times", w))
        if bots.get(w, 0) != 1:
            out.append(
                Violation("bottom-end", f"wire {w} bottom end attached {bots.get(w, 0)} times", w)
            )
    if out:
        return out
    for t in d.transistors:
        if not d.presentation.allows(d.top_label_of(t), d.bottom_label_of(t)):
            out.append(
                Violation(
                    "relation",
                    f"transistor {t.id} labels {''.join(d.top_label_of(t))}/"
                    f"{''.join(d.bottom_label_of(t))} are not a relation",
                    t.id,
                )
            )
    if d.topological_order is None:
        out.append(Violation("order-not-strict", "transistor order has a cycle"))
    return out


def _raise_if_invalid(d: Diagram) -> Diagram:
    v = validate_diagram(d)
    if v:
        raise DiagramError("; ".join(x.message for x in v), v)
    return d


def check(d: Diagram) -> Diagram:
    """Return ``d`` if valid, else raise DiagramError."""
    return _raise_if_invalid(d)


# -- labels and simple predicates ---------------------------------------------


def top_label(d: Diagram) -> Word:
    return d.labels(d.frame_top)


def bottom_label(d: Diagram) -> Word:
    return d.labels(d.frame_bottom)


def is_permutation(d: Diagram) -> bool:
    return not d.transistors


def is_thin(d: Diagram) -> bool:
    # comparability needs at least one wire between two transistors
    return all(not ups for ups in d.covers.values())


# -- concatenation and inversion ---------------------------------------------


def _fresh(d: Diagram, offset: int) -> Diagram:
    """Shift all wire and transistor ids by ``offset``."""
    return Diagram(
        d.presentation,
        {w + offset: s for w, s in d.wires.items()},
        tuple(
            Transistor(t.id + offset, tuple(w + offset for w in t.top),
                       tuple(w + offset for w in t.bottom))
            for t in d.transistors
        ),
        tuple(w + offset for w in d.frame_top),
        tuple(w + offset for w in d.frame_bottom),
        d.annular,
    )


def concatenate(d1: Diagram, d2: Diagram) -> Diagram:
    """Stack ``d1`` on top of ``d2``."""
    if d1.presentation != d2.presentation:
        raise DiagramError("presentations differ", code="presentation-mismatch")
    if d1.annular != d2.annular:
        raise DiagramError("annular modes differ", code="mode-mismatch")
    if bottom_label(d1) != top_label(d2):
        raise DiagramError(
            f"bottom label {''.join(bottom_label(d1))} != top label {''.join(top_label(d2))}",
            code="label-mismatch",
        )
    a = normalize(d1)
    b = _fresh(normalize(d2), len(a.wires) + len(a.transistors) + 1)
    fuse = dict(zip(b.frame_top, a.frame_bottom))

    def m(w):
        return fuse.get(w, w)

    wires = dict(a.wires)
    for w, s in b.wires.items():
        if w not in fuse:
            wires[w] = s
    transistors = a.transistors + tuple(
        Transistor(t.id, tuple(m(w) for w in t.top), tuple(m(w) for w in t.bottom))
        for t in b.transistors
    )
    return normalize(
        Diagram(a.presentation, wires, transistors, a.frame_top,
                tuple(m(w) for w in b.frame_bottom), a.annular)
    )


def invert(d: Diagram) -> Diagram:
    """Reflect top and bottom."""
    return Diagram(
        d.presentation,
        d.wires,
        tuple(Transistor(t.id, t.bottom, t.top) for t in d.transistors),
        d.frame_bottom,
        d.frame_top,
        d.annular,
    )


def normalize(d: Diagram) -> Diagram:
    """Renumber wires and transistors by canonical traversal order."""
    wire_new, trans_new = _traversal(d)
    return Diagram(
        d.presentation,
        {wire_new[w]: d.wires[w] for w in d.wires},
        tuple(
            sorted(
                (
                    Transistor(trans_new[t.id], tuple(wire_new[w] for w in t.top),
                               tuple(wire_new[w] for w in t.bottom))
                    for t in d.transistors
                ),
                key=lambda t: t.id,
            )
        ),
        tuple(wire_new[w] for w in d.frame_top),
        tuple(wire_new[w] for w in d.frame_bottom),
        d.annular,
    )


# -- canonical codes ------------------------------------------------------------


def _traversal(d: Diagram) -> tuple[dict[int, int], dict[int, int]]:
    """Breadth-first numbering of wires and transistors from the frame top.

    Every connected piece of a valid diagram meets the frame top, so the
    traversal reaches everything.
    """
    ends = d.ends
    wire_new: dict[int, int] = {}
    trans_new: dict[int, int] = {}
    queue: deque = deque()

    def see_wire(w):
        if w not in wire_new:
            wire_new[w] = len(wire_new)
            queue.append((0, w))

    for w in d.frame_top:
        see_wire(w)
    while queue:
        kind, x = queue.popleft()
        if kind == 0:
            for end in ends[x]:
                if end is not None and end.tid is not None and end.tid not in trans_new:
                    trans_new[end.tid] = len(trans_new)
                    queue.append((1, end.tid))
        else:
            t = d.by_id[x]
            for w in t.bottom:
                see_wire(w)
            for w in t.top:
                see_wire(w)
    if len(wire_new) != len(d.wires) or len(trans_new) != len(d.transistors):
        raise DiagramError("diagram has parts unreachable from the frame top",
                           code="unreachable")
    return wire_new, trans_new


@dataclass(frozen=True)
class CanonicalCode:
    data: bytes
    flavor: str = "full"

    def __str__(self):
        return self.data.decode()


def _code_object(d: Diagram, flavor: str) -> dict:
    wire_new, trans_new = _traversal(d)
    inv = sorted(wire_new, key=wire_new.get)
    fb = [wire_new[w] for w in d.frame_bottom]
    if flavor == "bottom-unordered":
        fb = sorted(fb)
    elif flavor == "bottom-cyclic":
        fb = min(fb[i:] + fb[:i] for i in range(len(fb)))
    elif flavor != "full":
        raise ValueError(f"unknown flavor {flavor!r}")
    ts = sorted(d.transistors, key=lambda t: trans_new[t.id])
    return {
        "annular": d.annular,
        "frame_bottom": fb,
        "frame_top": [wire_new[w] for w in d.frame_top],
        "labels": [d.wires[w] for w in inv],
        "presentation": d.presentation.to_json(),
        "transistors": [[[wire_new[w] for w in t.top], [wire_new[w] for w in t.bottom]] for t in ts],
    }


def canonical_code(d: Diagram, flavor: str = "full") -> CanonicalCode:
    obj = _code_object(d, flavor)
    return CanonicalCode(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode(), flavor)


def is_equivalent(d1: Diagram, d2: Diagram, flavor: str = "full") -> bool:
    return canonical_code(d1, flavor) == canonical_code(d2, flavor)


# -- letter erasure -------------------------------------------------------------


def erase_letter(d: Diagram, p: str) -> Diagram:
    """Delete every wire labelled ``p``; the result lives over the induced presentation."""
    try:
        pres = erase_from_presentation(d.presentation, p)
    except PresentationError as exc:
        raise DiagramError(str(exc), code="induced-presentation") from None
    keep = {w: s for w, s in d.wires.items() if s != p}

    def strip(ws):
        return tuple(w for w in ws if w in keep)

    ts = []
    for t in d.transistors:
        top, bot = strip(t.top), strip(t.bottom)
        if not top or not bot:
            raise DiagramError(f"transistor {t.id} loses a whole side", code="empty-side")
        ts.append(Transistor(t.id, top, bot))
    ft, fb = strip(d.frame_top), strip(d.frame_bottom)
    if not ft or not fb:
        raise DiagramError("erasure empties a frame side", code="empty-frame")
    return check(Diagram(pres, keep, tuple(ts), ft, fb, d.annular))


# -- planarity and annularity --------------------------------------------------


def _peelable(frame: list[int], t: Transistor, cyclic: bool) -> int | None:
    """Start index of ``t``'s top wires as a consecutive frame block, or None."""
    pos = {w: i for i, w in enumerate(frame)}
    if not all(w in pos for w in t.top):
        return None
    idx = [pos[w] for w in t.top]
    n, k = len(frame), len(idx)
    start = idx[0]
    if cyclic:
        ok = all(idx[i] == (start + i) % n for i in range(k))
    else:
        ok = idx == list(range(start, start + k))
    return start if ok else None


def _splice(frame: list[int], t: Transistor, start: int, cyclic: bool) -> list[int]:
    k = len(t.top)
    if cyclic:
        frame = frame[start:] + frame[:start]
        start = 0
    return frame[:start] + list(t.bottom) + frame[start + k:]


def _final_ok(frame: list[int], bottom: Sequence[int], cyclic: bool) -> bool:
    bottom = list(bottom)
    if not cyclic:
        return frame == bottom
    if len(frame) != len(bottom):
        return False
    return any(frame[i:] + frame[:i] == bottom for i in range(len(frame)))


def _peel_greedy(d: Diagram, cyclic: bool) -> bool:
    frame = list(d.frame_top)
    remaining = {t.id: t for t in d.transistors}
    progress = True
    while remaining and progress:
        progress = False
        for tid in sorted(remaining):
            t = remaining[tid]
            start = _peelable(frame, t, cyclic)
            if start is not None:
                frame = _splice(frame, t, start, cyclic)
                del remaining[tid]
                progress = True
                break
    return not remaining and _final_ok(frame, d.frame_bottom, cyclic)


def peel_exhaustive(d: Diagram, cyclic: bool) -> bool:
    """Search every peel order (exponential; test oracle for the greedy peel)."""

    def rec(frame, remaining):
        if not remaining:
            return _final_ok(frame, d.frame_bottom, cyclic)
        for tid in sorted(remaining):
            t = remaining[tid]
            start = _peelable(frame, t, cyclic)
            if start is not None:
                rest = dict(remaining)
                del rest[tid]
                if rec(_splice(frame, t, start, cyclic), rest):
                    return True
        return False

    return rec(list(d.frame_top), {t.id: t for t in d.transistors})


def is_planar(d: Diagram) -> bool:
    return _peel_greedy(d, cyclic=False)


def is_annular(d: Diagram) -> bool:
    return _peel_greedy(d, cyclic=True)


# -- JSON ---------------------------------------------------------------------------


def to_json(d: Diagram) -> dict:
    """Canonical JSON object (canonical numbering, full flavor)."""
    n = normalize(d)
    return {
        "annular": n.annular,
        "frame_bottom": list(n.frame_bottom),
        "frame_top": list(n.frame_top),
        "presentation": n.presentation.to_json(),
        "transistors": [
            {"bottom": list(t.bottom), "id": t.id, "top": list(t.top)} for t in n.transistors
        ],
        "wires": [{"id": w, "label": n.wires[w]} for w in sorted(n.wires)],
    }


def dumps(d: Diagram) -> str:
    return json.dumps(to_json(d), sort_keys=True, indent=1) + "\n"


def from_json(obj: dict) -> Diagram:
    """Parse and validate a diagram JSON object."""
    try:
        pres = SemigroupPresentation.from_json(obj["presentation"])
        wires = {int(w["id"]): str(w["label"]) for w in obj["wires"]}
        ts = tuple(
            Transistor(int(t["id"]), tuple(int(w) for w in t["top"]),
                       tuple(int(w) for w in t["bottom"]))
            for t in obj.get("transistors", [])
        )
        d = Diagram(pres, wires, ts, tuple(int(w) for w in obj["frame_top"]),
                    tuple(int(w) for w in obj["frame_bottom"]), bool(obj.get("annular", False)))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DiagramError):
            raise
        raise DiagramError(f"malformed diagram JSON: {exc!r}", code="parse") from None
    return check(d)


def loads(text: str) -> Diagram:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DiagramError(f"invalid JSON: {exc}", code="parse") from None
    return from_json(obj)


def relabel(d: Diagram, wire_map: Mapping[int, int], trans_map: Mapping[int, int],
            order: Sequence[int] | None = None) -> Diagram:
    """Rename internal ids (and optionally reorder the transistor list)."""
    ts = [
        Transistor(trans_map[t.id], tuple(wire_map[w] for w in t.top),
                   tuple(wire_map[w] for w in t.bottom))
        for t in d.transistors
    ]
    if order is not None:
        ts = [ts[i] for i in order]
    return Diagram(
        d.presentation,
        {wire_map[w]: s for w, s in d.wires.items()},
        tuple(ts),
        tuple(wire_map[w] for w in d.frame_top),
        tuple(wire_map[w] for w in d.frame_bottom),
        d.annular,
    )

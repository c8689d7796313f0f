"""Dipole removal and insertion; reduction to the unique reduced diagram."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .diagram import Diagram, DiagramError, Transistor, check, validate_diagram


@dataclass(frozen=True, order=True)
class DipoleSite:
    lower: int
    upper: int


def find_dipoles(d: Diagram) -> list[DipoleSite]:
    """All cancelling pairs, sorted by (lower id, upper id)."""
    sites = []
    ends = d.ends
    for t1 in d.transistors:
        first = ends[t1.top[0]][0]
        if first is None or first.tid is None:
            continue
        t2 = d.by_id[first.tid]
        if t2.bottom != t1.top:
            continue
        if d.top_label_of(t2) == d.bottom_label_of(t1):
            sites.append(DipoleSite(t1.id, t2.id))
    return sorted(sites)


def is_reduced(d: Diagram) -> bool:
    return not find_dipoles(d)


def remove_dipole(d: Diagram, site: DipoleSite) -> Diagram:
    t1 = d.by_id.get(site.lower)
    t2 = d.by_id.get(site.upper)
    if t1 is None or t2 is None or t2.bottom != t1.top or (
        d.top_label_of(t2) != d.bottom_label_of(t1)
    ):
        raise DiagramError(f"stale dipole site {site}", code="stale-site")
    # wire above t2 at position i absorbs the wire below t1 at position i
    absorb = dict(zip(t1.bottom, t2.top))
    dropped = set(t1.top) | set(t1.bottom)

    def m(w):
        return absorb.get(w, w)

    wires = {w: s for w, s in d.wires.items() if w not in dropped}
    ts = tuple(
        Transistor(t.id, tuple(m(w) for w in t.top), t.bottom)
        for t in d.transistors
        if t.id not in (t1.id, t2.id)
    )
    return Diagram(d.presentation, wires, ts, d.frame_top,
                   tuple(m(w) for w in d.frame_bottom), d.annular)


def insert_dipole(
    d: Diagram, wire_ids: Sequence[int], relation: tuple[Sequence[str], Sequence[str]],
    direction: int = 1,
) -> Diagram:
    """Cut ``wire_ids`` and splice in a cancelling pair.

    With ``direction=1`` the cut wires carry ``relation[0]`` and the middle
    wires carry ``relation[1]``; ``direction=-1`` swaps the roles.
    """
    u, v = (tuple(relation[0]), tuple(relation[1]))
    if direction < 0:
        u, v = v, u
    if not d.presentation.allows(u, v):
        raise DiagramError(f"{u}/{v} is not a relation", code="relation")
    wire_ids = tuple(wire_ids)
    if len(set(wire_ids)) != len(wire_ids) or any(w not in d.wires for w in wire_ids):
        raise DiagramError("wire ids must be distinct existing wires", code="bad-wires")
    if d.labels(wire_ids) != u:
        raise DiagramError("cut wires do not spell the relation side", code="label-mismatch")
    nxt = max(d.wires) + 1
    lower_parts = {}
    wires = dict(d.wires)
    for w in wire_ids:
        lower_parts[w] = nxt
        wires[nxt] = d.wires[w]
        nxt += 1
    middle = []
    for s in v:
        wires[nxt] = s
        middle.append(nxt)
        nxt += 1
    # the original id keeps the upper half; its old bottom attachment moves to the lower half
    def m(w):
        return lower_parts.get(w, w)

    tid = max((t.id for t in d.transistors), default=-1) + 1
    ts = [Transistor(t.id, tuple(m(w) for w in t.top), t.bottom) for t in d.transistors]
    upper = Transistor(tid, wire_ids, tuple(middle))
    lower = Transistor(tid + 1, tuple(middle), tuple(lower_parts[w] for w in wire_ids))
    out = Diagram(d.presentation, wires, tuple(ts) + (upper, lower), d.frame_top,
                  tuple(m(w) for w in d.frame_bottom), d.annular)
    bad = validate_diagram(out)
    if bad:
        raise DiagramError("insertion breaks the diagram: " + bad[0].message, bad, code="insert")
    return out


def reduce(d: Diagram, rng: random.Random | None = None, trace: list | None = None) -> Diagram:
    """Remove dipoles until none remain.

    Without ``rng`` the lowest site is removed first; with ``rng`` a random
    site is picked at each step.  The result does not depend on the choice.
    """
    while True:
        sites = find_dipoles(d)
        if not sites:
            return d
        site = sites[0] if rng is None else rng.choice(sites)
        if trace is not None:
            trace.append(site)
        d = remove_dipole(d, site)


def reduce_checked(d: Diagram) -> Diagram:
    return check(reduce(check(d)))

"""Seeded random diagrams and exhaustive small-diagram enumeration (test oracles)."""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Sequence

from .diagram import (
    Diagram,
    DiagramError,
    bottom_label,
    canonical_code,
    concatenate,
    identity_diagram,
    permutation_diagram,
    single_transistor_diagram,
)
from .presentation import QV_BASE, V_BASE, SemigroupPresentation, as_word
from .rewriting import insert_dipole


def _applications(w, pres: SemigroupPresentation):
    """(positions, bottom) for every single relation application to the word w."""
    out = []
    for u, v in pres.oriented_relations():
        for pos in itertools.permutations(range(len(w)), len(u)):
            if tuple(w[i] for i in pos) == u:
                out.append((pos, v))
    return out


def apply_random(d: Diagram, rng: random.Random) -> Diagram:
    w = bottom_label(d)
    apps = _applications(w, d.presentation)
    pos, v = rng.choice(apps)
    return concatenate(d, single_transistor_diagram(d.presentation, w, pos, v))


def insert_random_dipole(d: Diagram, rng: random.Random, tries: int = 20) -> Diagram | None:
    """Cut randomly chosen wires and splice in a cancelling pair (None if no luck)."""
    rels = d.presentation.oriented_relations()
    by_label: dict[str, list[int]] = {}
    for w, s in d.wires.items():
        by_label.setdefault(s, []).append(w)
    for _ in range(tries):
        u, v = rng.choice(rels)
        picked: list[int] = []
        ok = True
        for s in u:
            pool = [w for w in by_label.get(s, ()) if w not in picked]
            if not pool:
                ok = False
                break
            picked.append(rng.choice(pool))
        if not ok:
            continue
        try:
            return insert_dipole(d, picked, (u, v))
        except DiagramError:
            continue
    return None


def random_diagram(rng: random.Random, max_transistors: int = 12,
                   presentation: SemigroupPresentation = QV_BASE,
                   top: Sequence[str] | str = "x", dipole_rate: float = 0.5) -> Diagram:
    """Random diagram with at most ``max_transistors`` transistors, rich in dipoles.

    Grows by stacking single applications at the bottom and by splicing
    cancelling pairs into random wires; finishes with a random bottom
    permutation.
    """
    d = identity_diagram(presentation, as_word(top))
    target = rng.randint(0, max_transistors)
    while len(d.transistors) < target:
        room = target - len(d.transistors)
        if room >= 2 and rng.random() < dipole_rate:
            nd = insert_random_dipole(d, rng)
            if nd is not None:
                d = nd
                continue
        d = apply_random(d, rng)
    n = len(d.frame_bottom)
    perm = list(range(n))
    rng.shuffle(perm)
    return concatenate(d, permutation_diagram(presentation, bottom_label(d), perm))


def enumerate_small(presentation: SemigroupPresentation = V_BASE, max_transistors: int = 4,
                    top_words: Sequence[str] = ("x", "xx", "xxx"),
                    full_perm_limit: int = 5, sampled_perms: int = 24,
                    seed: int = 0) -> Iterator[Diagram]:
    """Diagrams built from layers of single applications, closed by a bottom permutation.

    Every diagram with the given top word and transistor budget arises this
    way (stack its transistors in a linear extension of the order).  All
    bottom permutations are tried up to ``full_perm_limit`` bottom contacts;
    above that a seeded sample is used.  Results are deduplicated by
    canonical code.
    """
    rng = random.Random(seed)
    seen = set()
    for top in top_words:
        layer = [identity_diagram(presentation, as_word(top))]
        frontier_codes = set()
        for depth in range(max_transistors + 1):
            nxt = []
            for d in layer:
                w = bottom_label(d)
                n = len(w)
                if n <= full_perm_limit:
                    perms = itertools.permutations(range(n))
                else:
                    base = list(range(n))
                    perms = [tuple(base)]
                    for _ in range(sampled_perms):
                        rng.shuffle(base)
                        perms.append(tuple(base))
                for perm in perms:
                    e = concatenate(d, permutation_diagram(presentation, w, perm))
                    c = canonical_code(e)
                    if c not in seen:
                        seen.add(c)
                        yield e
                if depth == max_transistors:
                    continue
                for pos, v in _applications(w, presentation):
                    e = concatenate(d, single_transistor_diagram(presentation, w, pos, v))
                    c = canonical_code(e)
                    if c not in frontier_codes:
                        frontier_codes.add(c)
                        nxt.append(e)
            layer = nxt

"""QF <= QT <= QV as braided diagram groups over <x, a | x = xax>.

Diagram wires stand for pieces of a forest: an ``x`` wire carries a whole
rooted subtree, an ``a`` wire a single vertex.  Reading a reduced diagram from
the bottom frame upward, the merging transistors (bottom label ``x``) dissect
the domain forest and the splitting transistors (top label ``x``) reassemble
the range forest.  So a group element maps bottom to top, and in a product
``g * h`` (``g`` stacked on ``h``) the factor ``h`` acts first.

Addresses are strings over the child digits (``"0"``/``"1"`` for binary
trees) plus the base-word position of the tree or isolated point.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .diagram import (
    Diagram,
    DiagramError,
    Transistor,
    bottom_label,
    canonical_code,
    check,
    concatenate,
    erase_letter,
    identity_diagram,
    invert,
    is_annular,
    is_planar,
    top_label,
)
from .presentation import QV_BASE, V_BASE, SemigroupPresentation, Word, as_word
from .rewriting import is_reduced, reduce


class QVError(ValueError):
    def __init__(self, message, code="qv"):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True, order=True)
class BinaryAddress:
    bits: str = ""
    tree_index: int = 0

    @classmethod
    def parse(cls, text: str, tree_index: int = 0) -> "BinaryAddress":
        text = text.strip()
        if text in ("ε", "e", "eps", "epsilon"):
            text = ""
        if any(c not in "0123456789" for c in text):
            raise QVError(f"bad address {text!r}", code="bad-address")
        return cls(text, tree_index)

    def __str__(self) -> str:
        return self.bits if self.bits else "ε"


def _addr(v) -> BinaryAddress:
    if isinstance(v, BinaryAddress):
        return v
    return BinaryAddress.parse(v)


Piece = tuple[int, str]  # (base-word position, address)


def split_word(p: SemigroupPresentation) -> Word:
    """Bottom label of the splitting transistor (``xax`` for the QV presentation)."""
    for r in p.relations:
        for u, v in ((r.lhs, r.rhs), (r.rhs, r.lhs)):
            if u == ("x",) and len(v) > 1:
                return v
    raise QVError(f"{p} has no splitting relation x = ...", code="presentation")


# -- forest pairs ----------------------------------------------------------------


def _is_complete(leaves: set[str], arity: int) -> bool:
    """Leaves form a finite complete prefix code over ``arity`` digits."""
    if not leaves:
        return False
    seen = 0

    def rec(prefix: str) -> bool:
        nonlocal seen
        if prefix in leaves:
            seen += 1
            return True
        if not any(s.startswith(prefix) for s in leaves):
            return False
        return all(rec(prefix + str(c)) for c in range(arity))

    return rec("") and seen == len(leaves)


def _interior(leaves: Iterable[str]) -> set[str]:
    out = set()
    for s in leaves:
        for i in range(len(s)):
            out.add(s[:i])
    return out


@dataclass(frozen=True, eq=False)
class ForestPair:
    """Leaf and vertex bijections between a domain and a range forest.

    ``leaf_map`` sends domain leaves to range leaves; ``vertex_map`` sends the
    domain's interior nodes and isolated points to those of the range.
    """

    base: Word
    leaf_map: Mapping[Piece, Piece]
    vertex_map: Mapping[Piece, Piece]
    arity: int = 2

    def domain_leaves(self, i: int) -> set[str]:
        return {u for (j, u) in self.leaf_map if j == i}

    def range_leaves(self, i: int) -> set[str]:
        return {u for (j, u) in self.leaf_map.values() if j == i}

    def validate(self) -> None:
        xs = [i for i, s in enumerate(self.base) if s == "x"]
        points = [(i, "") for i, s in enumerate(self.base) if s != "x"]
        if sorted(self.leaf_map.values()) != sorted(set(self.leaf_map.values())):
            raise QVError("leaf map is not injective", code="bad-pair")
        if sorted(self.vertex_map.values()) != sorted(set(self.vertex_map.values())):
            raise QVError("vertex map is not injective", code="bad-pair")
        dom_v, rng_v = set(points), set(points)
        for i in xs:
            for side, leaves, verts in (
                ("domain", self.domain_leaves(i), dom_v),
                ("range", self.range_leaves(i), rng_v),
            ):
                if not _is_complete(leaves, self.arity):
                    raise QVError(f"{side} tree {i} is not a complete finite tree", code="bad-pair")
                verts.update((i, u) for u in _interior(leaves))
        if any(j not in xs for (j, _) in self.leaf_map) or any(
            j not in xs for (j, _) in self.leaf_map.values()
        ):
            raise QVError("leaf outside a tree position", code="bad-pair")
        if set(self.vertex_map) != dom_v or set(self.vertex_map.values()) != rng_v:
            raise QVError("vertex map is not a bijection of interior nodes/points", code="bad-pair")

    def evaluate(self, v: BinaryAddress) -> BinaryAddress:
        i, bits = v.tree_index, v.bits
        if not 0 <= i < len(self.base):
            raise QVError(f"tree index {i} out of range", code="bad-address")
        if self.base[i] != "x":
            if bits:
                raise QVError("isolated points have only the empty address", code="bad-address")
            j, u = self.vertex_map[(i, "")]
            return BinaryAddress(u, j)
        if (i, bits) in self.vertex_map:
            j, u = self.vertex_map[(i, bits)]
            return BinaryAddress(u, j)
        for cut in range(len(bits) + 1):
            hit = self.leaf_map.get((i, bits[:cut]))
            if hit is not None:
                j, u = hit
                return BinaryAddress(u + bits[cut:], j)
        raise QVError(f"address {v} not covered", code="bad-address")  # pragma: no cover

    def cancel_carets(self) -> "ForestPair":
        """Remove common carets (those matched leaf-for-leaf and vertex-for-vertex)."""
        leaf = dict(self.leaf_map)
        vert = dict(self.vertex_map)
        changed = True
        while changed:
            changed = False
            for (i, u) in sorted(vert):
                if self.base[i] != "x":
                    continue
                kids = [(i, u + str(c)) for c in range(self.arity)]
                if not all(k in leaf for k in kids):
                    continue
                j, w = vert[(i, u)]
                if self.base[j] != "x":
                    continue
                if all(leaf[k] == (j, w + str(c)) for c, k in enumerate(kids)):
                    for k in kids:
                        del leaf[k]
                    del vert[(i, u)]
                    leaf[(i, u)] = (j, w)
                    changed = True
                    break
        return ForestPair(self.base, leaf, vert, self.arity)


# -- single-tree pairs -------------------------------------------------------------


@dataclass(frozen=True)
class TreePair:
    """((t1, sigma, t2), f) with leaves and interior nodes in lexicographic order.

    ``sigma[i]`` is the index of the t2 leaf receiving the i-th t1 leaf; ``f``
    lists (t1 interior node, t2 interior node) pairs sorted by the first entry.
    """

    t1_leaves: tuple[str, ...]
    t2_leaves: tuple[str, ...]
    sigma: tuple[int, ...]
    f: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(sorted(tuple(p) for p in self.f)))

    @classmethod
    def from_maps(cls, sigma: Mapping[str, str], f: Mapping[str, str]) -> "TreePair":
        t1 = tuple(sorted(sigma))
        t2 = tuple(sorted(sigma.values()))
        idx = {u: i for i, u in enumerate(t2)}
        return cls(t1, t2, tuple(idx[sigma[u]] for u in t1), tuple(sorted(f.items())))

    def sigma_map(self) -> dict[str, str]:
        return {u: self.t2_leaves[j] for u, j in zip(self.t1_leaves, self.sigma)}

    def f_map(self) -> dict[str, str]:
        return dict(self.f)

    def to_forest(self) -> ForestPair:
        return ForestPair(
            ("x",),
            {(0, u): (0, w) for u, w in self.sigma_map().items()},
            {(0, u): (0, w) for u, w in self.f},
        )

    @classmethod
    def from_forest(cls, fp: ForestPair) -> "TreePair":
        if fp.base != ("x",):
            raise QVError("tree pairs need base word x", code="base-word")
        return cls.from_maps(
            {u: w for (_, u), (_, w) in fp.leaf_map.items()},
            {u: w for (_, u), (_, w) in fp.vertex_map.items()},
        )

    def validate(self) -> None:
        if len(self.t1_leaves) != len(self.t2_leaves) or sorted(self.sigma) != list(
            range(len(self.t2_leaves))
        ):
            raise QVError("sigma is not a bijection of leaves", code="bad-pair")
        if list(self.t1_leaves) != sorted(self.t1_leaves) or list(self.t2_leaves) != sorted(
            self.t2_leaves
        ):
            raise QVError("leaves must be listed in lexicographic order", code="bad-pair")
        self.to_forest().validate()

    def inverse(self) -> "TreePair":
        s = self.sigma_map()
        return TreePair.from_maps({w: u for u, w in s.items()}, {w: u for u, w in self.f})

    def depth(self) -> int:
        return max(len(u) for u in self.t1_leaves + self.t2_leaves)

    def to_json(self) -> dict:
        return {
            "f": [list(p) for p in self.f],
            "sigma": list(self.sigma),
            "t1_leaves": list(self.t1_leaves),
            "t2_leaves": list(self.t2_leaves),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TreePair":
        try:
            tp = cls(
                tuple(obj["t1_leaves"]),
                tuple(obj["t2_leaves"]),
                tuple(int(i) for i in obj["sigma"]),
                tuple((str(a), str(b)) for a, b in obj["f"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise QVError(f"malformed tree pair JSON: {exc!r}", code="parse") from None
        tp.validate()
        return tp


# -- diagram <-> forest pair ------------------------------------------------------


def _kind(d: Diagram, t: Transistor) -> int:
    """+1 for a splitting transistor (top label x), -1 for a merging one."""
    if d.top_label_of(t) == ("x",):
        return 1
    if d.bottom_label_of(t) == ("x",):
        return -1
    raise QVError(f"transistor {t.id} is neither splitting nor merging", code="presentation")


def _carve(labels: Word, i: int, u: str, wires: Sequence[int]) -> list[tuple[int, Piece, str]]:
    """Pieces carried by the wires produced when the subtree at (i, u) is cut open."""
    out = []
    c = 0
    for w, s in zip(wires, labels):
        if s == "x":
            out.append((w, (i, u + str(c)), "T"))
            c += 1
        else:
            out.append((w, (i, u), "P"))
    return out


def diagram_to_forest(d: Diagram) -> ForestPair:
    """Read a reduced (w, w)-diagram as a forest pair."""
    base = top_label(d)
    if bottom_label(d) != base:
        raise QVError("group elements need equal top and bottom labels", code="base-word")
    arity = sum(1 for s in split_word(d.presentation) if s == "x")
    order = d.topological_order
    if order is None:
        raise DiagramError("order not strict")
    kinds = {t.id: _kind(d, t) for t in d.transistors}
    dom: dict[int, tuple[str, Piece]] = {}
    rng: dict[int, tuple[str, Piece]] = {}
    for i, w in enumerate(d.frame_bottom):
        dom[w] = ("T" if base[i] == "x" else "P", (i, ""))
    for i, w in enumerate(d.frame_top):
        rng[w] = ("T" if base[i] == "x" else "P", (i, ""))
    for tid in order:
        t = d.by_id[tid]
        if kinds[tid] < 0:
            got = dom.get(t.bottom[0])
            if got is None or got[0] != "T":
                raise QVError("diagram is not split into dissection and reassembly",
                              code="not-reduced")
            for w, piece, kind in _carve(d.top_label_of(t), *got[1], t.top):
                dom[w] = (kind, piece)
    for tid in reversed(order):
        t = d.by_id[tid]
        if kinds[tid] > 0:
            got = rng.get(t.top[0])
            if got is None or got[0] != "T":
                raise QVError("diagram is not split into dissection and reassembly",
                              code="not-reduced")
            for w, piece, kind in _carve(d.bottom_label_of(t), *got[1], t.bottom):
                rng[w] = (kind, piece)
    ends = d.ends
    leaf_map: dict[Piece, Piece] = {}
    vertex_map: dict[Piece, Piece] = {}
    for w in d.wires:
        top_end, bot_end = ends[w]
        if top_end.tid is not None and kinds[top_end.tid] < 0:
            continue  # internal to the dissection
        if bot_end.tid is not None and kinds[bot_end.tid] > 0:
            continue  # internal to the reassembly
        if w not in dom or w not in rng:
            raise QVError("diagram is not split into dissection and reassembly",
                          code="not-reduced")
        (k1, p1), (k2, p2) = dom[w], rng[w]
        if k1 != k2:
            raise QVError("a leaf is matched with an interior vertex", code="not-reduced")
        (leaf_map if k1 == "T" else vertex_map)[p1] = p2
    return ForestPair(base, leaf_map, vertex_map, arity)


def forest_to_diagram(fp: ForestPair, presentation: SemigroupPresentation = QV_BASE) -> Diagram:
    """Dissect the domain forest bottom-up, reassemble the range forest top-down."""
    fp.validate()
    sw = split_word(presentation)
    wires: dict[int, str] = {}
    ts: list[Transistor] = []

    def new(label):
        w = len(wires)
        wires[w] = label
        return w

    dom_t: dict[Piece, int] = {}
    dom_p: dict[Piece, int] = {}
    frame_bottom = []
    for i, s in enumerate(fp.base):
        w = new(s)
        (dom_t if s == "x" else dom_p)[(i, "")] = w
        frame_bottom.append(w)
    leaves_by_tree = {i: fp.domain_leaves(i) for i, s in enumerate(fp.base) if s == "x"}
    interior = sorted(
        ((i, u) for i, ls in leaves_by_tree.items() for u in _interior(ls)),
        key=lambda p: (len(p[1]), p),
    )
    for i, u in interior:
        top = []
        c = 0
        for s in sw:
            w = new(s)
            if s == "x":
                dom_t[(i, u + str(c))] = w
                c += 1
            else:
                dom_p[(i, u)] = w
            top.append(w)
        ts.append(Transistor(len(ts), tuple(top), (dom_t[(i, u)],)))

    inv_leaf = {v: k for k, v in fp.leaf_map.items()}
    inv_vert = {v: k for k, v in fp.vertex_map.items()}

    def range_tree_wire(piece, fresh):
        if piece in inv_leaf:
            return dom_t[inv_leaf[piece]]
        return fresh[piece]

    rng_t: dict[Piece, int] = {}
    frame_top = []
    for i, s in enumerate(fp.base):
        piece = (i, "")
        if s != "x":
            frame_top.append(dom_p[inv_vert[piece]])
        elif piece in inv_leaf:
            frame_top.append(dom_t[inv_leaf[piece]])
        else:
            rng_t[piece] = new("x")
            frame_top.append(rng_t[piece])
    r_leaves = {i: fp.range_leaves(i) for i, s in enumerate(fp.base) if s == "x"}
    r_interior = sorted(
        ((i, u) for i, ls in r_leaves.items() for u in _interior(ls)),
        key=lambda p: (len(p[1]), p),
    )
    for i, u in r_interior:
        bottom = []
        c = 0
        for s in sw:
            if s == "x":
                piece = (i, u + str(c))
                c += 1
                if piece in inv_leaf:
                    w = dom_t[inv_leaf[piece]]
                else:
                    w = new("x")
                    rng_t[piece] = w
            else:
                w = dom_p[inv_vert[(i, u)]]
            bottom.append(w)
        ts.append(Transistor(len(ts), (rng_t[(i, u)],), tuple(bottom)))
    return check(Diagram(presentation, wires, tuple(ts), tuple(frame_top), tuple(frame_bottom)))


# -- group elements --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A reduced (w, w)-diagram; equality is equivalence of diagrams."""

    diagram: Diagram

    def __post_init__(self):
        if top_label(self.diagram) != bottom_label(self.diagram):
            raise QVError("group elements need equal top and bottom labels", code="base-word")
        if not is_reduced(self.diagram):
            raise QVError("group elements are reduced diagrams", code="not-reduced")

    @classmethod
    def of(cls, d: Diagram) -> "GroupElement":
        return cls(reduce(check(d)))

    @property
    def base(self) -> Word:
        return top_label(self.diagram)

    @property
    def presentation(self) -> SemigroupPresentation:
        return self.diagram.presentation

    @cached_property
    def code(self):
        return canonical_code(self.diagram)

    @cached_property
    def forest(self) -> ForestPair:
        return diagram_to_forest(self.diagram)

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.code == other.code

    def __hash__(self):
        return hash(self.code.data)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)

    def __call__(self, v) -> BinaryAddress:
        return evaluate(self, v)

    def __repr__(self):
        return f"GroupElement({''.join(self.base)}, {len(self.diagram.transistors)} transistors)"


def identity(base: Sequence[str] | str = "x", presentation: SemigroupPresentation = QV_BASE):
    return GroupElement(identity_diagram(presentation, as_word(base)))


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    """``g`` stacked on ``h``; as maps, h acts first."""
    if g.base != h.base:
        raise QVError("base words differ", code="base-mismatch")
    if g.presentation != h.presentation:
        raise QVError("presentations differ", code="presentation-mismatch")
    return GroupElement(reduce(concatenate(g.diagram, h.diagram)))


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(reduce(invert(g.diagram)))


def power(g: GroupElement, n: int) -> GroupElement:
    out = identity(g.base, g.presentation)
    step = g if n >= 0 else inverse(g)
    for _ in range(abs(n)):
        out = out * step
    return out


def treepair_to_diagram(tp: TreePair) -> GroupElement:
    tp.validate()
    return GroupElement(reduce(forest_to_diagram(tp.to_forest())))


def forest_pair_to_element(fp: ForestPair, presentation=QV_BASE) -> GroupElement:
    return GroupElement(reduce(forest_to_diagram(fp, presentation)))


def diagram_to_treepair(g: GroupElement) -> TreePair:
    if g.base != ("x",):
        raise QVError("tree pairs are defined for base word x only", code="base-word")
    return TreePair.from_forest(g.forest)


def evaluate(g: GroupElement, v) -> BinaryAddress:
    return g.forest.evaluate(_addr(v))


def addresses(depth: int, arity: int = 2, tree_index: int = 0) -> list[BinaryAddress]:
    """All addresses of length <= depth, shortest first."""
    out = [BinaryAddress("", tree_index)]
    layer = [""]
    for _ in range(depth):
        layer = [u + str(c) for u in layer for c in range(arity)]
        out.extend(BinaryAddress(u, tree_index) for u in layer)
    return out


def project_to_V(g: GroupElement) -> GroupElement:
    """Erase the a-wires and reduce: the quotient map onto V."""
    return GroupElement(reduce(erase_letter(g.diagram, "a")))


def is_kernel_element(g: GroupElement) -> bool:
    p = project_to_V(g)
    return p == identity(p.base, p.presentation)


def support(g: GroupElement, depth: int) -> list[tuple[BinaryAddress, BinaryAddress]]:
    out = []
    arity = g.forest.arity
    for i, s in enumerate(g.base):
        if s != "x":
            v = BinaryAddress("", i)
            if evaluate(g, v) != v:
                out.append((v, evaluate(g, v)))
            continue
        for v in addresses(depth, arity, i):
            img = evaluate(g, v)
            if img != v:
                out.append((v, img))
    return out


def _leaf_permutation(g: GroupElement) -> tuple[int, ...]:
    return diagram_to_treepair(g).sigma


def member_QF(g: GroupElement) -> bool:
    """Leaf bijection preserves the left-to-right order."""
    s = _leaf_permutation(g)
    return all(j == i for i, j in enumerate(s))


def member_QT(g: GroupElement) -> bool:
    """Leaf bijection is a rotation of the cyclic leaf order."""
    s = _leaf_permutation(g)
    n = len(s)
    return all(s[i] == (s[0] + i) % n for i in range(n))


def erased_representative(g: GroupElement) -> Diagram:
    return erase_letter(g.diagram, "a")


def member_QF_by_planarity(g: GroupElement) -> bool:
    return is_planar(erased_representative(g))


def member_QT_by_annularity(g: GroupElement) -> bool:
    return is_annular(erased_representative(g))


# -- random elements ----------------------------------------------------------------


def _random_forest(rng: random.Random, base: Word, carets: int, arity: int) -> list[Piece]:
    leaves = [(i, "") for i, s in enumerate(base) if s == "x"]
    if not leaves:
        return leaves
    for _ in range(carets):
        k = rng.randrange(len(leaves))
        i, u = leaves.pop(k)
        leaves.extend((i, u + str(c)) for c in range(arity))
    return sorted(leaves)


def _vertices(base: Word, leaves: Iterable[Piece]) -> list[Piece]:
    by_tree: dict[int, list[str]] = {}
    for i, u in leaves:
        by_tree.setdefault(i, []).append(u)
    out = [(i, "") for i, s in enumerate(base) if s != "x"]
    for i, ls in by_tree.items():
        out.extend((i, u) for u in _interior(ls))
    return sorted(out)


def random_forest_pair(rng: random.Random, caret_budget: int, base: Word = ("x",), arity: int = 2,
                       carets: int | None = None, leaf_order: str = "any") -> ForestPair:
    """``leaf_order`` is "any" (uniform leaf bijection), "order" (order
    preserving, so in QF) or "cyclic" (a rotation, so in QT)."""
    base = as_word(base)
    if carets is None:
        carets = rng.randint(0, caret_budget) if "x" in base else 0
    d_leaves = _random_forest(rng, base, carets, arity)
    r_leaves = _random_forest(rng, base, carets, arity)
    if leaf_order == "any":
        rng.shuffle(r_leaves)
    elif leaf_order == "cyclic" and r_leaves:
        r = rng.randrange(len(r_leaves))
        r_leaves = r_leaves[r:] + r_leaves[:r]
    elif leaf_order not in ("order", "cyclic"):
        raise QVError(f"unknown leaf order {leaf_order!r}", code="bad-leaf-order")
    d_vert = _vertices(base, d_leaves)
    r_vert = _vertices(base, r_leaves)
    rng.shuffle(r_vert)
    return ForestPair(base, dict(zip(d_leaves, r_leaves)), dict(zip(d_vert, r_vert)), arity)


def random_element(seed: int, caret_budget: int, base: Sequence[str] | str = "x",
                   presentation: SemigroupPresentation = QV_BASE,
                   leaf_order: str = "any") -> GroupElement:
    """Deterministic per seed: random carets (at most ``caret_budget`` per forest),
    uniformly random leaf and vertex bijections, then reduced."""
    if caret_budget < 0:
        raise QVError("caret budget must be nonnegative", code="bad-budget")
    rng = random.Random(seed)
    arity = sum(1 for s in split_word(presentation) if s == "x")
    fp = random_forest_pair(rng, caret_budget, as_word(base), arity, leaf_order=leaf_order)
    return forest_pair_to_element(fp, presentation)


def kernel_element(seed: int, carets: int) -> GroupElement:
    """Same tree on both sides, identity on leaves, random permutation of interior nodes."""
    rng = random.Random(seed)
    leaves = _random_forest(rng, ("x",), carets, 2)
    verts = _vertices(("x",), leaves)
    perm = list(verts)
    rng.shuffle(perm)
    fp = ForestPair(("x",), {p: p for p in leaves}, dict(zip(verts, perm)))
    return forest_pair_to_element(fp)


def v_identity() -> GroupElement:
    return identity("x", V_BASE)

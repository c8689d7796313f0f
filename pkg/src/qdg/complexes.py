"""Finite simplicial complexes, complex vertices, cubes and (descending) links.

Link vertices are plain tuples.  A descending vertex ``(m, n, p)`` merges the
m-th and n-th ``x`` contacts (counted from the left, 1-based) with the p-th
``a`` contact through an (xax, x)-transistor; an ascending vertex ``(m,)``
splits the m-th ``x`` contact.  Two link vertices span an edge when they use
disjoint contacts, and every link here is the flag complex of that relation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .diagram import (
    Diagram,
    bottom_label,
    canonical_code,
    check,
    concatenate,
    is_thin,
    single_transistor_diagram,
    top_label,
)
from .presentation import Word, count_letter
from .rewriting import is_reduced, reduce

FAMILIES = ("QF", "QT", "QV")


class ComplexError(ValueError):
    def __init__(self, message, code="complex"):
        super().__init__(message)
        self.code = code


# -- simplicial complexes -----------------------------------------------------------


def _cliques(n: int, up: Sequence[set[int]], max_dim: int | None) -> list[list[tuple[int, ...]]]:
    """All cliques of a graph (``up[i]``: neighbours > i), grouped by dimension, lex order."""
    out: list[list[tuple[int, ...]]] = [[(i,) for i in range(n)]]

    def rec(clique, cand):
        d = len(clique)
        if max_dim is not None and d > max_dim:
            return
        if not cand:
            return
        if len(out) <= d:
            out.append([])
        bucket = out[d]
        for j in sorted(cand):
            c2 = clique + (j,)
            bucket.append(c2)
            rec(c2, cand & up[j])

    for i in range(n):
        rec((i,), up[i])
    return out


@dataclass(eq=False)
class SimplicialComplex:
    """Simplices as ascending vertex-index tuples, grouped by dimension and sorted.

    ``truncated_at`` is the dimension cap used at construction (None when all
    simplices are stored).  ``flag`` marks complexes known to be flag, which
    lets full subcomplexes be rebuilt from the 1-skeleton.
    """

    vertex_labels: list
    simplices: list[list[tuple[int, ...]]]
    truncated_at: int | None = None
    flag: bool = False
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_facets(cls, facets: Iterable[Sequence[Hashable]], labels: Sequence | None = None,
                    max_dim: int | None = None) -> "SimplicialComplex":
        """Close a list of simplices (given by vertex labels) under faces."""
        facets = [tuple(f) for f in facets]
        if labels is None:
            labels = sorted({v for f in facets for v in f}, key=repr)
        labels = list(labels)
        idx = {v: i for i, v in enumerate(labels)}
        by_dim: dict[int, set] = {0: {(i,) for i in range(len(labels))}}
        for f in facets:
            s = tuple(sorted({idx[v] for v in f}))
            top = len(s) - 1 if max_dim is None else min(len(s) - 1, max_dim)
            for d in range(1, top + 1):
                by_dim.setdefault(d, set()).update(itertools.combinations(s, d + 1))
        dims = max(by_dim)
        return cls(labels, [sorted(by_dim.get(d, ())) for d in range(dims + 1)],
                   truncated_at=max_dim)

    @classmethod
    def flag_complex(cls, labels: Sequence, adjacent: Callable[[object, object], bool],
                     max_dim: int | None = None, meta: dict | None = None) -> "SimplicialComplex":
        labels = list(labels)
        n = len(labels)
        up = [set() for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                if adjacent(labels[i], labels[j]):
                    up[i].add(j)
        simp = _cliques(n, up, max_dim)
        while len(simp) > 1 and not simp[-1]:
            simp.pop()
        trunc = max_dim if max_dim is not None and len(simp) - 1 >= max_dim else None
        return cls(labels, simp, truncated_at=trunc, flag=True, meta=dict(meta or {}))

    # -- basic views ---------------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_labels)

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def count(self, d: int) -> int:
        return len(self.simplices[d]) if 0 <= d < len(self.simplices) else 0

    def f_vector(self) -> list[int]:
        return [len(s) for s in self.simplices]

    def complete_through(self, d: int) -> bool:
        """True if every simplex of dimension <= d is stored."""
        return self.truncated_at is None or d <= self.truncated_at

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertex_labels)}

    @cached_property
    def neighbours(self) -> list[set[int]]:
        nb = [set() for _ in range(self.n_vertices)]
        for i, j in self.simplices[1] if self.dim >= 1 else ():
            nb[i].add(j)
            nb[j].add(i)
        return nb

    def simplex_set(self, d: int) -> set[tuple[int, ...]]:
        return set(self.simplices[d]) if 0 <= d <= self.dim else set()

    @cached_property
    def _sets(self) -> list[set[tuple[int, ...]]]:
        return [set(s) for s in self.simplices]

    def has_simplex(self, s: Sequence[int]) -> bool:
        s = tuple(sorted(s))
        d = len(s) - 1
        return 0 <= d <= self.dim and s in self._sets[d]

    def labelled(self, d: int) -> set[frozenset]:
        lab = self.vertex_labels
        return {frozenset(lab[i] for i in s) for s in self.simplices[d]} if d <= self.dim else set()

    def skeleton(self, d: int) -> "SimplicialComplex":
        trunc = d if self.dim > d else self.truncated_at
        if trunc is not None:
            trunc = min(trunc, d)
        # flag here means: the flag complex of the 1-skeleton, cut at truncated_at
        return SimplicialComplex(list(self.vertex_labels), [list(s) for s in self.simplices[: d + 1]],
                                 truncated_at=trunc, flag=self.flag, meta=dict(self.meta))

    def full_subcomplex(self, vertices: Iterable[int]) -> "SimplicialComplex":
        """Induced subcomplex, relabelled compactly in ascending vertex order."""
        keep = sorted(set(vertices))
        new = {v: i for i, v in enumerate(keep)}
        labels = [self.vertex_labels[v] for v in keep]
        if self.flag:
            up = [set() for _ in keep]
            for v in keep:
                for u in self.neighbours[v]:
                    if u in new and u > v:
                        up[new[v]].add(new[u])
            simp = _cliques(len(keep), up, self.dim)
            while len(simp) > 1 and not simp[-1]:
                simp.pop()
        else:
            simp = [
                [tuple(new[v] for v in s) for s in layer if all(v in new for v in s)]
                for layer in self.simplices
            ]
            while len(simp) > 1 and not simp[-1]:
                simp.pop()
        trunc = self.truncated_at if self.truncated_at is not None and len(simp) - 1 >= self.truncated_at else None
        return SimplicialComplex(labels, simp, truncated_at=trunc, flag=self.flag, meta=dict(self.meta))

    # -- JSON ---------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "simplices_by_dim": [[i for (i,) in self.simplices[0]]]
            + [[list(s) for s in layer] for layer in self.simplices[1:]],
            "vertex_labels": [list(v) if isinstance(v, tuple) else v for v in self.vertex_labels],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SimplicialComplex":
        try:
            labels = [tuple(v) if isinstance(v, list) else v for v in obj["vertex_labels"]]
            raw = obj["simplices_by_dim"]
            simp = [[(int(i),) for i in raw[0]]] if raw else [[]]
            for layer in raw[1:]:
                simp.append(sorted(tuple(sorted(int(i) for i in s)) for s in layer))
        except (KeyError, TypeError, ValueError) as exc:
            raise ComplexError(f"malformed complex JSON: {exc!r}", code="parse") from None
        n = len(labels)
        for d, layer in enumerate(simp):
            for s in layer:
                if len(s) != d + 1 or len(set(s)) != d + 1 or not all(0 <= i < n for i in s):
                    raise ComplexError(f"bad {d}-simplex {list(s)}", code="parse")
        sets = [set(layer) for layer in simp]
        for d in range(1, len(simp)):
            for s in simp[d]:
                for face in itertools.combinations(s, d):
                    if face not in sets[d - 1]:
                        raise ComplexError(f"face {list(face)} of {list(s)} missing", code="parse")
        return cls(labels, simp)

    def __repr__(self):
        return f"SimplicialComplex(f={self.f_vector()})"


# -- link vertices ------------------------------------------------------------------


def slots(v: tuple) -> tuple[int, ...]:
    """x-contacts used by a link vertex."""
    return v[:2] if len(v) == 3 else v[:1]


def color(v: tuple) -> int | None:
    return v[2] if len(v) == 3 else None


def compatible(u: tuple, v: tuple) -> bool:
    """Disjoint applications: no shared x-contact and no shared a-contact."""
    if set(slots(u)) & set(slots(v)):
        return False
    cu, cv = color(u), color(v)
    return cu is None or cv is None or cu != cv


def descending_vertices(k: int, l: int, family: str = "QV") -> list[tuple[int, int, int]]:
    family = family.upper()
    if family == "QV":
        pairs = [(m, n) for m in range(1, k + 1) for n in range(1, k + 1) if m != n]
    elif family == "QF":
        pairs = [(m, m + 1) for m in range(1, k)]
    elif family == "QT":
        pairs = [(m, m + 1) for m in range(1, k)]
        if k >= 2 and (k, 1) not in pairs:
            pairs.append((k, 1))
    else:
        raise ComplexError(f"unknown family {family!r}", code="family")
    return sorted((m, n, p) for (m, n) in set(pairs) for p in range(1, l + 1))


def _label_key(v):
    return (len(v) == 1, v)


def abstract_descending_link(k: int, l: int, family: str = "QV",
                             max_dim: int | None = None) -> SimplicialComplex:
    if k < 1 or l < 0:
        raise ComplexError("need k >= 1 and l >= 0", code="bad-parameters")
    labels = descending_vertices(k, l, family)
    return SimplicialComplex.flag_complex(
        labels, compatible, max_dim, meta={"family": family.upper(), "k": k, "l": l, "kind": "descending"}
    )


def abstract_link(k: int, l: int, max_dim: int | None = None) -> SimplicialComplex:
    """Full link of a vertex with bottom label x^k a^l: descending plus ascending vertices."""
    if k < 1 or l < 0:
        raise ComplexError("need k >= 1 and l >= 0", code="bad-parameters")
    labels = sorted(descending_vertices(k, l, "QV") + [(m,) for m in range(1, k + 1)], key=_label_key)
    return SimplicialComplex.flag_complex(
        labels, compatible, max_dim, meta={"family": "QV", "k": k, "l": l, "kind": "full"}
    )


def run_link(runs: Sequence[int], l: int, max_dim: int | None = None) -> SimplicialComplex:
    """Merges of neighbouring x-contacts inside separate linear runs of contacts.

    Vertex ``(r, m, p)`` merges contacts m and m+1 of run r (both 1-based)
    with color p.  A single run of length k is QF's descending link on x^k a^l.
    """
    labels = [(r, m, p) for r, L in enumerate(runs, 1) for m in range(1, L) for p in range(1, l + 1)]

    def adjacent(u, v):
        if u[2] == v[2]:
            return False
        return u[0] != v[0] or abs(u[1] - v[1]) > 1

    return SimplicialComplex.flag_complex(
        labels, adjacent, max_dim, meta={"family": "QF-runs", "runs": tuple(runs), "l": l}
    )


# -- complex-level predicates -------------------------------------------------------


def is_flag(K: SimplicialComplex) -> bool:
    """Every clique of the 1-skeleton spans a stored simplex.

    For complexes truncated at dimension d only cliques of dimension <= d are
    compared.
    """
    up = [set() for _ in range(K.n_vertices)]
    if K.dim >= 1:
        for i, j in K.simplices[1]:
            up[i].add(j)
    cap = K.truncated_at if K.truncated_at is not None else K.dim + 1
    cl = _cliques(K.n_vertices, up, cap)
    for d in range(2, len(cl)):
        if not cl[d]:
            continue
        if d > K.dim:
            return False
        if set(cl[d]) != K.simplex_set(d):
            return False
    return True


def full_subcomplex_check(sub: SimplicialComplex, ambient: SimplicialComplex,
                          injection: Mapping[int, int] | None = None) -> bool:
    """``sub`` maps onto a full subcomplex of ``ambient``.

    The default injection matches vertex labels.
    """
    if injection is None:
        try:
            injection = {i: ambient.index[v] for i, v in enumerate(sub.vertex_labels)}
        except KeyError as exc:
            raise ComplexError(f"label {exc} not in ambient complex", code="bad-injection") from None
    if len(set(injection.values())) != len(injection) or set(injection) != set(range(sub.n_vertices)):
        raise ComplexError("vertex map is not injective on the subcomplex", code="bad-injection")
    back = {a: s for s, a in injection.items()}
    for d in range(1, sub.dim + 1):
        for s in sub.simplices[d]:
            if not ambient.has_simplex([injection[i] for i in s]):
                return False
    for d in range(1, ambient.dim + 1):
        for s in ambient.simplices[d]:
            if all(v in back for v in s) and not sub.has_simplex([back[v] for v in s]):
                return False
    return True


def is_isomorphism(A: SimplicialComplex, B: SimplicialComplex, vmap: Mapping[int, int],
                   max_dim: int | None = None) -> bool:
    """``vmap`` (A index -> B index) is a bijection carrying simplices onto simplices."""
    if sorted(vmap) != list(range(A.n_vertices)) or sorted(vmap.values()) != list(range(B.n_vertices)):
        return False
    top = max(A.dim, B.dim) if max_dim is None else max_dim
    for d in range(1, top + 1):
        img = {tuple(sorted(vmap[i] for i in s)) for s in (A.simplices[d] if d <= A.dim else ())}
        if img != B.simplex_set(d):
            return False
    return True


# -- vertices and cubes ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ComplexVertex:
    """A reduced diagram up to permutation diagrams on its bottom."""

    representative: Diagram

    def __post_init__(self):
        if not is_reduced(self.representative):
            raise ComplexError("complex vertices are reduced diagrams", code="not-reduced")

    @classmethod
    def of(cls, d: Diagram) -> "ComplexVertex":
        return cls(reduce(check(d)))

    @cached_property
    def code(self):
        return canonical_code(self.representative, "bottom-unordered")

    @property
    def bottom(self) -> Word:
        return bottom_label(self.representative)

    def __eq__(self, other):
        return isinstance(other, ComplexVertex) and self.code == other.code

    def __hash__(self):
        return hash(self.code.data)


@dataclass(frozen=True)
class FiltrationLevel:
    j: int


def filtration_level(v: ComplexVertex) -> FiltrationLevel:
    w = v.bottom
    j = count_letter(w, "x")
    if count_letter(w, "a") != j - 1:
        raise ComplexError(f"bottom label {''.join(w)} is not on a filtration level", code="level")
    return FiltrationLevel(j)


def same_orbit(v1: ComplexVertex, v2: ComplexVertex) -> bool:
    return sorted(v1.bottom) == sorted(v2.bottom)


@dataclass(frozen=True)
class MarkedCube:
    delta: Diagram
    psi: Diagram
    transistor_numbering: tuple[int, ...] = ()

    def __post_init__(self):
        if not is_thin(self.psi):
            raise ComplexError("psi must be thin", code="not-thin")
        if bottom_label(self.delta) != top_label(self.psi):
            raise ComplexError("bottom of delta must match top of psi", code="label-mismatch")
        ids = tuple(t.id for t in self.psi.transistors)
        if not self.transistor_numbering:
            object.__setattr__(self, "transistor_numbering", tuple(sorted(ids)))
        elif sorted(self.transistor_numbering) != sorted(ids):
            raise ComplexError("numbering must list psi's transistors", code="bad-numbering")

    @property
    def dim(self) -> int:
        return len(self.transistor_numbering)


def clip(psi: Diagram, drop: Iterable[int]) -> Diagram:
    """Delete transistors of a thin diagram; their top wires run straight to the bottom."""
    drop = set(drop)
    bottom_of = {}
    for t in psi.transistors:
        if t.id in drop:
            bottom_of[t.bottom[0]] = t.top
    gone = {w for t in psi.transistors if t.id in drop for w in t.bottom}
    fb = []
    for w in psi.frame_bottom:
        if w in bottom_of:
            fb.extend(bottom_of[w])
        elif w not in gone:
            fb.append(w)
    wires = {w: s for w, s in psi.wires.items() if w not in gone}
    ts = tuple(t for t in psi.transistors if t.id not in drop)
    return check(Diagram(psi.presentation, wires, ts, psi.frame_top, tuple(fb), psi.annular))


def realize_cube(c: MarkedCube, corner: Sequence[int]) -> ComplexVertex:
    if len(corner) != c.dim:
        raise ComplexError(f"corner needs {c.dim} bits", code="length-mismatch")
    drop = [tid for tid, bit in zip(c.transistor_numbering, corner) if not bit]
    return ComplexVertex.of(concatenate(c.delta, clip(c.psi, drop)))


def _consumed(psi: Diagram) -> set[int]:
    if len(psi.transistors) != 1:
        raise ComplexError("expected a single-transistor diagram", code="arity")
    pos = {w: i for i, w in enumerate(psi.frame_top)}
    t = psi.transistors[0]
    if not all(w in pos for w in t.top):
        raise ComplexError("transistor is not fed by the frame top", code="arity")
    return {pos[w] for w in t.top}


def are_disjoint(psi1: Diagram, psi2: Diagram) -> bool:
    if top_label(psi1) != top_label(psi2):
        raise ComplexError("applications to different words", code="word-mismatch")
    return not (_consumed(psi1) & _consumed(psi2))


# -- links built from diagrams ------------------------------------------------------


def single_applications(w: Word, presentation) -> list[tuple[tuple[int, ...], Word, Diagram]]:
    """Every single-transistor diagram with top label ``w``, one per class."""
    out = []
    seen = set()
    n = len(w)
    for u, v in presentation.oriented_relations():
        for pos in itertools.permutations(range(n), len(u)):
            if tuple(w[i] for i in pos) != u:
                continue
            psi = single_transistor_diagram(presentation, w, pos, v)
            code = canonical_code(psi, "bottom-unordered")
            if code in seen:
                continue
            seen.add(code)
            out.append((tuple(pos), v, psi))
    return out


@dataclass
class DiagramLink:
    complex: SimplicialComplex
    diagrams: list[Diagram]
    to_abstract: dict[int, int]
    abstract: SimplicialComplex
    isomorphic: bool


def link_from_diagrams(v: ComplexVertex, max_dim: int | None = None) -> DiagramLink:
    """The link of ``v``: single applications to its bottom label, simplices = disjoint families.

    Returns the complex together with the explicit vertex bijection onto
    ``abstract_link(k, l)`` and whether it is an isomorphism.
    """
    w = v.bottom
    pres = v.representative.presentation
    apps = single_applications(w, pres)
    labels = [(pos, bottom) for pos, bottom, _ in apps]
    psis = [psi for _, _, psi in apps]
    idx = {lab: i for i, lab in enumerate(labels)}

    def adjacent(a, b):
        return are_disjoint(psis[idx[a]], psis[idx[b]])

    K = SimplicialComplex.flag_complex(labels, adjacent, max_dim, meta={"bottom": "".join(w)})
    xs = [i for i, s in enumerate(w) if s == "x"]
    as_ = [i for i, s in enumerate(w) if s == "a"]
    xr = {i: r + 1 for r, i in enumerate(xs)}
    ar = {i: r + 1 for r, i in enumerate(as_)}
    A = abstract_link(len(xs), len(as_), max_dim)
    vmap = {}
    for i, (pos, bottom) in enumerate(labels):
        if len(pos) == 3:
            model = (xr.get(pos[0]), xr.get(pos[2]), ar.get(pos[1]))
        elif len(pos) == 1:
            model = (xr.get(pos[0]),)
        else:
            model = None
        if model in A.index:
            vmap[i] = A.index[model]
    iso = len(vmap) == len(labels) and is_isomorphism(K, A, vmap)
    return DiagramLink(K, psis, vmap, A, iso)


# -- intersections of links ------------------------------------------------------


@dataclass
class Recognition:
    """What an intersection of links is isomorphic to.

    ``family`` is QV, QF or QF-runs (several separate runs of free contacts).
    ``slot_count`` is k minus the number of x-contacts used by S, the expected
    size of the model; ``exact_bookkeeping`` says whether it equals ``k_prime``.
    """

    family: str
    k_prime: int
    l_prime: int
    runs: tuple[int, ...] = ()
    slot_count: int = 0
    exact_bookkeeping: bool = True
    note: str | None = None

    def to_json(self) -> dict:
        return {
            "exact_bookkeeping": self.exact_bookkeeping,
            "family": self.family,
            "k_prime": self.k_prime,
            "l_prime": self.l_prime,
            "note": self.note,
            "runs": list(self.runs),
            "slot_count": self.slot_count,
        }


@dataclass
class Intersection:
    complex: SimplicialComplex
    recognition: Recognition
    target: SimplicialComplex
    vertex_map: dict[int, int]
    isomorphic: bool


def _runs(free: set[int], k: int, cyclic: bool) -> list[list[int]]:
    """Maximal blocks of consecutive free contacts (cyclically if asked)."""
    if not free:
        return []
    if cyclic and len(free) == k:
        return [list(range(1, k + 1))]
    start = 1
    if cyclic:
        used = [i for i in range(1, k + 1) if i not in free]
        start = used[0] % k + 1
    order = [(start - 1 + i) % k + 1 for i in range(k)] if cyclic else list(range(1, k + 1))
    out, cur = [], []
    for i in order:
        if i in free:
            cur.append(i)
        elif cur:
            out.append(cur)
            cur = []
    if cur:
        out.append(cur)
    return out


def intersect_links(K: SimplicialComplex, S: Iterable[tuple]) -> Intersection:
    """Intersection of the links of the vertices in S inside a descending link K.

    In a flag complex this is the full subcomplex on the vertices disjoint
    from every member of S.  The result is matched against a smaller model
    complex through an explicit relabelling.
    """
    S = [tuple(s) for s in S]
    family = K.meta.get("family")
    k, l = K.meta.get("k"), K.meta.get("l")
    if family not in FAMILIES or k is None or K.meta.get("kind") != "descending":
        raise ComplexError("intersect_links needs an abstract descending link", code="bad-complex")
    for s in S:
        if s not in K.index:
            raise ComplexError(f"{s} is not a vertex of the link", code="bad-vertex")
    kept = [i for i, v in enumerate(K.vertex_labels) if all(compatible(v, s) for s in S)]
    sub = K.full_subcomplex(kept)
    used_x = {m for s in S for m in slots(s)}
    used_c = {color(s) for s in S}
    free_c = [p for p in range(1, l + 1) if p not in used_c]
    cr = {p: r + 1 for r, p in enumerate(free_c)}
    lp = len(free_c)
    cap = K.truncated_at
    slot_count = k - len(used_x)
    note = None
    if family == "QV" or not S:
        free_x = [m for m in range(1, k + 1) if m not in used_x]
        xr = {m: r + 1 for r, m in enumerate(free_x)}
        rec = Recognition(family, len(free_x), lp, (), slot_count, True)
        target = abstract_descending_link(max(len(free_x), 1), lp, family, cap)
        relabel = lambda v: (xr[v[0]], xr[v[1]], cr[v[2]])  # noqa: E731
    else:
        runs = _runs({m for m in range(1, k + 1) if m not in used_x}, k, family == "QT")
        if family == "QT":
            note = "intersection of QT links is QF-type"
        pos = {m: (r, i + 1) for r, run in enumerate(runs, 1) for i, m in enumerate(run)}
        long_runs = [run for run in runs if len(run) >= 2]
        if len(long_runs) <= 1:
            L = len(long_runs[0]) if long_runs else 1
            rec = Recognition("QF", L, lp, (L,), slot_count, L == slot_count, note)
            target = abstract_descending_link(L, lp, "QF", cap)
            relabel = lambda v: (pos[v[0]][1], pos[v[1]][1], cr[v[2]])  # noqa: E731
        else:
            lens = tuple(len(run) for run in runs)
            rec = Recognition("QF-runs", max(lens), lp, lens, slot_count, False, note)
            target = run_link(lens, lp, cap)
            relabel = lambda v: (pos[v[0]][0], pos[v[0]][1], cr[v[2]])  # noqa: E731
    vmap = {}
    for i, v in enumerate(sub.vertex_labels):
        img = relabel(v)
        if img in target.index:
            vmap[i] = target.index[img]
    iso = len(vmap) == sub.n_vertices and is_isomorphism(sub, target, vmap)
    return Intersection(sub, rec, target, vmap, iso)


# -- covers and nerves ------------------------------------------------------------------


def simplicial_neighborhood(K: SimplicialComplex, v: int, skeleton_dim: int) -> SimplicialComplex:
    """Simplices of dimension <= skeleton_dim that span a simplex together with ``v``.

    For a flag complex these are the simplices on the closed neighbourhood of
    ``v``.  Vertex labels are kept from K.
    """
    if K.flag:
        keep = sorted(K.neighbours[v] | {v})
        return K.full_subcomplex(keep).skeleton(skeleton_dim)
    facets = []
    for d in range(0, min(skeleton_dim, K.dim) + 1):
        for s in K.simplices[d]:
            if v in s or K.has_simplex(s + (v,)):
                facets.append([K.vertex_labels[i] for i in s])
    return SimplicialComplex.from_facets(facets, max_dim=skeleton_dim)


def intersect_complexes(members: Sequence[SimplicialComplex]) -> SimplicialComplex:
    """Common simplices of complexes sharing vertex labels."""
    common = set(members[0].vertex_labels)
    for M in members[1:]:
        common &= set(M.vertex_labels)
    labels = sorted(common, key=_label_key)
    top = min(M.dim for M in members)
    facets = []
    for d in range(top + 1):
        layer = set.intersection(*(M.labelled(d) for M in members))
        facets.extend(tuple(f) for f in layer)
    return SimplicialComplex.from_facets(facets, labels) if labels else SimplicialComplex([], [[]])


def nerve_of_cover(members: Sequence[SimplicialComplex], max_dim: int | None = None,
                   labels: Sequence | None = None) -> SimplicialComplex:
    """One vertex per member, one simplex per subfamily with a common vertex."""
    if not members:
        raise ComplexError("empty cover", code="empty-cover")
    vsets = [set(M.vertex_labels) for M in members]
    n = len(members)
    simp: list[list[tuple[int, ...]]] = [[(i,) for i in range(n)]]

    def rec(chosen, common):
        d = len(chosen)
        if max_dim is not None and d > max_dim:
            return
        for j in range(chosen[-1] + 1, n):
            c2 = common & vsets[j]
            if c2:
                while len(simp) <= d:
                    simp.append([])
                simp[d].append(chosen + (j,))
                rec(chosen + (j,), c2)

    for i in range(n):
        if vsets[i]:
            rec((i,), vsets[i])
    for layer in simp:
        layer.sort()
    trunc = max_dim if max_dim is not None and len(simp) - 1 >= max_dim else None
    return SimplicialComplex(list(labels) if labels is not None else list(range(n)), simp,
                             truncated_at=trunc)


@dataclass
class CoverCertificate:
    family: str
    k: int
    l: int
    n: int
    centers: list[tuple]
    ok: bool
    simplices_checked: int
    witness: tuple | None = None
    hypothesis_ok: bool = True

    def to_json(self) -> dict:
        return {
            "centers": [list(c) for c in self.centers],
            "family": self.family,
            "hypothesis_ok": self.hypothesis_ok,
            "k": self.k,
            "l": self.l,
            "n": self.n,
            "ok": self.ok,
            "simplices_checked": self.simplices_checked,
            "witness": None if self.witness is None else [list(v) for v in self.witness],
        }


def default_centers(l: int) -> list[tuple[int, int, int]]:
    return [(m, m + 1, b) for m in (1, 2) for b in range(1, l + 1)]


def cover_by_skeleton_neighborhoods(k: int, l: int, family: str, n: int,
                                    centers: Sequence[tuple] | None = None):
    """Check that the (n+2)-skeleton of the descending link is covered by the
    (n+2)-skeleta of the simplicial neighbourhoods of the centers.

    Returns ``(members, certificate)``; the certificate carries the first
    uncovered simplex as a witness when coverage fails.
    """
    family = family.upper()
    if family not in ("QF", "QT"):
        raise ComplexError("covers are built for QF and QT", code="family")
    centers = default_centers(l) if centers is None else [tuple(c) for c in centers]
    K = abstract_descending_link(k, l, family, max_dim=n + 2)
    for c in centers:
        if c not in K.index:
            raise ComplexError(f"{c} is not a vertex of the link", code="bad-vertex")
    members = [simplicial_neighborhood(K, K.index[c], n + 2) for c in centers]
    lab = K.vertex_labels
    checked = 0
    witness = None
    for d in range(0, K.dim + 1):
        for s in K.simplices[d]:
            checked += 1
            verts = [lab[i] for i in s]
            if not any(c in verts or all(compatible(c, u) for u in verts) for c in centers):
                witness = tuple(verts)
                break
        if witness is not None:
            break
    cert = CoverCertificate(family, k, l, n, centers, witness is None, checked, witness,
                            hypothesis_ok=(k >= 3 * n + 5 and l >= 2 * n + 3))
    return members, cert

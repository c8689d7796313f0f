"""Exact homology, fundamental-group presentations and connectivity verdicts."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import Sequence

from .complexes import SimplicialComplex

CHECK_PRIMES = (2, 3, 46337)
PI1_CAVEAT = (
    "pi1 not decided: vanishing homology does not imply simple connectivity; "
    "only homological connectivity was checked"
)


class TopologyError(ValueError):
    def __init__(self, message, code="topology"):
        super().__init__(message)
        self.code = code


# -- components ------------------------------------------------------------------------


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.count = n

    def find(self, i: int) -> int:
        p = self.parent
        while p[i] != i:
            p[i] = p[p[i]]
            i = p[i]
        return i

    def union(self, i: int, j: int) -> bool:
        a, b = self.find(i), self.find(j)
        if a == b:
            return False
        if a > b:
            a, b = b, a
        self.parent[b] = a
        self.count -= 1
        return True


def connected_components(K: SimplicialComplex) -> int:
    if K.n_vertices == 0:
        raise TopologyError("empty complex", code="empty")
    uf = UnionFind(K.n_vertices)
    if K.dim >= 1:
        for i, j in K.simplices[1]:
            uf.union(i, j)
    return uf.count


# -- integer matrices -------------------------------------------------------------------


@dataclass
class IntegerMatrix:
    """Sparse integer matrix stored by columns ({row: value} per column)."""

    rows: int
    cols: int
    columns: list[dict[int, int]]

    @classmethod
    def from_dense(cls, a: Sequence[Sequence[int]]) -> "IntegerMatrix":
        rows = len(a)
        cols = len(a[0]) if rows else 0
        columns = [{i: int(a[i][j]) for i in range(rows) if a[i][j]} for j in range(cols)]
        return cls(rows, cols, columns)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols, [{} for _ in range(cols)])

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise TopologyError("shape mismatch", code="shape")
        mine = self.columns
        out = []
        for col in other.columns:
            acc: dict[int, int] = {}
            for k, v in col.items():
                for i, u in mine[k].items():
                    acc[i] = acc.get(i, 0) + u * v
            out.append({i: v for i, v in acc.items() if v})
        return IntegerMatrix(self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return all(not c for c in self.columns)

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)


def boundary_matrix(K: SimplicialComplex, d: int) -> IntegerMatrix:
    """Rows: (d-1)-simplices, columns: d-simplices, in the complex's order.

    The i-th face (drop vertex i of the ascending tuple) has sign (-1)^i.
    """
    if not 1 <= d <= K.dim:
        raise TopologyError(f"dimension {d} out of range 1..{K.dim}", code="dimension")
    row = {s: i for i, s in enumerate(K.simplices[d - 1])}
    cols = []
    for s in K.simplices[d]:
        col = {}
        for i in range(d + 1):
            col[row[s[:i] + s[i + 1:]]] = -1 if i % 2 else 1
        cols.append(col)
    return IntegerMatrix(len(K.simplices[d - 1]), len(K.simplices[d]), cols)


# -- Smith normal form --------------------------------------------------------------------


def _snf_dense(a: list[list[int]]) -> list[int]:
    """Nonzero invariant factors of a dense integer matrix (modified in place)."""
    m = len(a)
    n = len(a[0]) if m else 0
    out = []
    t = 0
    while t < m and t < n:
        # smallest nonzero entry in the remaining block as pivot
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, n):
                            ri[j] -= q * rt[j]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for row in a[t:]:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        done = False
            if done:
                # divisibility: the pivot must divide the rest of the block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                rt, rb = a[t], a[bad]
                for j in range(t, n):
                    rt[j] += rb[j]
                continue
            # move the smallest remaining entry of row/column t to the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, n):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            _, i, j = best
            if i != t:
                a[t], a[i] = a[i], a[t]
            if j != t:
                for row in a:
                    row[t], row[j] = row[j], row[t]
        out.append(abs(a[t][t]))
        t += 1
    return out


def _eliminate_units(M: IntegerMatrix) -> tuple[int, dict[int, dict[int, int]]]:
    """Pivot on +-1 entries (unimodular steps) until none remain.

    Returns the number of unit pivots and the leftover rows as {row: {col: v}}.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for j, col in enumerate(M.columns):
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
            cols.setdefault(j, set()).add(i)
    units = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(cols, key=lambda j: len(cols[j])):
            if c not in cols:
                continue
            r = None
            for i in cols[c]:
                if abs(rows[i][c]) == 1 and (r is None or len(rows[i]) < len(rows[r])):
                    r = i
            if r is None:
                continue
            prow = rows.pop(r)
            pv = prow[c]
            for i in list(cols[c]):
                if i == r:
                    continue
                row = rows[i]
                f = row[c] * pv  # pv = +-1, so row[c] / pv == row[c] * pv
                for j, v in prow.items():
                    nv = row.get(j, 0) - f * v
                    if nv:
                        if j not in row:
                            cols[j].add(i)
                        row[j] = nv
                    elif j in row:
                        del row[j]
                        cols[j].discard(i)
            for j in prow:
                cols[j].discard(r)
                if not cols[j]:
                    del cols[j]
            cols.pop(c, None)
            units += 1
            progress = True
    return units, {i: row for i, row in rows.items() if row}


def smith_normal_form(M: IntegerMatrix | Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... (unit pivots first, then dense SNF)."""
    if not isinstance(M, IntegerMatrix):
        M = IntegerMatrix.from_dense(M)
    units, rest = _eliminate_units(M)
    out = [1] * units
    if rest:
        cset = sorted({j for row in rest.values() for j in row})
        cidx = {j: t for t, j in enumerate(cset)}
        dense = []
        for row in rest.values():
            r = [0] * len(cset)
            for j, v in row.items():
                r[cidx[j]] = v
            dense.append(r)
        out.extend(_snf_dense(dense))
    out.sort()
    return out


# -- ranks ----------------------------------------------------------------------------------


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def rank_mod_p(M: IntegerMatrix, p: int, target: int | None = None) -> int:
    """Rank over GF(p) by sparse column reduction (pivot = largest row index).

    Stops early once ``target`` is reached.
    """
    if not _is_prime(p):
        raise TopologyError(f"{p} is not prime", code="not-prime")
    if p == 2:
        piv2: dict[int, set[int]] = {}
        for col in M.columns:
            c = {i for i, v in col.items() if v % 2}
            while c:
                low = max(c)
                other = piv2.get(low)
                if other is None:
                    piv2[low] = c
                    break
                c ^= other
            if target is not None and len(piv2) >= target:
                break
        return len(piv2)
    piv: dict[int, dict[int, int]] = {}
    for col in M.columns:
        c = {i: v % p for i, v in col.items() if v % p}
        while c:
            low = max(c)
            other = piv.get(low)
            if other is None:
                inv = pow(c[low], p - 2, p)
                piv[low] = {i: v * inv % p for i, v in c.items()}
                break
            f = c[low]
            for i, v in other.items():
                nv = (c.get(i, 0) - f * v) % p
                if nv:
                    c[i] = nv
                else:
                    c.pop(i, None)
        if target is not None and len(piv) >= target:
            break
    return len(piv)


def unit_pivot_rank(M: IntegerMatrix, target: int | None = None) -> tuple[int, bool]:
    """Integer column reduction that only accepts +-1 pivots.

    Returns (rank found, all pivots were units).  When the rank equals the
    true rank, the pivot columns span a direct summand, so every invariant
    factor of M is 1.
    """
    piv: dict[int, dict[int, int]] = {}
    stuck = False
    for col in M.columns:
        c = dict(col)
        while c:
            low = max(c)
            other = piv.get(low)
            if other is None:
                if abs(c[low]) == 1:
                    piv[low] = c
                else:
                    stuck = True
                break
            f = c[low] * other[low]
            for i, v in other.items():
                nv = c.get(i, 0) - f * v
                if nv:
                    c[i] = nv
                else:
                    c.pop(i, None)
        if target is not None and len(piv) >= target:
            break
    return len(piv), not stuck


def rank_rational(M: IntegerMatrix) -> int:
    return len(smith_normal_form(M))


# -- homology ---------------------------------------------------------------------------------


@dataclass
class HomologyReport:
    """Reduced Betti numbers (index 0 holds components - 1) and torsion by degree.

    ``torsion[i]`` is None when the method could not decide it.
    """

    components: int
    betti: list[int]
    torsion: list[list[int] | None]
    pi1: str | None = None
    caveat: str | None = None
    method: str = "snf"
    verdict: str | None = None
    details: dict = field(default_factory=dict)
    timings_ms: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "betti": list(self.betti),
            "caveat": self.caveat,
            "components": self.components,
            "details": self.details,
            "method": self.method,
            "pi1": self.pi1,
            "timings_ms": self.timings_ms,
            "torsion": [None if t is None else list(t) for t in self.torsion],
            "verdict": self.verdict,
        }


def _ms(t0: float) -> int:
    return int(round((time.perf_counter() - t0) * 1000))


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("QDG_THREADS", "1")))
    except ValueError:
        return 1


def _rank_job(args):
    M, p, target = args
    return rank_mod_p(M, p, target)


def homology(K: SimplicialComplex, max_degree: int, method: str = "auto") -> HomologyReport:
    """H_i for 0 <= i <= max_degree.

    ``snf`` computes exact ranks and torsion by Smith normal form.  ``modp``
    computes ranks over GF(p) for p in CHECK_PRIMES; the Betti numbers are
    certified only if all primes agree, and torsion is left undecided unless
    the integer unit-pivot reduction proves it trivial.  ``auto`` picks snf
    for complexes with at most 20000 top simplices.
    """
    if not K.complete_through(max_degree + 1):
        raise TopologyError("complex not stored to dimension max_degree + 1", code="dimension")
    t0 = time.perf_counter()
    comps = connected_components(K)
    timings = {"components": _ms(t0)}
    if method == "auto":
        method = "snf" if K.count(max_degree + 1) <= 20000 else "modp"
    if method not in ("snf", "modp"):
        raise TopologyError(f"unknown method {method!r}", code="method")
    dims = [K.count(d) for d in range(max_degree + 2)]
    # rank of d_i for i = 1..max_degree+1; rank d_1 = V - components over any ring
    ranks = {1: dims[0] - comps} if len(dims) > 1 else {}
    invariants: dict[int, list[int] | None] = {1: [1] * ranks.get(1, 0)}
    details: dict = {}
    for d in range(2, max_degree + 2):
        t1 = time.perf_counter()
        if dims[d] == 0:
            ranks[d] = 0
            invariants[d] = []
            continue
        B = boundary_matrix(K, d)
        if method == "snf":
            inv = smith_normal_form(B)
            ranks[d] = len(inv)
            invariants[d] = inv
        else:
            # a boundary of rank dims[d-1] - rank d_{d-1} kills H_{d-1}; stop there
            target = dims[d - 1] - ranks[d - 1]
            jobs = [(B, p, target) for p in CHECK_PRIMES]
            w = min(_workers(), len(jobs))
            if w > 1:
                from concurrent.futures import ProcessPoolExecutor

                with ProcessPoolExecutor(w) as ex:
                    rs = list(ex.map(_rank_job, jobs))
            else:
                rs = [_rank_job(j) for j in jobs]
            agree = len(set(rs)) == 1
            ranks[d] = rs[0]
            r_int, units = unit_pivot_rank(B, target) if agree and rs[0] == target else (None, False)
            unit_cert = agree and rs[0] == target and r_int == target and units
            invariants[d] = [1] * target if unit_cert else None
            details[f"d{d}"] = {
                "expected_rank": target,
                "primes": list(CHECK_PRIMES),
                "rank_mod_p": rs,
                "primes_agree": agree,
                "integer_unit_pivots": unit_cert,
            }
        timings[f"d{d}"] = _ms(t1)
    betti = []
    torsion: list[list[int] | None] = []
    for i in range(max_degree + 1):
        r_in = ranks.get(i + 1, 0)
        r_out = ranks.get(i, 0)
        b = dims[i] - r_out - r_in
        if i == 0:
            b = comps - 1
        betti.append(b)
        inv = invariants.get(i + 1, [])
        torsion.append(None if inv is None else [x for x in inv if x > 1])
    timings["total"] = _ms(t0)
    return HomologyReport(comps, betti, torsion, method=method, details=details, timings_ms=timings)


# -- fundamental group -------------------------------------------------------------------------


@dataclass
class GroupPresentation:
    generators: list[int]
    relators: list[tuple[int, ...]]  # signed 1-based generator indices
    edge_of: dict[int, tuple[int, int]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"generators": list(self.generators), "relators": [list(r) for r in self.relators]}


def fundamental_group(K: SimplicialComplex, spanning_tree_seed: int = 0) -> GroupPresentation:
    """Edge-path presentation with a breadth-first spanning tree rooted at ``spanning_tree_seed``.

    Generator g (1-based) is the g-th non-tree edge (i < j) oriented i -> j;
    each triangle (a, b, c) contributes the relator [ab][bc][ca].
    """
    if connected_components(K) != 1:
        raise TopologyError("fundamental_group needs a connected complex", code="disconnected")
    if not K.complete_through(2):
        raise TopologyError("need the full 2-skeleton", code="dimension")
    root = spanning_tree_seed
    if not 0 <= root < K.n_vertices:
        raise TopologyError("seed vertex out of range", code="seed")
    nb = K.neighbours
    seen = {root}
    tree = set()
    frontier = [root]
    while frontier:
        nxt = []
        for v in frontier:
            for u in sorted(nb[v]):
                if u not in seen:
                    seen.add(u)
                    tree.add((min(u, v), max(u, v)))
                    nxt.append(u)
        frontier = nxt
    gen = {}
    edge_of = {}
    for e in (K.simplices[1] if K.dim >= 1 else ()):
        if e not in tree:
            gen[e] = len(gen) + 1
            edge_of[gen[e]] = e
    rels = []
    for a, b, c in (K.simplices[2] if K.dim >= 2 else ()):
        word = []
        for e, s in (((a, b), 1), ((b, c), 1), ((a, c), -1)):
            g = gen.get(e)
            if g is not None:
                word.append(s * g)
        rels.append(tuple(word))
    return GroupPresentation(list(gen.values()), rels, edge_of)


def _free_reduce(word: list[int]) -> list[int]:
    out: list[int] = []
    for g in word:
        if out and out[-1] == -g:
            out.pop()
        else:
            out.append(g)
    while len(out) >= 2 and out[0] == -out[-1]:
        out = out[1:-1]
    return out


@dataclass
class TietzeResult:
    trivial: bool
    moves: int
    presentation: GroupPresentation

    @property
    def status(self) -> str:
        return "trivial" if self.trivial else "stuck"


def tietze_simplify(P: GroupPresentation, move_budget: int = 10**6) -> TietzeResult:
    """Kill generators by length-1 relators, identify them by length-2 relators.

    Generators are tracked in a signed union-find; ``None`` means killed.
    Every relator rewrite counts as one move.
    """
    parent: dict[int, tuple[int, int] | None] = {g: (g, 1) for g in P.generators}

    def find(g: int):
        path = []
        sign = 1
        while True:
            p = parent[g]
            if p is None:
                res = None
                break
            h, s = p
            if h == g:
                res = (g, 1)
                break
            path.append((g, s))
            sign *= s
            g = h
        if res is None:
            for x, _ in path:
                parent[x] = None
            return None
        # path compression
        acc = 1
        for x, s in reversed(path):
            acc *= s
            parent[x] = (res[0], acc)
        return (res[0], sign)

    def rewrite(r):
        out = []
        for x in r:
            f = find(abs(x))
            if f is None:
                continue
            g, s = f
            out.append(g * s * (1 if x > 0 else -1))
        return _free_reduce(out)

    rels = [list(r) for r in P.relators]
    moves = 0
    changed = True
    while changed and moves < move_budget:
        changed = False
        keep = []
        for r in rels:
            if moves >= move_budget:
                keep.append(r)
                continue
            moves += 1
            r = rewrite(r)
            if not r:
                continue
            if len(r) == 1:
                parent[abs(r[0])] = None
                changed = True
                continue
            if len(r) == 2 and abs(r[0]) != abs(r[1]):
                # a^e b^f = 1  =>  b = a^(-e f)
                a, b = r
                s = -(1 if a > 0 else -1) * (1 if b > 0 else -1)
                parent[abs(b)] = (abs(a), s)
                changed = True
                continue
            keep.append(r)
        rels = keep
    alive = sorted(g for g in P.generators if parent[g] is not None and parent[g][0] == g)
    rels = [tuple(rewrite(r)) for r in rels]
    rels = [r for r in rels if r]
    return TietzeResult(not alive, moves, GroupPresentation(alive, rels))


# -- verdicts -----------------------------------------------------------------------------------


def check_n_connected(K: SimplicialComplex, n: int, mode: str = "strict",
                      method: str = "auto", move_budget: int = 10**6) -> HomologyReport:
    """components = 1 and vanishing reduced homology through degree n; in strict
    mode also a Tietze-trivial fundamental group when n >= 1."""
    if mode not in ("strict", "homology-only"):
        raise TopologyError(f"unknown mode {mode!r}", code="mode")
    if not K.complete_through(n + 1):
        raise TopologyError("complex not stored to dimension n + 1", code="dimension")
    if K.n_vertices == 0:
        return HomologyReport(0, [], [], pi1=None, method=method, verdict="fail",
                              details={"reason": "empty complex"})
    if n <= 0:
        t0 = time.perf_counter()
        c = connected_components(K)
        rep = HomologyReport(c, [c - 1], [[]], method="union-find",
                             timings_ms={"total": _ms(t0)})
        # (-1)-connected only asks for a nonempty complex
        rep.verdict = "pass" if c == 1 or n < 0 else "fail"
        return rep
    rep = homology(K, n, method)
    ok = rep.components == 1 and all(b == 0 for b in rep.betti)
    torsion_known = all(t is not None for t in rep.torsion)
    ok_torsion = all(t == [] for t in rep.torsion if t is not None)
    if rep.method == "modp":
        ok = ok and all(v.get("primes_agree") for v in rep.details.values())
    ok = ok and ok_torsion
    if mode == "strict":
        if not torsion_known:
            ok = False
            rep.details["reason"] = "torsion undecided in strict mode"
        t0 = time.perf_counter()
        if rep.components == 1:
            res = tietze_simplify(fundamental_group(K), move_budget)
            rep.pi1 = "trivial" if res.trivial else (
                "nontrivial" if rep.betti[1] != 0 else "inconclusive")
            rep.details["tietze_moves"] = res.moves
            rep.details["pi1_generators_left"] = len(res.presentation.generators)
        else:
            rep.pi1 = "nontrivial"
        rep.timings_ms["pi1"] = _ms(t0)
        if rep.pi1 != "trivial":
            ok = False
        if rep.pi1 == "inconclusive":
            rep.caveat = PI1_CAVEAT
    else:
        rep.pi1 = "nontrivial" if (rep.betti and len(rep.betti) > 1 and rep.betti[1]) else "inconclusive"
        if rep.pi1 == "inconclusive":
            rep.caveat = PI1_CAVEAT
        if not torsion_known:
            primes = ", ".join(str(p) for p in CHECK_PRIMES)
            rep.caveat = (rep.caveat or "") + f"; torsion excluded only at primes {primes}"
    rep.verdict = "pass" if ok else "fail"
    return rep

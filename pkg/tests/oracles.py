"""Independent reference computations used by the tests."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd

from qdg.complexes import SimplicialComplex


def det(rows) -> int:
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    sign = 1
    out = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        out *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for j in range(c, n):
                    a[r][j] -= f * a[c][j]
    return int(sign * out)


def minor_gcds(m) -> list[int]:
    """d_k = gcd of all k x k minors, for k = 1 .. min(rows, cols); zeros dropped at the tail."""
    rows, cols = len(m), len(m[0]) if m else 0
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                g = gcd(g, det([[m[r][c] for c in ci] for r in ri]))
        if g == 0:
            break
        out.append(g)
    return out


def invariants_from_minors(m) -> list[int]:
    d = minor_gcds(m)
    return [d[0]] + [d[i] // d[i - 1] for i in range(1, len(d))] if d else []


def boundary_of_simplex(n: int) -> SimplicialComplex:
    """The (n-1)-sphere as the boundary of the n-simplex."""
    return SimplicialComplex.from_facets(itertools.combinations(range(n + 1), n))


def simplex(n: int) -> SimplicialComplex:
    return SimplicialComplex.from_facets([range(n + 1)])


def torus() -> SimplicialComplex:
    facets = []
    for i in range(7):
        facets.append([i, (i + 1) % 7, (i + 3) % 7])
        facets.append([i, (i + 2) % 7, (i + 3) % 7])
    return SimplicialComplex.from_facets(facets)


def projective_plane() -> SimplicialComplex:
    facets = ["123", "134", "145", "156", "162", "235", "346", "452", "563", "624"]
    return SimplicialComplex.from_facets([[int(c) for c in f] for f in facets])


def euler_characteristic(K: SimplicialComplex) -> int:
    return sum((-1) ** d * c for d, c in enumerate(K.f_vector()))

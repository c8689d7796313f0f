import random

import pytest
from hypothesis import given, strategies as st

from oracles import (
    boundary_of_simplex,
    euler_characteristic,
    invariants_from_minors,
    projective_plane,
    simplex,
    torus,
)
from qdg.complexes import SimplicialComplex, abstract_descending_link, abstract_link
from qdg.topology import (
    CHECK_PRIMES,
    IntegerMatrix,
    TopologyError,
    UnionFind,
    boundary_matrix,
    check_n_connected,
    connected_components,
    fundamental_group,
    homology,
    rank_mod_p,
    rank_rational,
    smith_normal_form,
    tietze_simplify,
    unit_pivot_rank,
)

entries = st.integers(-6, 6)


@st.composite
def matrices(draw, max_size=4):
    r = draw(st.integers(1, max_size))
    c = draw(st.integers(1, max_size))
    return draw(st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r))


@st.composite
def complexes(draw):
    n = draw(st.integers(1, 7))
    facets = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=1, max_size=4, unique=True),
                           min_size=1, max_size=10))
    return SimplicialComplex.from_facets(facets)


@given(matrices())
def test_snf_matches_minor_gcds(m):
    inv = smith_normal_form(m)
    assert inv == invariants_from_minors(m)
    assert all(b % a == 0 for a, b in zip(inv, inv[1:]))
    assert all(a > 0 for a in inv)


def test_snf_golden():
    assert smith_normal_form([[2, 0], [0, 3]]) == [1, 6]
    assert smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]
    assert smith_normal_form(IntegerMatrix.zeros(3, 2)) == []


@given(matrices(max_size=6))
def test_ranks_agree(m):
    M = IntegerMatrix.from_dense(m)
    r = rank_rational(M)
    for p in CHECK_PRIMES:
        assert rank_mod_p(M, p) <= r
    assert rank_mod_p(M, 46337) == r  # entries are far below the prime
    ur, units = unit_pivot_rank(M)
    assert ur <= r
    if units and ur == r:
        assert all(x == 1 for x in smith_normal_form(m))


@given(matrices(max_size=5))
def test_dense_round_trip(m):
    M = IntegerMatrix.from_dense(m)
    assert M.to_dense() == [list(r) for r in m]


@given(complexes())
def test_boundary_squares_to_zero(K):
    for d in range(2, K.dim + 1):
        assert (boundary_matrix(K, d - 1) @ boundary_matrix(K, d)).is_zero()


@given(complexes())
def test_euler_characteristic(K):
    rep = homology(K, K.dim, "snf") if K.dim >= 0 and K.complete_through(K.dim + 1) else None
    if rep is None:
        return
    unreduced = [rep.betti[0] + 1] + rep.betti[1:]
    assert sum((-1) ** i * b for i, b in enumerate(unreduced)) == euler_characteristic(K)


@given(complexes())
def test_union_find_matches_homology(K):
    uf = UnionFind(K.n_vertices)
    for i, j in (K.simplices[1] if K.dim >= 1 else ()):
        uf.union(i, j)
    roots = {uf.find(i) for i in range(K.n_vertices)}
    assert connected_components(K) == len(roots)


@pytest.mark.parametrize(
    "K,betti,torsion",
    [
        (simplex(3), [0, 0, 0], [[], [], []]),
        (boundary_of_simplex(2), [0, 1], [[], []]),
        (boundary_of_simplex(3), [0, 0, 1], [[], [], []]),
        (boundary_of_simplex(4), [0, 0, 0, 1], [[], [], [], []]),
        (torus(), [0, 2, 1], [[], [], []]),
        (projective_plane(), [0, 0, 0], [[], [2], []]),
    ],
)
def test_golden_homology(K, betti, torsion):
    rep = homology(K, len(betti) - 1, "snf")
    assert rep.betti == betti
    assert rep.torsion == torsion


def test_modp_agrees_and_leaves_torsion_open():
    rep = homology(projective_plane(), 1, "modp")
    # mod 2 sees the torsion, the other primes do not
    assert not rep.details["d2"]["primes_agree"]
    assert rep.torsion[1] is None
    rep = homology(boundary_of_simplex(3), 1, "modp")
    assert rep.betti == [0, 0] and rep.torsion == [[], []]
    assert rep.details["d2"]["integer_unit_pivots"]


def test_fundamental_groups():
    assert tietze_simplify(fundamental_group(simplex(2))).trivial
    assert tietze_simplify(fundamental_group(boundary_of_simplex(3))).trivial
    circle = tietze_simplify(fundamental_group(boundary_of_simplex(2)))
    assert not circle.trivial and len(circle.presentation.generators) == 1
    assert not tietze_simplify(fundamental_group(torus())).trivial
    for root in range(4):
        assert tietze_simplify(fundamental_group(boundary_of_simplex(3), root)).trivial
    with pytest.raises(TopologyError):
        fundamental_group(boundary_of_simplex(3), 4)
    with pytest.raises(TopologyError):
        fundamental_group(SimplicialComplex.from_facets([[0], [1]]))


def test_connectivity_verdicts():
    assert check_n_connected(boundary_of_simplex(3), 1).verdict == "pass"
    assert check_n_connected(boundary_of_simplex(2), 1).verdict == "fail"
    assert check_n_connected(boundary_of_simplex(2), 0).verdict == "pass"
    assert check_n_connected(projective_plane(), 1).verdict == "fail"
    rep = check_n_connected(boundary_of_simplex(3), 1, mode="homology-only")
    assert rep.verdict == "pass" and rep.pi1 == "inconclusive" and rep.caveat
    with pytest.raises(TopologyError):
        check_n_connected(abstract_descending_link(5, 3, "QF", max_dim=1), 1)
    with pytest.raises(TopologyError):
        check_n_connected(simplex(2), 0, mode="loose")


def test_links_at_the_bounds_n0():
    for fam in ("QF", "QT", "QV"):
        assert check_n_connected(abstract_descending_link(5, 3, fam, max_dim=1), 0).verdict == "pass"


def test_small_link_is_not_connected():
    # a single merge colour class: every vertex clashes with every other
    K = abstract_descending_link(3, 1, "QF", max_dim=1)
    assert connected_components(K) == 2


@given(st.integers(2, 5), st.integers(1, 3))
def test_boundary_squares_to_zero_on_links(k, l):
    K = abstract_link(k, l, max_dim=3)
    for d in range(2, K.dim + 1):
        assert (boundary_matrix(K, d - 1) @ boundary_matrix(K, d)).is_zero()


def test_modp_and_snf_agree_on_links():
    K = abstract_descending_link(6, 4, "QF", max_dim=2)
    a = homology(K, 1, "snf")
    b = homology(K, 1, "modp")
    assert a.betti == b.betti and a.components == b.components


def test_random_sparse_rank_early_stop():
    rng = random.Random(7)
    m = [[rng.choice([0, 0, 1, -1, 2]) for _ in range(12)] for _ in range(9)]
    M = IntegerMatrix.from_dense(m)
    r = rank_rational(M)
    assert rank_mod_p(M, 3, target=r) <= r

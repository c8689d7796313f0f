import itertools
import random

import pytest
from hypothesis import given, strategies as st

from conftest import seeds
from qdg.complexes import (
    ComplexError,
    ComplexVertex,
    MarkedCube,
    SimplicialComplex,
    abstract_descending_link,
    abstract_link,
    are_disjoint,
    compatible,
    cover_by_skeleton_neighborhoods,
    default_centers,
    filtration_level,
    full_subcomplex_check,
    intersect_complexes,
    intersect_links,
    is_flag,
    is_isomorphism,
    link_from_diagrams,
    nerve_of_cover,
    realize_cube,
    run_link,
    same_orbit,
    simplicial_neighborhood,
    single_applications,
)
from qdg.diagram import identity_diagram, permutation_diagram, single_transistor_diagram
from qdg.figures import load_fixture
from qdg.presentation import QV_BASE, V_BASE
from qdg.topology import connected_components

small_kl = st.tuples(st.integers(1, 6), st.integers(0, 3))
families = st.sampled_from(["QF", "QT", "QV"])


@st.composite
def facet_lists(draw):
    n = draw(st.integers(1, 7))
    facets = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=1, max_size=4, unique=True),
                           min_size=1, max_size=8))
    return facets


@given(facet_lists())
def test_from_facets_is_closed_under_faces(facets):
    K = SimplicialComplex.from_facets(facets)
    for d in range(1, K.dim + 1):
        for s in K.simplices[d]:
            for face in itertools.combinations(s, d):
                assert K.has_simplex(face)
    assert SimplicialComplex.from_json(K.to_json()).f_vector() == K.f_vector()


def test_from_json_rejects_missing_faces():
    obj = {"vertices": [0, 1, 2], "simplices": [[[0], [1], [2]], [[0, 1]], [[0, 1, 2]]]}
    with pytest.raises(ComplexError):
        SimplicialComplex.from_json(obj)


@given(small_kl, families)
def test_descending_links_are_flag_and_full_in_qv(kl, family):
    k, l = kl
    K = abstract_descending_link(k, l, family, max_dim=3)
    assert is_flag(K)
    if family != "QV":
        assert full_subcomplex_check(K, abstract_descending_link(k, l, "QV", max_dim=3))


@given(small_kl)
def test_skeleton_and_truncation(kl):
    k, l = kl
    K = abstract_link(k, l)
    S = K.skeleton(1)
    assert S.f_vector() == K.f_vector()[:2]
    assert S.flag and is_flag(S)
    assert S.complete_through(1)


@pytest.mark.parametrize("k,l", [(k, l) for k in range(1, 5) for l in range(0, 4)])
def test_diagram_link_matches_model(k, l):
    w = "x" * k + "a" * l
    L = link_from_diagrams(ComplexVertex.of(identity_diagram(QV_BASE, w)))
    assert L.isomorphic
    assert is_isomorphism(L.complex, L.abstract, L.to_abstract)


@given(st.integers(2, 4), st.integers(1, 2), seeds)
def test_diagram_link_ignores_bottom_order(k, l, seed):
    w = list("x" * k + "a" * l)
    random.Random(seed).shuffle(w)
    L = link_from_diagrams(ComplexVertex.of(identity_diagram(QV_BASE, w)))
    assert L.isomorphic


def test_single_applications_count():
    # x^2 a: splits of each x, merges of ordered x-pairs through the a
    apps = single_applications(tuple("xxa"), QV_BASE)
    assert len(apps) == 2 + 2


@st.composite
def vertex_sets(draw, family, k, l):
    K = abstract_descending_link(k, l, family, max_dim=2)
    size = draw(st.integers(0, 3))
    picks = draw(st.lists(st.sampled_from(K.vertex_labels), min_size=size, max_size=size))
    return K, picks


@given(st.data(), families)
def test_intersections_match_recognized_models(data, family):
    K, S = data.draw(vertex_sets(family, 7, 4))
    inter = intersect_links(K, S)
    assert inter.isomorphic
    rec = inter.recognition
    if family == "QV":
        assert rec.exact_bookkeeping and rec.k_prime == rec.slot_count
    if family == "QT" and S:
        assert rec.note is not None
    assert rec.l_prime == 4 - len({s[2] for s in S})


def test_intersection_needs_descending_link():
    with pytest.raises(ComplexError):
        intersect_links(abstract_link(3, 2), [])
    K = abstract_descending_link(4, 2, "QF")
    with pytest.raises(ComplexError):
        intersect_links(K, [(1, 3, 1)])


def test_run_link_single_run_is_qf():
    A = run_link((5,), 3)
    B = abstract_descending_link(5, 3, "QF")
    vmap = {i: B.index[(v[1], v[1] + 1, v[2])] for i, v in enumerate(A.vertex_labels)}
    assert is_isomorphism(A, B, vmap)


def test_cover_certificates():
    members, cert = cover_by_skeleton_neighborhoods(5, 3, "QF", 0)
    assert cert.ok and cert.hypothesis_ok and len(members) == 6
    members, cert = cover_by_skeleton_neighborhoods(8, 5, "QF", 1)
    assert cert.ok and cert.simplices_checked > 0
    _, bad = cover_by_skeleton_neighborhoods(8, 5, "QF", 1, centers=[(2, 3, 1)])
    assert not bad.ok and bad.witness == ((1, 2, 1),)
    assert bad.to_json()["witness"] == [[1, 2, 1]]


def test_nerve_consistency():
    members, _ = cover_by_skeleton_neighborhoods(5, 3, "QF", 0)
    N = nerve_of_cover(members)
    assert N.f_vector() == [6, 15, 12, 3]
    assert nerve_of_cover(members, max_dim=2).f_vector() == [6, 15, 12]
    assert connected_components(N) == 1
    for r in (2, 3):
        for fam in itertools.combinations(range(len(members)), r):
            common = intersect_complexes([members[i] for i in fam])
            assert N.has_simplex(fam) == (common.n_vertices > 0)


def test_flag_neighbourhood_is_the_star():
    K = abstract_descending_link(6, 3, "QF", max_dim=3)
    for v in range(0, K.n_vertices, 3):
        nb = simplicial_neighborhood(K, v, 2)
        star = {frozenset(K.vertex_labels[i] for i in s)
                for d in range(3) for s in K.simplices[d]
                if v in s or K.has_simplex(tuple(sorted(s + (v,))))}
        got = {frozenset(nb.vertex_labels[i] for i in s) for d in range(nb.dim + 1) for s in nb.simplices[d]}
        assert got == star


def test_cover_members_meet_at_n_equal_one():
    members, _ = cover_by_skeleton_neighborhoods(8, 5, "QF", 1)
    vsets = [set(M.vertex_labels) for M in members]
    for fam in itertools.combinations(range(len(members)), 4):
        assert set.intersection(*(vsets[i] for i in fam))


def test_default_centers():
    assert default_centers(2) == [(1, 2, 1), (1, 2, 2), (2, 3, 1), (2, 3, 2)]
    assert all(not compatible(c, c) for c in default_centers(3))


def test_vertices_and_cubes():
    v = ComplexVertex.of(identity_diagram(QV_BASE, "xaxax"))
    assert filtration_level(v).j == 3
    assert same_orbit(v, ComplexVertex.of(identity_diagram(QV_BASE, "xxxaa")))
    # permuting the bottom does not change the vertex
    assert v == ComplexVertex.of(permutation_diagram(QV_BASE, "xaxax", (4, 3, 2, 1, 0)))
    with pytest.raises(ComplexError):
        filtration_level(ComplexVertex.of(identity_diagram(QV_BASE, "xxaa")))
    psi = load_fixture("figure2_psi")
    cube = MarkedCube(identity_diagram(V_BASE, "xxxx"), psi)
    sizes = {c: len(realize_cube(cube, c).representative.transistors)
             for c in [(0, 0), (1, 0), (0, 1), (1, 1)]}
    assert sizes == {(0, 0): 0, (1, 0): 1, (0, 1): 1, (1, 1): 2}


def test_disjoint_applications():
    a = single_transistor_diagram(V_BASE, "xxx", (0,), "xx")
    b = single_transistor_diagram(V_BASE, "xxx", (1, 2), "x")
    c = single_transistor_diagram(V_BASE, "xxx", (2, 0), "x")
    assert are_disjoint(a, b) and not are_disjoint(a, c) and not are_disjoint(b, c)

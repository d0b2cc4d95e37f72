from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from hexind.complex import (FaceBudgetExceeded, HomologyProfile, IntegerMatrix, boundary_matrix,
                            check_link_deletion_split, complex_from_faces, graph_homology, independence_complex,
                            reduced_homology, smith_normal_form)
from hexind.graphs import Graph, VertexLabel, cycle, disjoint_union, hex_grid, named_family, path, star, v
from oracle import brute_betti, brute_independent_sets, determinantal_invariants

from test_graphs import graph_strategy, random_graph


def test_c6_f_vector():
    k = independence_complex(cycle(6))
    assert k.f_vector == (1, 6, 9, 2)
    assert k.n_faces == len(brute_independent_sets(cycle(6).vertices, cycle(6).edges()))


@pytest.mark.parametrize("g", [hex_grid(1, 2), named_family("Z3", 2), star(4), cycle(7)])
def test_boundary_squares_to_zero(g):
    k = independence_complex(g)
    for d in range(1, k.dim):
        assert (boundary_matrix(k, d) @ boundary_matrix(k, d + 1)).is_zero()


def test_boundary_matrix_range():
    k = independence_complex(path(3))
    assert boundary_matrix(k, 0).rows == 1
    with pytest.raises(ValueError):
        boundary_matrix(k, k.dim + 2)


@pytest.mark.parametrize("name,n", [("H1", 1), ("H1", 2), ("X2", 3), ("Y", 1), ("Z3", 1), ("C", 9), ("P", 8)])
def test_homology_against_brute_oracle(name, n):
    g = named_family(name, n)
    exact = reduced_homology(independence_complex(g), "exact")
    rational = reduced_homology(independence_complex(g), "rational")
    want = brute_betti(g.vertices, g.edges())
    assert exact.betti == want
    assert rational.betti == want
    assert exact.torsion_free


def test_empty_graph_gives_empty_complex():
    prof = reduced_homology(independence_complex(Graph([])), "exact")
    assert prof.empty_complex
    assert prof.to_json_dict()["empty_complex"] is True
    assert HomologyProfile.from_json_dict(prof.to_json_dict()) == prof


def test_cone_is_acyclic():
    g = disjoint_union(hex_grid(1, 2), path(1, "q"))
    assert reduced_homology(independence_complex(g)).is_trivial()


def test_p2_component_suspends():
    base = hex_grid(1, 2)
    plus = disjoint_union(base, path(2, "q"))
    a = graph_homology(base, reduce_first=False)
    b = graph_homology(plus, reduce_first=False)
    assert b.same_groups(a.shift(1))


def test_relabelling_does_not_change_homology():
    g = named_family("Z1", 1)
    rng = random.Random(7)
    perm = list(range(g.n_vertices))
    rng.shuffle(perm)
    label = {u: VertexLabel(0, perm[i] + 1, "r") for i, u in enumerate(g.vertices)}
    h = Graph(sorted(label.values()), [(label[a], label[b]) for a, b in g.edges()])
    assert graph_homology(g, reduce_first=False).same_groups(graph_homology(h, reduce_first=False))


def test_face_budget():
    with pytest.raises(FaceBudgetExceeded) as info:
        independence_complex(hex_grid(2, 2), max_faces=50)
    assert info.value.budget == 50


def test_complex_from_faces_closes_down():
    k = complex_from_faces([v(1, 1), v(1, 2), v(1, 3)], [(0, 1, 2)])
    assert k.f_vector == (1, 3, 3, 1)
    assert reduced_homology(k).is_trivial()


def test_hollow_triangle_and_projective_plane_torsion():
    tri = complex_from_faces([v(1, i) for i in range(3)], [(0, 1), (1, 2), (0, 2)])
    assert reduced_homology(tri).betti == {1: 1}
    # six-vertex triangulation of RP^2
    rp2 = [(0, 1, 3), (0, 1, 5), (0, 2, 4), (0, 2, 5), (0, 3, 4), (1, 2, 3), (1, 2, 4), (1, 4, 5), (2, 3, 5), (3, 4, 5)]
    k = complex_from_faces([v(1, i) for i in range(6)], rp2)
    prof = reduced_homology(k, "exact")
    assert prof.betti == {} and prof.torsion == {1: (2,)}
    assert reduced_homology(k, "rational").betti == {}


@pytest.mark.parametrize("dense", [
    [[2, 4, 4], [-6, 6, 12], [10, -4, -16]],
    [[2, 0], [0, 3]],
    [[0, 0], [0, 0]],
    [[6, 4], [4, 6], [2, 2]],
    [[1, 2, 3], [4, 5, 6], [7, 8, 9]],
])
def test_smith_normal_form_against_minors(dense):
    factors, rank = smith_normal_form(IntegerMatrix.from_dense(dense))
    want = determinantal_invariants(dense)
    assert factors == want and rank == len(want)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=3))
def test_smith_normal_form_random(dense):
    factors, rank = smith_normal_form(IntegerMatrix.from_dense(dense))
    assert factors == determinantal_invariants(dense)
    assert all(b % a == 0 for a, b in zip(factors, factors[1:]))


@settings(max_examples=60, deadline=None)
@given(graph_strategy)
def test_random_graphs_match_brute(g):
    k = independence_complex(g)
    prof = reduced_homology(k, "exact")
    assert prof.betti == brute_betti(g.vertices, g.edges())
    assert reduced_homology(k, "rational").betti == prof.betti
    chi = sum((-1) ** d * r for d, r in prof.betti.items())
    assert chi == sum((-1) ** (i - 1) * f for i, f in enumerate(k.f_vector))


def test_split_examples():
    assert check_link_deletion_split(hex_grid(1, 2), v(1, 5)).status == "consistent"
    # a vertex of C6: deletion P5 gives S^1, link P3 gives S^0, whole is 2 x S^1
    rep = check_link_deletion_split(cycle(6), cycle(6).vertices[0])
    assert rep.consistent and rep.deletion.betti == {1: 1} and rep.link.betti == {0: 1}
    # star centre: the link is the empty complex, so it contributes S^0
    s = star(3)
    center = [u for u in s if s.degree(u) == 3][0]
    rep = check_link_deletion_split(s, center)
    assert rep.whole.betti == {0: 1} and rep.link.empty_complex and rep.consistent


def test_c4_splits():
    g = random_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    rep = check_link_deletion_split(g, g.vertices[0])
    assert rep.whole.betti == {0: 1} and rep.consistent


def test_split_absent_detected():
    # isolated vertex: the whole complex is a cone but deletion and link are both S^0
    g = random_graph(3, [(0, 1)])
    rep = check_link_deletion_split(g, g.vertices[2])
    assert rep.whole.is_trivial()
    assert rep.status == "splitting absent"

from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from hexind import graphs
from hexind.graphs import (FAMILIES, Graph, VertexLabel, connected_components, cycle, delete_closed_neighborhood,
                           delete_vertices, disjoint_union, find_isomorphism, hex_grid, isomorphism_check,
                           named_family, path, v)


def random_graph(n: int, edges) -> Graph:
    vs = [VertexLabel(0, i + 1, "g") for i in range(n)]
    return Graph(vs, [(vs[a], vs[b]) for a, b in edges if a != b])


graph_strategy = st.integers(1, 9).flatmap(
    lambda n: st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=20).map(
        lambda es: random_graph(n, es)))


@pytest.mark.parametrize("m,n,nv,ne", [
    (1, 1, 6, 6), (1, 2, 10, 11), (1, 3, 14, 16), (2, 1, 10, 11), (2, 2, 16, 19), (3, 1, 14, 16), (3, 2, 22, 27),
])
def test_hex_grid_counts(m, n, nv, ne):
    # m x n hexagons: V = 2(m+1)(n+1) - 2, E = V + mn - 1
    g = hex_grid(m, n)
    assert (g.n_vertices, g.n_edges) == (nv, ne)


def test_hex_grid_is_bipartite_with_max_degree_three():
    g = hex_grid(3, 4)
    assert max(g.degree(u) for u in g) == 3
    color = {}
    for start in g:
        if start in color:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            a = stack.pop()
            for b in g.neighbors(a):
                if b not in color:
                    color[b] = 1 - color[a]
                    stack.append(b)
                assert color[b] != color[a]


def test_single_hexagon_is_c6():
    assert isomorphism_check(hex_grid(1, 1), cycle(6))


def test_row_lengths():
    g = hex_grid(3, 2)
    rows = {}
    for u in g:
        rows[u.row] = rows.get(u.row, 0) + 1
    assert rows == {1: 5, 2: 6, 3: 6, 4: 5}


def test_known_small_coincidences():
    assert isomorphism_check(named_family("Y", 1), named_family("X2", 2))
    assert isomorphism_check(named_family("Z3", 1), named_family("H1", 2))
    assert isomorphism_check(named_family("H3", 2), named_family("H2", 3))
    assert named_family("Z1", 1).n_vertices == 11


def test_x_families():
    h = named_family("H1", 3)
    x1, x2 = named_family("X1", 3), named_family("X2", 3)
    assert x1.n_vertices == h.n_vertices - 1
    assert x2 == delete_closed_neighborhood(h, v(1, 7))


def test_every_family_builds_at_its_minimum():
    for name, spec in FAMILIES.items():
        g = named_family(name, spec.n_min)
        assert g.n_vertices > 0 or name == "P", name


def test_family_bounds_are_enforced():
    with pytest.raises(ValueError):
        named_family("Y1", 4)
    with pytest.raises(ValueError):
        named_family("nope", 3)


def test_label_parse_round_trip():
    for text in ["1:1", "3:12", "p4", "c2", "x2:5"]:
        assert str(VertexLabel.parse(text)) == text
    with pytest.raises(ValueError):
        VertexLabel.parse("7")
    with pytest.raises(ValueError):
        VertexLabel.parse("1-2")


def test_components_and_union():
    g = disjoint_union(path(2, "a"), cycle(5, "b"), path(1, "c"))
    sizes = sorted(c.n_vertices for c in connected_components(g))
    assert sizes == [1, 2, 5]


def test_isomorphism_negative_and_mapping():
    assert not isomorphism_check(path(6), cycle(6))
    iso = find_isomorphism(hex_grid(1, 2), hex_grid(1, 2))
    assert iso is not None and len(iso) == 10


@pytest.mark.parametrize("name,n", [("H2", 2), ("Z3", 3), ("P", 4), ("C", 7)])
def test_json_and_dot_round_trip(name, n):
    g = named_family(name, n)
    assert graphs.from_json(graphs.to_json(g)) == g
    assert graphs.from_dot(graphs.to_dot(g)) == g


@settings(max_examples=80, deadline=None)
@given(graph_strategy)
def test_random_graph_invariants(g):
    assert sum(g.degree(u) for u in g) == 2 * g.n_edges
    for a, b in g.edges():
        assert b in g.neighbors(a) and a in g.neighbors(b)
    assert sum(c.n_vertices for c in connected_components(g)) == g.n_vertices
    assert graphs.from_json(graphs.to_json(g)) == g
    u = g.vertices[0]
    assert u not in delete_vertices(g, [u])
    assert not (g.closed_neighborhood(u) & set(delete_closed_neighborhood(g, u).vertices))

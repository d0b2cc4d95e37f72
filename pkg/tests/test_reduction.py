from __future__ import annotations

import pytest
from hypothesis import given, settings

from hexind.complex import graph_homology
from hexind.graphs import cycle, delete_vertices, disjoint_union, hex_grid, named_family, path, star, v
from hexind.reduction import (FoldPreconditionViolated, apply_scripted_folds, eval_index, find_fold_pairs,
                              format_fold_script, parse_fold_script, reduce, resolve_label)

from test_graphs import graph_strategy


def test_path_reduces_by_folds():
    out = reduce(path(8))
    assert not out.contractible and out.residual.n_vertices == 0
    assert out.suspensions == 3 and out.n_folds > 0
    assert reduce(path(7)).contractible


def test_isolated_vertex_is_a_cone():
    out = reduce(disjoint_union(cycle(6), path(1, "q")))
    assert out.contractible
    assert out.trace[-1].kind == "isolated_cone"


def test_p2_components_count_as_suspensions():
    out = reduce(disjoint_union(path(2, "a"), path(2, "b"), cycle(7, "c")))
    assert out.suspensions >= 2
    assert [s.kind for s in out.trace[:2]] == ["strip_p2", "strip_p2"]


def test_star_folds_to_p2():
    out = reduce(star(5))
    assert out.suspensions == 1 and out.residual.n_vertices == 0 and not out.contractible


def test_fold_pairs_are_sorted_and_valid():
    g = named_family("Z3", 3)
    pairs = find_fold_pairs(g)
    assert pairs == sorted(pairs, key=lambda p: (p[1], p[0]))
    for keep, removed in pairs:
        assert keep != removed and g.neighbors(keep) <= g.neighbors(removed)


def test_hexagonal_grid_has_no_folds():
    assert find_fold_pairs(hex_grid(2, 2)) == []


def test_reduce_is_deterministic():
    g = named_family("H3", 2)
    a, b = reduce(g), reduce(g)
    assert a.to_json() == b.to_json()


def test_scripted_fold_precondition():
    g = hex_grid(1, 2)
    with pytest.raises(FoldPreconditionViolated) as info:
        apply_scripted_folds(g, [(v(1, 1), v(1, 3))])
    assert info.value.step == 0
    with pytest.raises(FoldPreconditionViolated):
        apply_scripted_folds(g, [(v(1, 1), v(1, 1))])
    with pytest.raises(FoldPreconditionViolated, match="not present"):
        apply_scripted_folds(g, [(v(9, 9), v(1, 1))])


def test_scripted_fold_replays_x1():
    g = named_family("X1", 3)
    script = parse_fold_script("fold 1:2n 1:2n-2\n# comment\nfold 1:2n 2:2n-1\n", 3)
    assert script == [(v(1, 6), v(1, 4)), (v(1, 6), v(2, 5))]
    out = apply_scripted_folds(g, script)
    assert out.suspensions == 2
    assert format_fold_script(script) == "fold 1:6 1:4\nfold 1:6 2:5\n"


@pytest.mark.parametrize("expr,n,val", [("2n-3", 4, 5), ("n+1", 2, 3), ("7", 9, 7), ("n", 5, 5), ("3*n", 2, 6)])
def test_eval_index(expr, n, val):
    assert eval_index(expr, n) == val


@pytest.mark.parametrize("bad", ["", "n n", "2x", "1:2"])
def test_eval_index_rejects(bad):
    with pytest.raises(ValueError):
        eval_index(bad, 3)


def test_resolve_and_parse_errors():
    assert resolve_label("2:2n+1", 3) == v(2, 7)
    with pytest.raises(ValueError):
        parse_fold_script("fold 1:1\n", 2)


@settings(max_examples=150, deadline=None)
@given(graph_strategy)
def test_reduction_preserves_homology(g):
    raw = graph_homology(g, "exact", reduce_first=False)
    out = reduce(g)
    if out.contractible:
        assert raw.is_trivial()
    else:
        assert raw.same_groups(graph_homology(out.residual, "exact", reduce_first=False).shift(out.suspensions))
    for keep, removed in find_fold_pairs(g)[:3]:
        assert raw.same_groups(graph_homology(delete_vertices(g, [removed]), "exact", reduce_first=False))

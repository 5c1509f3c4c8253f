from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltaorient.errors import DuplicateEdge, MissingEdge, SelfLoop, StalePath
from deltaorient.graph_core import DirectedPath, MaxDegreeTracker, MinIdTracker, OrientedGraph


def brute_delta(g: OrientedGraph) -> int:
    return max((len(a) for a in g.out_adj), default=0)


def test_insert_single_edge():
    g = OrientedGraph(3)
    g.insert_oriented(0, 1)
    assert g.out_adj[0] == [1]
    assert g.current_delta() == 1


def test_insert_second_edge_raises_delta():
    g = OrientedGraph(3)
    g.insert_oriented(0, 1)
    g.insert_oriented(0, 2)
    assert g.out_deg(0) == 2
    assert g.current_delta() == 2


def test_insert_errors():
    g = OrientedGraph(3)
    with pytest.raises(SelfLoop):
        g.insert_oriented(0, 0)
    g.insert_oriented(0, 1)
    with pytest.raises(DuplicateEdge):
        g.insert_oriented(1, 0)
    with pytest.raises(DuplicateEdge):
        g.insert_oriented(0, 1)


def test_delete_either_direction():
    g = OrientedGraph(2)
    g.insert_oriented(0, 1)
    g.delete_edge(1, 0)
    assert g.m == 0 and g.current_delta() == 0
    g.check_invariants()


def test_delete_keeps_other_arcs():
    g = OrientedGraph(3)
    g.insert_oriented(0, 1)
    g.insert_oriented(0, 2)
    g.delete_edge(0, 2)
    assert list(g.arcs()) == [(0, 1)]
    assert g.current_delta() == 1


def test_delete_missing():
    with pytest.raises(MissingEdge):
        OrientedGraph(2).delete_edge(0, 1)


def test_adjacent_is_direction_agnostic():
    g = OrientedGraph(3)
    g.insert_oriented(0, 1)
    assert g.adjacent(1, 0) and g.adjacent(0, 1)
    assert not g.adjacent(0, 2)


def test_adjacent_directed_triangle():
    g = OrientedGraph(3)
    for u, v in [(0, 1), (1, 2), (2, 0)]:
        g.insert_oriented(u, v)
    # {1, 2} is stored as 1 -> 2 only
    assert g.out_adj[2] == [0]
    assert g.adjacent(2, 1)
    assert g.current_delta() == 1


def test_flip_single_arc():
    g = OrientedGraph(2)
    g.insert_oriented(0, 1)
    g.flip_path(DirectedPath([0, 1], [0]))
    assert list(g.arcs()) == [(1, 0)]
    assert (g.out_deg(0), g.out_deg(1)) == (0, 1)


def test_flip_two_hop_path():
    g = OrientedGraph(4)
    for u, v in [(0, 1), (1, 2), (0, 3)]:
        g.insert_oriented(u, v)
    g.flip_path(DirectedPath([0, 1, 2], [0, 0]))
    assert sorted(g.arcs()) == [(0, 3), (1, 0), (2, 1)]
    assert g.out_deg(0) == 1 and g.out_deg(2) == 1 and g.out_deg(1) == 1
    assert g.flips == 2
    g.check_invariants()


def test_flip_then_reverse_restores():
    g = OrientedGraph(4)
    for u, v in [(0, 1), (1, 2), (2, 3), (0, 2)]:
        g.insert_oriented(u, v)
    before = sorted(g.arcs())
    g.flip_path(DirectedPath([0, 1, 2, 3], [0, 0, 0]))
    back = DirectedPath([3, 2, 1, 0], [g.out_adj[3].index(2), g.out_adj[2].index(1), g.out_adj[1].index(0)])
    g.flip_path(back)
    assert sorted(g.arcs()) == before
    g.check_invariants()


def test_stale_path_leaves_graph_untouched():
    g = OrientedGraph(3)
    g.insert_oriented(0, 1)
    g.insert_oriented(1, 2)
    with pytest.raises(StalePath):
        g.flip_path(DirectedPath([0, 1, 2], [0, 1]))
    assert sorted(g.arcs()) == [(0, 1), (1, 2)]


def test_empty_graph_delta():
    assert OrientedGraph(5).current_delta() == 0


def test_tracker_top_vertex_prefers_smallest_id():
    t = MaxDegreeTracker(5)
    assert t.top_vertex() is None
    for v in (4, 2, 3):
        t.increment(v)
    assert t.top_vertex() == 2
    t.increment(3)
    assert t.top_vertex() == 3
    t.reset(3)
    assert t.max_degree == 1 and t.top_vertex() == 2


# ---- randomized streams against a shadow edge set ----------------------

ops_strategy = st.lists(
    st.tuples(st.sampled_from("idfq"), st.integers(0, 7), st.integers(0, 7)), max_size=120
)


@settings(max_examples=200, deadline=None)
@given(ops_strategy)
def test_random_operations_match_shadow(ops):
    g = OrientedGraph(8)
    shadow: set[frozenset[int]] = set()
    for kind, u, v in ops:
        key = frozenset((u, v))
        if kind == "i" and u != v and key not in shadow:
            g.insert_oriented(u, v)
            shadow.add(key)
        elif kind == "d" and key in shadow:
            g.delete_edge(u, v)
            shadow.remove(key)
        elif kind == "f" and g.out_adj[u]:
            # flip a one-hop path, or a two-hop path when it is simple
            w = g.out_adj[u][0]
            path = DirectedPath([u, w], [0])
            nxt = [i for i, x in enumerate(g.out_adj[w]) if x != u]
            if nxt:
                path = DirectedPath([u, w, g.out_adj[w][nxt[0]]], [0, nxt[0]])
            degs = [g.out_deg(x) for x in range(8)]
            g.flip_path(path)
            after = [g.out_deg(x) for x in range(8)]
            changed = {x for x in range(8) if degs[x] != after[x]}
            assert changed == {path.vertices[0], path.vertices[-1]}
            assert after[path.vertices[0]] == degs[path.vertices[0]] - 1
        elif kind == "q":
            assert g.adjacent(u, v) == g.adjacent(v, u) == (key in shadow and u != v)
        assert g.current_delta() == brute_delta(g)
        assert sum(g.out_deg(x) for x in range(8)) == g.m == len(shadow)
    g.check_invariants()
    assert {frozenset(a) for a in g.arcs()} == shadow


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("+-r"), st.integers(0, 5)), max_size=300))
def test_min_id_tracker_agrees_with_bucket_scan(moves):
    plain, fast = MaxDegreeTracker(6), MinIdTracker(6)
    for kind, v in moves:
        if kind == "+":
            plain.increment(v)
            fast.increment(v)
        elif kind == "-" and plain.degree[v] > 0:
            plain.decrement(v)
            fast.decrement(v)
        elif kind == "r":
            plain.reset(v)
            fast.reset(v)
        assert fast.degree == plain.degree and fast.max_degree == plain.max_degree
        assert fast.top_vertex() == plain.top_vertex()

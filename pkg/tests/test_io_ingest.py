from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltaorient.errors import NegativeVertex, ParseError, TooDense
from deltaorient.exact import StaticGraph
from deltaorient.io_ingest import (
    EditOp,
    EditSequence,
    OpKind,
    final_graph,
    format_edits,
    gen_forest_union,
    gen_powerlaw_graph,
    gen_random_graph,
    gen_random_tree,
    normalize,
    parse_edits,
    parse_edits_text,
    parse_metis,
    random_update_stream,
    static_to_stream,
    write_metis,
)

INS, DEL = OpKind.INSERT, OpKind.DELETE


def _write(tmp_path, text, name="g.metis"):
    p = tmp_path / name
    p.write_text(text)
    return p


# ---- METIS -------------------------------------------------------------


def test_metis_triangle(tmp_path):
    g = parse_metis(_write(tmp_path, "3 3\n2 3\n1 3\n1 2\n"))
    assert (g.n, g.m) == (3, 3)
    assert g.edges == ((0, 1), (0, 2), (1, 2))


def test_metis_dedups_and_drops_loops(tmp_path):
    g = parse_metis(_write(tmp_path, "% comment\n3 2\n2 2 1\n1 1\n\n"))
    assert g.edges == ((0, 1),)


def test_metis_isolated_vertex_lines(tmp_path):
    g = parse_metis(_write(tmp_path, "4 1\n\n3\n2\n\n"))
    assert (g.n, g.edges) == (4, ((1, 2),))


def test_metis_weights_ignored(tmp_path):
    # fmt 011: one vertex weight, then (neighbor, edge weight) pairs
    g = parse_metis(_write(tmp_path, "3 2 011\n5 2 7\n6 1 7 3 9\n4 2 9\n"))
    assert g.edges == ((0, 1), (1, 2))


@pytest.mark.parametrize(
    "text",
    ["", "% only comment\n", "x 3\n", "3 3\n2 3\n1 3\n", "2 1\n2\n1\n7\n", "2 1\n3\n1\n", "2 1 001\n2\n1 5\n"],
)
def test_metis_parse_errors(tmp_path, text):
    with pytest.raises(ParseError):
        parse_metis(_write(tmp_path, text))


def test_metis_error_carries_line(tmp_path):
    with pytest.raises(ParseError) as err:
        parse_metis(_write(tmp_path, "2 1\n2\nfoo\n"))
    assert err.value.line == 3


def test_metis_roundtrip(tmp_path):
    g = gen_random_graph(30, 60, 3)
    write_metis(g, tmp_path / "x.metis")
    assert parse_metis(tmp_path / "x.metis") == g


# ---- edits -------------------------------------------------------------


def test_edits_basic(tmp_path):
    seq = parse_edits(_write(tmp_path, "+ 0 1\n+ 1 2\n- 0 1\n", "s.edits"))
    assert seq.n == 3
    assert seq.ops == [EditOp(INS, 0, 1), EditOp(INS, 1, 2), EditOp(DEL, 0, 1)]


def test_edits_comments_and_blank_lines():
    seq = parse_edits_text("# comment\n\n+ 5 7\n")
    assert len(seq.ops) == 1 and seq.n == 8


def test_edits_header_and_compact_sign():
    seq = parse_edits_text("n 10\n+0 1\n-0 1  # trailing\n")
    assert seq.n == 10 and [op.kind for op in seq.ops] == [INS, DEL]


@pytest.mark.parametrize("text", ["+ 3", "* 1 2", "+ 1 2 3", "+ a b", "n 2\n+ 0 2", "+ 0 1\nn 4"])
def test_edits_parse_errors(text):
    with pytest.raises(ParseError):
        parse_edits_text(text)


def test_edits_negative_vertex():
    with pytest.raises(NegativeVertex):
        parse_edits_text("+ -1 2")


def test_normalize_examples():
    seq = EditSequence(2, [EditOp(INS, 0, 1), EditOp(INS, 0, 1)])
    clean, rep = normalize(seq)
    assert clean.ops == [EditOp(INS, 0, 1)] and rep.duplicate_inserts == 1
    clean, rep = normalize(EditSequence(1, [EditOp(INS, 0, 0)]))
    assert clean.ops == [] and rep.self_loops == 1
    clean, rep = normalize(EditSequence(2, [EditOp(DEL, 0, 1)]))
    assert clean.ops == [] and rep.obsolete_deletes == 1
    clean, rep = normalize(EditSequence(2, [EditOp(INS, 0, 1), EditOp(INS, 1, 0), EditOp(DEL, 1, 0)]))
    assert clean.ops == [EditOp(INS, 0, 1), EditOp(DEL, 1, 0)]
    assert rep.lines() == ["kept: 2", "self_loops: 0", "duplicate_inserts: 1", "obsolete_deletes: 0"]


raw_ops = st.lists(
    st.builds(EditOp, st.sampled_from([INS, DEL]), st.integers(0, 5), st.integers(0, 5)), max_size=60
)


@settings(max_examples=200, deadline=None)
@given(raw_ops)
def test_normalize_idempotent_and_preserves_final_graph(ops):
    seq = EditSequence(6, ops)
    once, _ = normalize(seq)
    twice, rep2 = normalize(once)
    assert twice.ops == once.ops and rep2.dropped == 0
    assert final_graph(once) == final_graph(seq)


@settings(max_examples=100, deadline=None)
@given(raw_ops)
def test_edits_roundtrip_bytes(ops):
    text = format_edits(EditSequence(6, ops))
    again = format_edits(parse_edits_text(text))
    assert again == text


# ---- streams and generators --------------------------------------------


def test_static_to_stream_is_seeded_permutation():
    tri = StaticGraph(3, ((0, 1), (1, 2), (0, 2)))
    a, b = static_to_stream(tri, 5), static_to_stream(tri, 5)
    assert a.ops == b.ops
    assert set(final_graph(a).edges) == set(tri.edges)
    assert all(op.is_insert for op in a.ops)


def test_static_to_stream_seed_vector():
    # order must equal a plain MT19937 shuffle of the edge list
    g = StaticGraph(5, ((0, 1), (0, 2), (1, 2), (2, 3), (3, 4)))
    expected = list(g.edges)
    random.Random(42).shuffle(expected)
    ops = static_to_stream(g, 42).ops
    assert [(op.u, op.v) for op in ops] == expected


def test_static_to_stream_seeds_differ():
    g = gen_random_graph(40, 100, 1)
    a, b = static_to_stream(g, 1), static_to_stream(g, 2)
    assert any(x != y for x, y in zip(a.ops, b.ops))


def test_gen_random_graph():
    assert gen_random_graph(4, 6, 0).edges == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
    assert gen_random_graph(10, 0, 0).m == 0
    assert gen_random_graph(6, 8, 9) == gen_random_graph(6, 8, 9)
    with pytest.raises(TooDense):
        gen_random_graph(4, 7, 0)


def test_gen_random_graph_pair_decoding_covers_all_pairs():
    n = 9
    g = gen_random_graph(n, n * (n - 1) // 2, 0)
    assert len(set(g.edges)) == 36 and all(u < v < n for u, v in g.edges)


def test_tree_and_forest_generators():
    t = gen_random_tree(30, 4)
    assert t.m == 29
    f = gen_forest_union(30, 2, 4)
    assert 29 <= f.m <= 58
    p = gen_powerlaw_graph(200, 3, 1)
    assert max(p.degrees()) > 3 * 6


def test_random_update_stream_is_normalized():
    seq = random_update_stream(12, 500, 3, target_m=20)
    assert len(seq.ops) == 500
    clean, rep = normalize(seq)
    assert rep.dropped == 0
    again = random_update_stream(12, 500, 3, target_m=20)
    assert again.ops == seq.ops
    assert any(not op.is_insert for op in seq.ops)
    assert len(final_graph(seq).edges) <= 20

"""Reading, normalizing and generating graph instances.

Edits format (0-based vertex ids)::

    # comment
    n 8          (optional header, must precede the first update)
    + 0 1        insert {0, 1}
    - 0 1        delete {0, 1}

METIS files are 1-based adjacency lists and are shifted to 0-based ids on
read. Edge directions, self-loops and repeated edges are discarded.

Randomness comes from :class:`random.Random` (MT19937) seeded with an
integer. Its seeding, ``shuffle`` and ``sample`` outputs are stable across
platforms and Python releases, which keeps streams reproducible.
"""

from __future__ import annotations

import enum
import random
import re
from dataclasses import dataclass, field
from math import isqrt
from pathlib import Path

from .errors import NegativeVertex, ParseError, TooDense
from .exact import StaticGraph


class OpKind(enum.Enum):
    INSERT = "+"
    DELETE = "-"


@dataclass(frozen=True)
class EditOp:
    kind: OpKind
    u: int
    v: int

    @property
    def is_insert(self) -> bool:
        return self.kind is OpKind.INSERT


@dataclass
class EditSequence:
    n: int
    ops: list[EditOp]
    provenance: str = ""


@dataclass
class NormalizationReport:
    kept: int = 0
    self_loops: int = 0
    duplicate_inserts: int = 0
    obsolete_deletes: int = 0

    @property
    def dropped(self) -> int:
        return self.self_loops + self.duplicate_inserts + self.obsolete_deletes

    def lines(self) -> list[str]:
        return [
            f"kept: {self.kept}",
            f"self_loops: {self.self_loops}",
            f"duplicate_inserts: {self.duplicate_inserts}",
            f"obsolete_deletes: {self.obsolete_deletes}",
        ]


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


# ---- METIS -------------------------------------------------------------


def parse_metis(path: str | Path) -> StaticGraph:
    """Read an (optionally weighted) METIS graph as a simple undirected graph."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    rows = [(i + 1, ln) for i, ln in enumerate(lines) if not ln.lstrip().startswith("%")]
    if not rows or not rows[0][1].strip():
        raise ParseError("missing METIS header", rows[0][0] if rows else 1)
    hdr_line, hdr = rows[0]
    parts = hdr.split()
    if len(parts) < 2 or len(parts) > 4:
        raise ParseError("header must be 'n m [fmt [ncon]]'", hdr_line)
    try:
        n = int(parts[0])
        int(parts[1])
        fmt = parts[2] if len(parts) > 2 else "0"
        ncon = int(parts[3]) if len(parts) > 3 else 1
    except ValueError:
        raise ParseError("non-integer header field", hdr_line) from None
    if n < 0 or not re.fullmatch(r"[01]{1,3}", fmt):
        raise ParseError("bad vertex count or fmt field", hdr_line)
    fmt = fmt.zfill(3)
    has_size, has_vwgt, has_ewgt = fmt[0] == "1", fmt[1] == "1", fmt[2] == "1"
    skip = int(has_size) + (ncon if has_vwgt else 0)
    step = 2 if has_ewgt else 1

    body = rows[1:]
    # trailing blank lines beyond n are harmless
    while len(body) > n and not body[-1][1].strip():
        body.pop()
    if len(body) != n:
        where = body[n][0] if len(body) > n else (rows[-1][0] + 1)
        raise ParseError(f"expected {n} vertex lines, found {len(body)}", where)

    edges: set[tuple[int, int]] = set()
    for u, (lineno, text) in enumerate(body):
        try:
            nums = [int(t) for t in text.split()]
        except ValueError:
            raise ParseError("non-integer token", lineno) from None
        if len(nums) < skip or (len(nums) - skip) % step:
            raise ParseError("malformed vertex line", lineno)
        for x in nums[skip::step]:
            if not 1 <= x <= n:
                raise ParseError(f"neighbor {x} outside 1..{n}", lineno)
            v = x - 1
            if v != u:
                edges.add(_key(u, v))
    return StaticGraph(n, tuple(sorted(edges)))


def write_metis(g: StaticGraph, path: str | Path) -> None:
    nbrs: list[list[int]] = [[] for _ in range(g.n)]
    for u, v in g.edges:
        nbrs[u].append(v + 1)
        nbrs[v].append(u + 1)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for row in nbrs:
            fh.write(" ".join(map(str, sorted(row))) + "\n")


# ---- edit sequences ----------------------------------------------------

_OP_RE = re.compile(r"^([+-])\s*(\S+)(?:\s+(\S+))?(?:\s+(.*))?$")


def _vertex(token: str, lineno: int) -> int:
    try:
        x = int(token)
    except ValueError:
        raise ParseError(f"bad vertex id {token!r}", lineno) from None
    if x < 0:
        raise NegativeVertex(f"negative vertex id {x}", lineno)
    return x


def parse_edits_text(text: str, provenance: str = "") -> EditSequence:
    ops: list[EditOp] = []
    declared: int | None = None
    top = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line[0] == "n" and (len(line) == 1 or line[1].isspace()):
            if ops or declared is not None:
                raise ParseError("header 'n' must come first and only once", lineno)
            toks = line.split()
            if len(toks) != 2:
                raise ParseError("header must be 'n <N>'", lineno)
            declared = _vertex(toks[1], lineno)
            continue
        mt = _OP_RE.match(line)
        if not mt or mt.group(3) is None or mt.group(4):
            raise ParseError("expected '+ u v' or '- u v'", lineno)
        u, v = _vertex(mt.group(2), lineno), _vertex(mt.group(3), lineno)
        if declared is not None and max(u, v) >= declared:
            raise ParseError(f"vertex {max(u, v)} outside 0..{declared - 1}", lineno)
        top = max(top, u, v)
        ops.append(EditOp(OpKind(mt.group(1)), u, v))
    n = declared if declared is not None else top + 1
    return EditSequence(n, ops, provenance)


def parse_edits(path: str | Path) -> EditSequence:
    text = Path(path).read_text(encoding="utf-8")
    return parse_edits_text(text, provenance=str(path))


def format_edits(seq: EditSequence) -> str:
    out = [f"n {seq.n}"]
    out.extend(f"{op.kind.value} {op.u} {op.v}" for op in seq.ops)
    return "\n".join(out) + "\n"


def write_edits(seq: EditSequence, path: str | Path) -> None:
    Path(path).write_text(format_edits(seq), encoding="utf-8")


def normalize(seq: EditSequence) -> tuple[EditSequence, NormalizationReport]:
    """Drop self-loops, inserts of present edges and deletes of absent ones."""
    present: set[tuple[int, int]] = set()
    report = NormalizationReport()
    kept: list[EditOp] = []
    for op in seq.ops:
        if op.u == op.v:
            report.self_loops += 1
            continue
        key = _key(op.u, op.v)
        if op.kind is OpKind.INSERT:
            if key in present:
                report.duplicate_inserts += 1
                continue
            present.add(key)
        else:
            if key not in present:
                report.obsolete_deletes += 1
                continue
            present.remove(key)
        kept.append(op)
    report.kept = len(kept)
    return EditSequence(seq.n, kept, seq.provenance), report


def final_graph(seq: EditSequence) -> StaticGraph:
    """Edge set after replaying ``seq``, skipping obsolete updates."""
    present: set[tuple[int, int]] = set()
    for op in seq.ops:
        if op.u == op.v:
            continue
        key = _key(op.u, op.v)
        if op.kind is OpKind.INSERT:
            present.add(key)
        else:
            present.discard(key)
    return StaticGraph(seq.n, tuple(sorted(present)))


def static_to_stream(g: StaticGraph, seed: int) -> EditSequence:
    """All edges of ``g`` as inserts, in a seeded uniformly random order."""
    edges = list(g.edges)
    random.Random(seed).shuffle(edges)
    ops = [EditOp(OpKind.INSERT, u, v) for u, v in edges]
    return EditSequence(g.n, ops, provenance=f"static_to_stream(seed={seed})")


# ---- generators --------------------------------------------------------


def _pair(index: int) -> tuple[int, int]:
    # index enumerates pairs (i, j), i < j, ordered by j then i
    j = (1 + isqrt(1 + 8 * index)) // 2
    i = index - j * (j - 1) // 2
    return i, j


def gen_random_graph(n: int, m: int, seed: int) -> StaticGraph:
    """Uniform simple graph with exactly ``m`` edges."""
    total = n * (n - 1) // 2
    if m > total or m < 0:
        raise TooDense(f"{m} edges do not fit into a simple graph on {n} vertices")
    picks = random.Random(seed).sample(range(total), m)
    return StaticGraph(n, tuple(sorted(_pair(k) for k in picks)))


def gen_random_tree(n: int, seed: int) -> StaticGraph:
    """Random recursive tree: vertex ``i`` attaches to a uniform earlier vertex."""
    rng = random.Random(seed)
    return StaticGraph(n, tuple(sorted((rng.randrange(i), i) for i in range(1, n))))


def gen_forest_union(n: int, forests: int, seed: int) -> StaticGraph:
    """Union of ``forests`` random spanning trees; arboricity <= ``forests``."""
    rng = random.Random(seed)
    edges: set[tuple[int, int]] = set()
    for _ in range(forests):
        perm = list(range(n))
        rng.shuffle(perm)
        for i in range(1, n):
            edges.add(_key(perm[rng.randrange(i)], perm[i]))
    return StaticGraph(n, tuple(sorted(edges)))


def gen_powerlaw_graph(n: int, attach: int, seed: int) -> StaticGraph:
    """Preferential-attachment graph: each new vertex links to ``attach`` earlier ones.

    Targets are drawn proportionally to current degree, giving the heavy-tailed
    degree distribution of web and social graphs.
    """
    rng = random.Random(seed)
    edges: set[tuple[int, int]] = set()
    ends: list[int] = []
    for v in range(n):
        targets: set[int] = set()
        want = min(attach, v)
        while len(targets) < want:
            if ends and rng.random() < 0.9:
                t = ends[rng.randrange(len(ends))]
            else:
                t = rng.randrange(v)
            targets.add(t)
        for t in sorted(targets):
            edges.add(_key(t, v))
            ends += (t, v)
    return StaticGraph(n, tuple(sorted(edges)))


def random_update_stream(
    n: int, updates: int, seed: int, *, target_m: int | None = None, insert_bias: float = 0.6
) -> EditSequence:
    """Normalized mixed insert/delete stream over ``n`` vertices.

    Inserts a fresh random pair with probability ``insert_bias`` while the
    edge count is below ``target_m``; otherwise deletes a uniformly chosen
    present edge.
    """
    rng = random.Random(seed)
    if target_m is None:
        target_m = 2 * n
    present: list[tuple[int, int]] = []
    where: dict[tuple[int, int], int] = {}
    ops: list[EditOp] = []
    cap = n * (n - 1) // 2
    while len(ops) < updates:
        grow = not present or (len(present) < min(target_m, cap) and rng.random() < insert_bias)
        if grow:
            if len(present) >= cap:
                continue
            u, v = rng.randrange(n), rng.randrange(n)
            key = _key(u, v)
            if u == v or key in where:
                continue
            where[key] = len(present)
            present.append(key)
            ops.append(EditOp(OpKind.INSERT, u, v))
        else:
            i = rng.randrange(len(present))
            key = present[i]
            last = present.pop()
            if i < len(present):
                present[i] = last
                where[last] = i
            del where[key]
            u, v = key
            if rng.random() < 0.5:
                u, v = v, u
            ops.append(EditOp(OpKind.DELETE, u, v))
    return EditSequence(n, ops, provenance=f"random_update_stream(n={n}, seed={seed})")

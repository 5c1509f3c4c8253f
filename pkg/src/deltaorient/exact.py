"""Exact minimum max-out-degree orientation of a static graph.

``exact_optimum`` binary-searches the smallest ``c`` for which a
``c``-orientation exists. Feasibility is a max-flow problem::

    source --1--> edge node --1--> endpoint node --c--> sink

and a ``c``-orientation exists iff the flow saturates every edge node; the
endpoint receiving an edge's unit of flow becomes its tail.

``brute_force_optimum`` enumerates all ``2**m`` orientations and shares no
code with the flow route, so the two can check each other.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import DuplicateEdge, SelfLoop, TooLarge

BRUTE_FORCE_MAX_EDGES = 25


@dataclass(frozen=True)
class StaticGraph:
    """Simple undirected graph on vertices ``0..n-1``.

    Edges are stored as ``(u, v)`` with ``u < v``, in the order given.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self) -> None:
        canon = []
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise SelfLoop(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) outside 0..{self.n - 1}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise DuplicateEdge(f"edge {key} listed twice")
            seen.add(key)
            canon.append(key)
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


@dataclass(frozen=True)
class ExactResult:
    phi: int
    witness: tuple[tuple[int, int], ...]


def max_out_degree(n: int, arcs) -> int:
    deg = [0] * n
    for u, _ in arcs:
        deg[u] += 1
    return max(deg, default=0)


def is_orientation_of(g: StaticGraph, arcs) -> bool:
    keys = [(u, v) if u < v else (v, u) for u, v in arcs]
    return len(keys) == g.m and set(keys) == set(g.edges)


def brute_force_optimum(g: StaticGraph) -> ExactResult:
    """Try every orientation, walking them in Gray-code order."""
    m = g.m
    if m > BRUTE_FORCE_MAX_EDGES:
        raise TooLarge(f"{m} edges exceed the enumeration bound of {BRUTE_FORCE_MAX_EDGES}")
    if m == 0:
        return ExactResult(0, ())
    edges = g.edges
    deg = [0] * g.n
    for u, _ in edges:
        deg[u] += 1
    # bit i set means edge i is oriented v -> u
    state = 0
    best = max(deg)
    best_state = 0
    for step in range(1, 1 << m):
        i = (step & -step).bit_length() - 1
        u, v = edges[i]
        if state >> i & 1:
            deg[v] -= 1
            deg[u] += 1
        else:
            deg[u] -= 1
            deg[v] += 1
        state ^= 1 << i
        cur = max(deg)
        if cur < best:
            best = cur
            best_state = state
    witness = tuple((v, u) if best_state >> i & 1 else (u, v) for i, (u, v) in enumerate(edges))
    return ExactResult(best, witness)


class FlowNetwork:
    """Integral max flow by Dinic's algorithm on an arc-list residual graph."""

    def __init__(self, size: int) -> None:
        self.size = size
        self.head: list[int] = []
        self.cap: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(size)]

    def add_arc(self, a: int, b: int, capacity: int) -> int:
        """Add ``a -> b``; returns the arc index (its reverse is ``index ^ 1``)."""
        idx = len(self.head)
        self.head += (b, a)
        self.cap += (capacity, 0)
        self.adj[a].append(idx)
        self.adj[b].append(idx + 1)
        return idx

    def _levels(self, s: int, t: int) -> list[int] | None:
        level = [-1] * self.size
        level[s] = 0
        queue = deque([s])
        head, cap, adj = self.head, self.cap, self.adj
        while queue:
            x = queue.popleft()
            for a in adj[x]:
                y = head[a]
                if cap[a] > 0 and level[y] < 0:
                    level[y] = level[x] + 1
                    queue.append(y)
        return level if level[t] >= 0 else None

    def max_flow(self, s: int, t: int) -> int:
        head, cap, adj = self.head, self.cap, self.adj
        total = 0
        while (level := self._levels(s, t)) is not None:
            it = [0] * self.size
            # iterative DFS for blocking flow; paths can be long in residual graphs
            while True:
                stack = [s]
                arcs: list[int] = []
                while stack:
                    x = stack[-1]
                    if x == t:
                        break
                    advanced = False
                    lst = adj[x]
                    while it[x] < len(lst):
                        a = lst[it[x]]
                        y = head[a]
                        if cap[a] > 0 and level[y] == level[x] + 1:
                            stack.append(y)
                            arcs.append(a)
                            advanced = True
                            break
                        it[x] += 1
                    if not advanced:
                        stack.pop()
                        level[x] = -1
                        if arcs:
                            arcs.pop()
                            it[stack[-1]] += 1
                if not stack:
                    break
                push = min(cap[a] for a in arcs)
                for a in arcs:
                    cap[a] -= push
                    cap[a ^ 1] += push
                total += push
        return total


def feasible_delta(g: StaticGraph, c: int) -> tuple[bool, tuple[tuple[int, int], ...] | None]:
    """Whether a ``c``-orientation exists, with one as witness when it does."""
    m, n = g.m, g.n
    if m == 0:
        return True, ()
    if c <= 0:
        return False, None
    source, sink = 0, 1 + m + n
    net = FlowNetwork(m + n + 2)
    choice = []
    for i, (u, v) in enumerate(g.edges):
        e = 1 + i
        net.add_arc(source, e, 1)
        choice.append((net.add_arc(e, 1 + m + u, 1), net.add_arc(e, 1 + m + v, 1)))
    for x in range(n):
        net.add_arc(1 + m + x, sink, c)
    if net.max_flow(source, sink) < m:
        return False, None
    witness = []
    for (u, v), (au, _) in zip(g.edges, choice):
        # residual capacity 0 on e -> u means u took the edge as its out-arc
        witness.append((u, v) if net.cap[au] == 0 else (v, u))
    return True, tuple(witness)


def exact_optimum(g: StaticGraph) -> ExactResult:
    """Smallest achievable maximum out-degree, by binary search on ``c``."""
    m, n = g.m, g.n
    if m == 0:
        return ExactResult(0, ())
    lo = -(-m // n)
    hi = max(g.degrees())
    ok, witness = feasible_delta(g, hi)
    assert ok and witness is not None
    while lo < hi:
        mid = (lo + hi) // 2
        ok, w = feasible_delta(g, mid)
        if ok:
            hi, witness = mid, w
        else:
            lo = mid + 1
    return ExactResult(hi, witness)

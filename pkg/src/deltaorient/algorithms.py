"""Dynamic low out-degree orientation strategies.

All strategies share one update interface::

    alg.insert(u, v)
    alg.delete(u, v)
    alg.adjacent(u, v)
    alg.current_delta()

Inserts and deletes must be normalized (no duplicate inserts, no deletes of
absent edges); see :func:`deltaorient.io_ingest.normalize`.

Ties are broken toward the smallest vertex id wherever a strategy has to pick
one vertex among several equally good ones.
"""

from __future__ import annotations

import math
import random
from collections import OrderedDict
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterator

from .errors import BudgetExceeded, DuplicateEdge, MissingEdge, SelfLoop
from .graph_core import DirectedPath, MinIdTracker, OrientedGraph

KINDS = ("naive", "bfs", "rpath", "descdeg", "kflips", "bf", "bf-adaptive")


class Orienter:
    """Common base: an :class:`OrientedGraph` plus the shared deletion rule."""

    label = "orienter"

    def __init__(self, n: int, *, check: bool = True) -> None:
        self.n = n
        self.graph = OrientedGraph(n, check=check)

    def insert(self, u: int, v: int) -> None:
        raise NotImplementedError

    def delete(self, u: int, v: int) -> None:
        self.graph.delete_edge(u, v)

    def adjacent(self, u: int, v: int) -> bool:
        return self.graph.adjacent(u, v)

    def current_delta(self) -> int:
        return self.graph.tracker.max_degree

    def out_degree(self, v: int) -> int:
        return len(self.graph.out_adj[v])

    @property
    def flips(self) -> int:
        return self.graph.flips

    @property
    def m(self) -> int:
        return self.graph.m

    def arcs(self) -> Iterator[tuple[int, int]]:
        return self.graph.arcs()

    def check_invariants(self) -> None:
        self.graph.check_invariants()

    def _pruned(self, u: int) -> bool:
        # Delta is already updated for the new arc at this point.
        delta = self.graph.tracker.max_degree
        return len(self.graph.out_adj[u]) < delta or delta == 1


class Naive(Orienter):
    """Orient each new edge away from the endpoint of smaller out-degree."""

    label = "naive"

    def insert(self, u: int, v: int) -> None:
        out = self.graph.out_adj
        if len(out[v]) < len(out[u]):
            self.graph.insert_oriented(v, u)
        else:
            self.graph.insert_oriented(u, v)


class _Marks:
    """Epoch-stamped visited flags: bumping the epoch clears all marks in O(1)."""

    __slots__ = ("stamp", "epoch")

    def __init__(self, n: int) -> None:
        self.stamp = [0] * n
        self.epoch = 0

    def clear(self) -> int:
        self.epoch += 1
        return self.epoch


class BFS(Orienter):
    """Breadth-first search for an improving path, limited to ``depth`` hops.

    After storing ``u -> v``, if ``u`` is a maximum out-degree vertex (and
    the maximum exceeds one), search the oriented graph from ``u`` for the
    first vertex ``y`` with ``out_deg(y) < out_deg(u) - 1`` and flip the
    ``u``-``y`` path.
    """

    def __init__(self, n: int, depth: int, *, check: bool = True) -> None:
        super().__init__(n, check=check)
        if depth < 1:
            raise ValueError("depth must be >= 1")
        self.depth = depth
        self.label = f"bfs{depth}"
        self._marks = _Marks(n)
        self._parent = [0] * n
        self._pslot = [0] * n

    def insert(self, u: int, v: int) -> None:
        self.graph.insert_oriented(u, v)
        if self._pruned(u):
            return
        path = self.search(u)
        if path is not None:
            self.graph.flip_path(path)

    def search(self, u: int) -> DirectedPath | None:
        out = self.graph.out_adj
        limit = len(out[u]) - 1
        stamp = self._marks.stamp
        ep = self._marks.clear()
        parent, pslot = self._parent, self._pslot
        stamp[u] = ep
        frontier = [u]
        for _ in range(self.depth):
            nxt = []
            for x in frontier:
                for i, y in enumerate(out[x]):
                    if stamp[y] == ep:
                        continue
                    stamp[y] = ep
                    parent[y] = x
                    pslot[y] = i
                    if len(out[y]) < limit:
                        return self._trace(u, y)
                    nxt.append(y)
            if not nxt:
                break
            frontier = nxt
        return None

    def _trace(self, u: int, y: int) -> DirectedPath:
        vs = [y]
        slots = []
        while y != u:
            slots.append(self._pslot[y])
            y = self._parent[y]
            vs.append(y)
        vs.reverse()
        slots.reverse()
        return DirectedPath(vs, slots)


class RandomPath(Orienter):
    """Up to ``reps`` random walks of at most ``depth`` steps from ``u``.

    A walk never steps onto a marked vertex. Marks are cleared before each
    walk unless ``reset_marks`` is False, in which case they persist across
    the repetitions of one insertion.
    """

    def __init__(
        self,
        n: int,
        depth: int,
        reps: int,
        seed: int = 0,
        *,
        reset_marks: bool = True,
        check: bool = True,
    ) -> None:
        super().__init__(n, check=check)
        if depth < 1 or reps < 1:
            raise ValueError("depth and reps must be >= 1")
        self.depth = depth
        self.reps = reps
        self.reset_marks = reset_marks
        self.rng = random.Random(seed)
        self.label = f"rpath_d{depth}_r{reps}"
        self._marks = _Marks(n)

    def insert(self, u: int, v: int) -> None:
        self.graph.insert_oriented(u, v)
        if self._pruned(u):
            return
        path = self.search(u)
        if path is not None:
            self.graph.flip_path(path)

    def search(self, u: int) -> DirectedPath | None:
        out = self.graph.out_adj
        limit = len(out[u]) - 1
        stamp = self._marks.stamp
        randrange = self.rng.randrange
        ep = self._marks.clear()
        for rep in range(self.reps):
            if rep and self.reset_marks:
                ep = self._marks.clear()
            stamp[u] = ep
            vs = [u]
            slots: list[int] = []
            x = u
            for _ in range(self.depth):
                adj = out[x]
                if not adj:
                    break
                i = randrange(len(adj))
                if stamp[adj[i]] == ep:
                    # one blind draw, then a uniform draw over the unmarked rest
                    free = [j for j, y in enumerate(adj) if stamp[y] != ep]
                    if not free:
                        break
                    i = free[randrange(len(free))]
                x = adj[i]
                stamp[x] = ep
                vs.append(x)
                slots.append(i)
                if len(out[x]) < limit:
                    return DirectedPath(vs, slots)
        return None


class DescendingDegrees(Orienter):
    """Repeatedly hand an out-edge to the lowest out-degree out-neighbor."""

    label = "descdeg"

    def insert(self, u: int, v: int) -> None:
        self.graph.insert_oriented(u, v)
        if self._pruned(u):
            return
        while self.descend(u):
            pass

    def descend(self, x: int) -> bool:
        """Walk down from ``x`` swapping edges; True if the first swap happened."""
        g = self.graph
        out = g.out_adj
        first = True
        while True:
            adj = out[x]
            best_i = 0
            best_w = adj[0]
            best_d = len(out[best_w])
            for i in range(1, len(adj)):
                w = adj[i]
                d = len(out[w])
                if d < best_d or (d == best_d and w < best_w):
                    best_i, best_w, best_d = i, w, d
            if best_d >= len(adj) - 1:
                return not first
            g.flip_slot(x, best_i)
            x = best_w
            first = False


class KFlips(Orienter):
    """Greedy flipping of FIFO-front edges at a maximum out-degree vertex.

    Each vertex keeps its out-edges in a FIFO queue; an ``OrderedDict`` keyed
    by head gives O(1) append, O(1) pop-front and O(1) removal by name.
    After every insert or delete, ``k`` flips are performed, each taking the
    oldest out-edge of the smallest-id maximum out-degree vertex.
    """

    def __init__(self, n: int, k: int, *, check: bool = True) -> None:
        if k < 1:
            raise ValueError("k must be >= 1")
        self.n = n
        self.k = k
        self.check = check
        self.label = f"kflips{k}"
        self.queues: list[OrderedDict[int, None]] = [OrderedDict() for _ in range(n)]
        self.tracker = MinIdTracker(n)
        self._m = 0
        self._flips = 0

    @property
    def flips(self) -> int:
        return self._flips

    @property
    def m(self) -> int:
        return self._m

    def insert(self, u: int, v: int) -> None:
        q = self.queues
        if self.check:
            if u == v:
                raise SelfLoop(f"self-loop at {u}")
            if v in q[u] or u in q[v]:
                raise DuplicateEdge(f"edge {{{u}, {v}}} already present")
        q[u][v] = None
        self.tracker.increment(u)
        self._m += 1
        self.flip_max(self.k)

    def delete(self, u: int, v: int) -> None:
        q = self.queues
        if v in q[u]:
            del q[u][v]
            self.tracker.decrement(u)
        elif u in q[v]:
            del q[v][u]
            self.tracker.decrement(v)
        else:
            raise MissingEdge(f"edge {{{u}, {v}}} not present")
        self._m -= 1
        self.flip_max(self.k)

    def flip_max(self, times: int) -> None:
        q = self.queues
        tracker = self.tracker
        for _ in range(times):
            x = tracker.top_vertex()
            if x is None:
                return
            y, _ = q[x].popitem(last=False)
            tracker.decrement(x)
            q[y][x] = None
            tracker.increment(y)
            self._flips += 1

    def adjacent(self, u: int, v: int) -> bool:
        return v in self.queues[u] or u in self.queues[v]

    def current_delta(self) -> int:
        return self.tracker.max_degree

    def out_degree(self, v: int) -> int:
        return len(self.queues[v])

    def arcs(self) -> Iterator[tuple[int, int]]:
        for u, qu in enumerate(self.queues):
            for v in qu:
                yield u, v

    def check_invariants(self) -> None:
        seen: set[tuple[int, int]] = set()
        for u, qu in enumerate(self.queues):
            assert len(qu) == self.tracker.degree[u], f"|Q_{u}| differs from out-degree"
            for v in qu:
                assert u != v, f"self-loop at {u}"
                key = (u, v) if u < v else (v, u)
                assert key not in seen, f"edge {key} stored twice"
                seen.add(key)
        assert len(seen) == self._m, "edge count out of sync"
        brute = max((len(qu) for qu in self.queues), default=0)
        assert self.tracker.max_degree == brute, "tracked delta differs from scan"


def _cascade(g: OrientedGraph, u: int, alpha: int, max_flips: int) -> int | None:
    """Reverse all out-edges of overfull vertices until none exceeds ``alpha``.

    Returns the number of flips, or None once more than ``max_flips`` were
    spent (the orientation stays valid but some vertex may still be overfull).
    """
    out = g.out_adj
    if len(out[u]) <= alpha:
        return 0
    full = alpha + 1
    stack = [u]
    flips = 0
    while stack:
        w = stack.pop()
        heads = g.reverse_all(w)
        flips += len(heads)
        for x in heads:
            if len(out[x]) == full:
                stack.append(x)
        if flips > max_flips:
            return None
    return flips


class BrodalFagerberg(Orienter):
    """Cascading reorientation under a fixed out-degree bound ``alpha_bound``.

    Termination is guaranteed when the bound is at least twice the arboricity
    of every intermediate graph. Below that a cascade may not stop, so each
    update is capped at ``budget_factor * (m + n)`` flips and raises
    :class:`BudgetExceeded` beyond it.
    """

    def __init__(
        self, n: int, alpha_bound: int, *, budget_factor: int = 50, check: bool = True
    ) -> None:
        super().__init__(n, check=check)
        self.alpha = alpha_bound
        self.budget_factor = budget_factor
        self.label = f"bf_static_a{alpha_bound}"

    def insert(self, u: int, v: int) -> None:
        g = self.graph
        g.insert_oriented(u, v)
        if self.alpha < 1:
            raise BudgetExceeded("no 0-orientation exists for a graph with edges")
        budget = self.budget_factor * (g.m + g.n)
        if _cascade(g, u, self.alpha, budget) is None:
            raise BudgetExceeded(f"more than {budget} flips in one update (alpha={self.alpha})")


def reorientation_credit(alpha: int) -> int:
    """Flips granted per insertion before a rebuild is forced."""
    return alpha + 1


def next_alpha(alpha: int, beta: Fraction) -> int:
    """Grow the bound by ``beta``, always by at least one."""
    return max(alpha + 1, math.ceil(beta * alpha))


class AdaptiveBrodalFagerberg(Orienter):
    """Brodal-Fagerberg without a known bound.

    Starts at ``alpha = 1``. Each insertion credits
    :func:`reorientation_credit` flips; every flip is debited. When the debit
    would exceed the credit, the cascade is abandoned and the structure is
    rebuilt with ``alpha = next_alpha(alpha, beta)``: all arcs are cleared and
    re-inserted under the new bound (retrying with a larger bound if the
    replay itself overdraws).
    """

    def __init__(self, n: int, beta: Fraction | float | str = 2, *, check: bool = True) -> None:
        super().__init__(n, check=check)
        beta = Fraction(str(beta)) if not isinstance(beta, Fraction) else beta
        if not 1 < beta <= 2:
            raise ValueError("beta must lie in (1, 2]")
        self.beta = beta
        self.alpha = 1
        self.rebuilds = 0
        self.label = f"bf{float(beta):g}"
        self._credit = 0
        self._debit = 0

    def insert(self, u: int, v: int) -> None:
        g = self.graph
        g.insert_oriented(u, v)
        self._credit += reorientation_credit(self.alpha)
        flips = _cascade(g, u, self.alpha, self._credit - self._debit)
        if flips is None:
            self._rebuild()
        else:
            self._debit += flips

    def _rebuild(self) -> None:
        g = self.graph
        edges = g.clear()
        while True:
            self.alpha = next_alpha(self.alpha, self.beta)
            self.rebuilds += 1
            credit = debit = 0
            for x, y in edges:
                g.insert_oriented(x, y)
                credit += reorientation_credit(self.alpha)
                flips = _cascade(g, x, self.alpha, credit - debit)
                if flips is None:
                    g.clear()
                    break
                debit += flips
            else:
                self._credit, self._debit = credit, debit
                return


@dataclass(frozen=True)
class AlgorithmConfig:
    """Algorithm selector plus parameters; fields unused by ``kind`` are ignored."""

    kind: str
    d: int = 20
    r: int = 10
    k: int = 50
    beta: Fraction = Fraction(2)
    alpha_bound: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown algorithm {self.kind!r}; expected one of {', '.join(KINDS)}")
        if not isinstance(self.beta, Fraction):
            object.__setattr__(self, "beta", Fraction(str(self.beta)))
        if self.kind in ("bfs", "rpath") and self.d < 1:
            raise ValueError("depth must be >= 1")
        if self.kind == "rpath" and self.r < 1:
            raise ValueError("reps must be >= 1")
        if self.kind == "kflips" and self.k < 1:
            raise ValueError("k must be >= 1")
        if self.kind == "bf-adaptive" and not 1 < self.beta <= 2:
            raise ValueError("beta must lie in (1, 2]")
        if self.kind == "bf" and (self.alpha_bound is None or self.alpha_bound < 1):
            raise ValueError("static bf needs alpha_bound >= 1")

    @property
    def label(self) -> str:
        if self.kind == "bfs":
            return f"bfs{self.d}"
        if self.kind == "rpath":
            return f"rpath_d{self.d}_r{self.r}"
        if self.kind == "kflips":
            return f"kflips{self.k}"
        if self.kind == "bf":
            return f"bf_static_a{self.alpha_bound}"
        if self.kind == "bf-adaptive":
            return f"bf{float(self.beta):g}"
        return self.kind

    @property
    def randomized(self) -> bool:
        return self.kind == "rpath"

    def with_seed(self, seed: int) -> AlgorithmConfig:
        return replace(self, seed=seed)

    def build(self, n: int, *, check: bool = True) -> Orienter:
        kind = self.kind
        if kind == "naive":
            return Naive(n, check=check)
        if kind == "bfs":
            return BFS(n, self.d, check=check)
        if kind == "rpath":
            return RandomPath(n, self.d, self.r, self.seed, check=check)
        if kind == "descdeg":
            return DescendingDegrees(n, check=check)
        if kind == "kflips":
            return KFlips(n, self.k, check=check)
        if kind == "bf":
            assert self.alpha_bound is not None
            return BrodalFagerberg(n, self.alpha_bound, check=check)
        return AdaptiveBrodalFagerberg(n, self.beta, check=check)

    @classmethod
    def parse(cls, text: str, **defaults) -> AlgorithmConfig:
        """Parse ``kind[:key=value,...]``, e.g. ``rpath:d=50,r=10``.

        Keys accept the long CLI spellings too (``depth``, ``reps``,
        ``alpha-bound``). ``defaults`` fill anything not given inline.
        """
        aliases = {"depth": "d", "reps": "r", "alpha-bound": "alpha_bound", "alpha": "alpha_bound"}
        kind, _, rest = text.partition(":")
        params = {k: v for k, v in defaults.items() if v is not None}
        for item in filter(None, rest.split(",")):
            key, sep, value = item.partition("=")
            key = aliases.get(key.strip(), key.strip())
            if not sep or key not in ("d", "r", "k", "beta", "alpha_bound", "seed"):
                raise ValueError(f"bad algorithm parameter {item!r}")
            params[key] = value.strip()
        for key in ("d", "r", "k", "alpha_bound", "seed"):
            if key in params:
                params[key] = int(params[key])
        if "beta" in params:
            params["beta"] = Fraction(str(params["beta"]))
        return cls(kind.strip(), **params)

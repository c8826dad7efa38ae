"""Exact brute-force search for MM and its terminal-pair variant."""

from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator

from .graph import MMInstance, MMPInstance

DEFAULT_NODE_BUDGET = 2_000_000
DEFAULT_MAX_VERTICES = 100


class GuardExceeded(RuntimeError):
    """A size or work guard was hit; the instance is undecided, not a 'no'."""

    def __init__(self, message: str, method: str | None = None):
        self.method = method
        super().__init__(f"[{method}] {message}" if method else message)


@dataclass
class SolveOutcome:
    answer: bool
    witness: tuple | None = None
    stats: dict = field(default_factory=dict)

    def __bool__(self):
        return self.answer


def enumerate_terminal_choices(inst: MMInstance) -> Iterator[MMPInstance]:
    """Terminal-pair instances whose yes-answers together decide ``inst``.

    Sources are taken as sorted k-subsets of ``A`` (path indices are
    interchangeable), sinks as ordered k-tuples of distinct vertices of
    ``Z``. Choices placing terminals of different indices within distance
    ``r - 1`` of each other are skipped.
    """
    g, k, r = inst.graph, inst.k, inst.r
    if len(inst.A) < k or len(inst.Z) < k:
        return

    def clash(x, y):
        return g.bfs(x)[y] <= r - 1

    for S in itertools.combinations(sorted(inst.A), k):
        if any(clash(S[i], S[j]) for i in range(k) for j in range(i + 1, k)):
            continue
        for T in itertools.permutations(sorted(inst.Z), k):
            if any(
                clash(S[i], T[j]) or (i < j and clash(T[i], T[j]))
                for i in range(k)
                for j in range(k)
                if i != j
            ):
                continue
            yield MMPInstance(g, tuple(zip(S, T)), r)


class _Search:
    def __init__(self, inst: MMPInstance, node_budget: int):
        self.g = inst.graph
        self.terms = inst.terminals
        self.k = inst.k
        self.reach = inst.r - 1
        self.budget = node_budget
        self.nodes = 0
        n = self.g.n
        self._balls: dict[int, tuple] = {}
        # forbidden-by-terminal counts and per-index terminal zones
        self.zone = []
        self.zone_count = [0] * n
        for s, t in self.terms:
            z = set(self.ball(s)) | set(self.ball(t))
            self.zone.append(z)
            for u in z:
                self.zone_count[u] += 1
        self.fixed = [0] * n  # ball counts of completed paths
        self.cur = [0] * n  # ball counts of the partial path being routed
        self.paths: list[tuple] = []

    def ball(self, v):
        b = self._balls.get(v)
        if b is None:
            d = self.g.bfs(v)
            b = tuple(u for u in range(self.g.n) if d[u] <= self.reach)
            self._balls[v] = b
        return b

    def _add(self, arr, v, delta):
        for u in self.ball(v):
            arr[u] += delta

    def allowed(self, i, u, with_cur=False):
        if self.fixed[u] or (with_cur and self.cur[u]):
            return False
        return self.zone_count[u] - (u in self.zone[i]) == 0

    def _bfs_path(self, i, src, dst, avoid=(), with_cur=False, want_path=False):
        if src == dst:
            return (src,) if want_path else True
        parent = {src: None}
        queue = deque([src])
        adj = self.g.adj
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w in parent or w in avoid or not self.allowed(i, w, with_cur):
                    continue
                parent[w] = u
                if w == dst:
                    if not want_path:
                        return True
                    out = [w]
                    while parent[out[-1]] is not None:
                        out.append(parent[out[-1]])
                    return tuple(reversed(out))
                queue.append(w)
        return None if want_path else False

    def _later_feasible(self, i):
        for j in range(i + 1, self.k):
            s, t = self.terms[j]
            if not (self.allowed(j, s, True) and self.allowed(j, t, True)):
                return False
            if not self._bfs_path(j, s, t, with_cur=True):
                return False
        return True

    def route(self, i) -> bool:
        s, t = self.terms[i]
        if not self.allowed(i, s) or not self.allowed(i, t):
            return False
        if i == self.k - 1:
            self.nodes += 1
            p = self._bfs_path(i, s, t, want_path=True)
            if p is None:
                return False
            self.paths.append(p)
            return True
        path = [s]
        on = {s}
        self._add(self.cur, s, 1)
        try:
            return self._extend(i, path, on)
        finally:
            self._add(self.cur, s, -1)

    def _extend(self, i, path, on) -> bool:
        self.nodes += 1
        if self.nodes > self.budget:
            raise GuardExceeded(f"node budget of {self.budget} exceeded", "brute")
        v = path[-1]
        s, t = self.terms[i]
        if v == t:
            if not self._later_feasible(i):
                return False
            fixed = tuple(path)
            for x in fixed:
                self._add(self.fixed, x, 1)
            self.paths.append(fixed)
            saved, self.cur = self.cur, [0] * self.g.n
            try:
                if self.route(i + 1):
                    return True
            finally:
                self.cur = saved
            self.paths.pop()
            for x in fixed:
                self._add(self.fixed, x, -1)
            return False
        if not self._bfs_path(i, v, t, avoid=on) or not self._later_feasible(i):
            return False
        for w in self.g.adj[v]:
            if w in on or not self.allowed(i, w):
                continue
            path.append(w)
            on.add(w)
            self._add(self.cur, w, 1)
            try:
                if self._extend(i, path, on):
                    return True
            finally:
                self._add(self.cur, w, -1)
                on.discard(w)
                path.pop()
        return False


def solve_mmp_brute(
    inst: MMPInstance,
    node_budget: int = DEFAULT_NODE_BUDGET,
    max_vertices: int | None = DEFAULT_MAX_VERTICES,
) -> SolveOutcome:
    """Decide a terminal-pair instance by depth-first path enumeration.

    Paths are routed in index order; once path ``i`` is fixed its
    ``(r-1)``-ball is closed to later paths. The last path is found by BFS.
    A partial path is abandoned as soon as its own sink or some later
    terminal pair becomes disconnected.
    """
    if max_vertices is not None and inst.graph.n > max_vertices:
        raise GuardExceeded(
            f"{inst.graph.n} vertices exceeds the limit of {max_vertices}", "brute"
        )
    start = time.perf_counter()
    search = _Search(inst, node_budget)
    r, terms, g = inst.r, inst.terminals, inst.graph
    clash = any(
        g.bfs(x)[y] <= r - 1
        for i in range(inst.k)
        for j in range(inst.k)
        if i != j
        for x in terms[i]
        for y in terms[j]
    )
    found = not clash and search.route(0)
    return SolveOutcome(
        found,
        tuple(search.paths) if found else None,
        {"method": "brute", "nodes": search.nodes, "elapsed": time.perf_counter() - start},
    )


def solve_mm_brute(
    inst: MMInstance,
    node_budget: int = DEFAULT_NODE_BUDGET,
    max_vertices: int | None = DEFAULT_MAX_VERTICES,
) -> SolveOutcome:
    """Decide an MM instance by trying every terminal choice in turn.

    ``node_budget`` applies to each terminal-pair sub-instance separately.
    """
    start = time.perf_counter()
    nodes = subs = 0
    for sub in enumerate_terminal_choices(inst):
        subs += 1
        out = solve_mmp_brute(sub, node_budget, max_vertices)
        nodes += out.stats["nodes"]
        if out.answer:
            stats = {"method": "brute", "nodes": nodes, "subinstances": subs,
                     "elapsed": time.perf_counter() - start}
            return SolveOutcome(True, out.witness, stats)
    stats = {"method": "brute", "nodes": nodes, "subinstances": subs,
             "elapsed": time.perf_counter() - start}
    return SolveOutcome(False, None, stats)

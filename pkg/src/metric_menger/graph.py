"""Simple undirected graphs, distances, balls and solution verification."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

INF = math.inf

Path = tuple  # tuple[int, ...]; a single vertex is a path of length 0
PathSet = tuple  # tuple[Path, ...]


@dataclass(frozen=True)
class Violation:
    """A named failure reported by one of the verifiers."""

    kind: str
    detail: str
    paths: tuple = ()

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``.

    Neighbour lists are kept sorted so that two graphs with the same edge
    set compare equal. BFS distance arrays are memoised per source.
    """

    __slots__ = ("n", "adj", "_bfs_cache")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references a vertex outside 0..{n - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in nbrs)
        self._bfs_cache: dict[int, tuple] = {}

    @classmethod
    def from_adjacency(cls, adj: Sequence[Iterable[int]]) -> "Graph":
        return cls(len(adj), ((u, v) for u, vs in enumerate(adj) for v in vs if u < v))

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges})"

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def _check_vertex(self, v) -> None:
        if not isinstance(v, int) or not 0 <= v < self.n:
            raise ValueError(f"invalid vertex id {v!r} (graph has {self.n} vertices)")

    def bfs(self, source: int) -> tuple:
        """Distances from ``source`` to every vertex (``INF`` if unreachable)."""
        self._check_vertex(source)
        cached = self._bfs_cache.get(source)
        if cached is not None:
            return cached
        dist = [INF] * self.n
        dist[source] = 0
        queue = deque([source])
        adj = self.adj
        while queue:
            u = queue.popleft()
            du = dist[u] + 1
            for w in adj[u]:
                if dist[w] == INF:
                    dist[w] = du
                    queue.append(w)
        result = tuple(dist)
        # setdefault keeps concurrent fillers consistent: both compute the same value
        return self._bfs_cache.setdefault(source, result)


def dist(g: Graph, u: int, v: int):
    """Shortest-path length between ``u`` and ``v``; ``math.inf`` if disconnected."""
    g._check_vertex(v)
    return g.bfs(u)[v]


def closed_ball(g: Graph, v: int, m: int) -> frozenset:
    """All vertices at distance at most ``m`` from ``v``."""
    if m < 0:
        raise ValueError("radius must be non-negative")
    d = g.bfs(v)
    return frozenset(u for u in range(g.n) if d[u] <= m)


def ball_of_set(g: Graph, vertices: Iterable[int], m: int) -> set:
    """Vertices within distance ``m`` of some vertex in ``vertices`` (multi-source BFS)."""
    seen = {}
    queue = deque()
    for v in vertices:
        g._check_vertex(v)
        if v not in seen:
            seen[v] = 0
            queue.append(v)
    while queue:
        u = queue.popleft()
        du = seen[u]
        if du == m:
            continue
        for w in g.adj[u]:
            if w not in seen:
                seen[w] = du + 1
                queue.append(w)
    return set(seen)


def max_degree(g: Graph) -> int:
    return max((len(a) for a in g.adj), default=0)


def path_violation(g: Graph, p: Sequence[int]) -> str | None:
    """Describe why ``p`` is not a simple path of ``g``, or return None."""
    if len(p) == 0:
        return "empty path"
    for v in p:
        if not isinstance(v, int) or not 0 <= v < g.n:
            return f"vertex {v!r} not in graph"
    if len(set(p)) != len(p):
        seen = set()
        for v in p:
            if v in seen:
                return f"vertex {v} repeated"
            seen.add(v)
    for x, y in zip(p, p[1:]):
        if not g.has_edge(x, y):
            return f"{x}-{y} is not an edge"
    return None


def is_path(g: Graph, p: Sequence[int]) -> bool:
    return path_violation(g, p) is None


def min_distance(g: Graph, p: Iterable[int], q: Iterable[int]):
    """Minimum over pairs of ``dist(x, y)`` with ``x`` in ``p`` and ``y`` in ``q``."""
    targets = set(q)
    if not targets:
        return INF
    seen = set()
    frontier = []
    for v in p:
        if v not in seen:
            seen.add(v)
            frontier.append(v)
    d = 0
    while frontier:
        if targets.intersection(frontier):
            return d
        nxt = []
        for u in frontier:
            for w in g.adj[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
        d += 1
    return INF


def paths_are_m_disjoint(g: Graph, p: Sequence[int], q: Sequence[int], m: int) -> bool:
    """True iff every path joining a vertex of ``p`` to one of ``q`` has length > m."""
    for path in (p, q):
        why = path_violation(g, path)
        if why is not None:
            raise ValueError(f"invalid path {list(path)}: {why}")
    return min_distance(g, p, q) >= m + 1


@dataclass(frozen=True)
class MMInstance:
    """Metric Menger instance: find ``k`` paths from ``A`` to ``Z`` pairwise at distance >= r."""

    graph: Graph
    A: frozenset
    Z: frozenset
    r: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "A", frozenset(self.A))
        object.__setattr__(self, "Z", frozenset(self.Z))
        if self.r < 1 or self.k < 1:
            raise ValueError(f"need r >= 1 and k >= 1, got r={self.r}, k={self.k}")
        for v in self.A | self.Z:
            self.graph._check_vertex(v)


@dataclass(frozen=True)
class MMPInstance:
    """Terminal-pair variant: path ``i`` must join ``terminals[i][0]`` to ``terminals[i][1]``."""

    graph: Graph
    terminals: tuple
    r: int

    def __post_init__(self):
        terms = tuple((int(s), int(t)) for s, t in self.terminals)
        object.__setattr__(self, "terminals", terms)
        if self.r < 1 or not terms:
            raise ValueError("need r >= 1 and at least one terminal pair")
        for s, t in terms:
            self.graph._check_vertex(s)
            self.graph._check_vertex(t)

    @property
    def k(self) -> int:
        return len(self.terminals)


def _disjointness_violation(g: Graph, paths, r: int) -> Violation | None:
    for i in range(len(paths)):
        for j in range(i + 1, len(paths)):
            d = min_distance(g, paths[i], paths[j])
            if d < r:
                return Violation(
                    "not disjoint",
                    f"paths {i + 1} and {j + 1} are at distance {d} < {r} "
                    f"(not {r - 1}-disjoint)",
                    (i + 1, j + 1),
                )
    return None


def verify_mm_solution(inst: MMInstance, sol: Sequence[Sequence[int]]) -> Violation | None:
    """Return None if ``sol`` solves ``inst``, otherwise the first violated condition.

    Conditions are checked in order: path count, path validity, endpoints in
    ``A``/``Z``, pairwise (r-1)-disjointness. Path indices in reports are 1-based.
    """
    g = inst.graph
    if len(sol) != inst.k:
        return Violation("wrong path count", f"expected {inst.k} paths, got {len(sol)}")
    for i, p in enumerate(sol, 1):
        why = path_violation(g, p)
        if why is not None:
            return Violation("invalid path", f"path {i}: {why}", (i,))
    for i, p in enumerate(sol, 1):
        if p[0] not in inst.A:
            return Violation("bad endpoint", f"path {i} starts at {p[0]}, which is not in A", (i,))
        if p[-1] not in inst.Z:
            return Violation("bad endpoint", f"path {i} ends at {p[-1]}, which is not in Z", (i,))
    return _disjointness_violation(g, sol, inst.r)


def verify_mmp_solution(inst: MMPInstance, sol: Sequence[Sequence[int]]) -> Violation | None:
    """Terminal-pair analogue of :func:`verify_mm_solution`."""
    g = inst.graph
    if len(sol) != inst.k:
        return Violation("wrong path count", f"expected {inst.k} paths, got {len(sol)}")
    for i, (p, (s, t)) in enumerate(zip(sol, inst.terminals), 1):
        why = path_violation(g, p)
        if why is not None:
            return Violation("invalid path", f"path {i}: {why}", (i,))
        if p[0] != s or p[-1] != t:
            return Violation(
                "bad endpoint", f"path {i} runs {p[0]}->{p[-1]}, expected {s}->{t}", (i,)
            )
    return _disjointness_violation(g, sol, inst.r)


def shortcut_path(g: Graph, p: Sequence[int]) -> tuple:
    """Remove chords from a path so that it becomes an induced path with the same ends."""
    p = list(p)
    out = []
    i = 0
    pos = {v: idx for idx, v in enumerate(p)}
    while True:
        v = p[i]
        out.append(v)
        if i == len(p) - 1:
            break
        # jump to the furthest later path vertex adjacent to v
        i = max(pos[w] for w in g.adj[v] if w in pos and pos[w] > i)
    return tuple(out)

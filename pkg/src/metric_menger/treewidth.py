"""Tree decompositions: min-fill construction, validation, PACE I/O, nice form."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .cnf import ParseError
from .graph import Graph, Violation, closed_ball


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed ``0..N-1`` and the tree edges between them."""

    bags: tuple  # tuple[frozenset, ...]
    edges: tuple  # tuple[(i, j), ...] with i < j

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))
        object.__setattr__(
            self, "edges", tuple(sorted((min(a, b), max(a, b)) for a, b in self.edges))
        )

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def neighbours(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.edges:
            out[a].append(b)
            out[b].append(a)
        return out


def _fill_in(nbrs: dict, v) -> int:
    ns = list(nbrs[v])
    missing = 0
    for x in range(len(ns)):
        nx = nbrs[ns[x]]
        for y in range(x + 1, len(ns)):
            if ns[y] not in nx:
                missing += 1
    return missing


def min_fill_ordering(g: Graph) -> list[int]:
    """Greedy elimination order by fewest fill edges, ties to the lowest id."""
    nbrs = {v: set(g.adj[v]) for v in range(g.n)}
    order = []
    while nbrs:
        v = min(nbrs, key=lambda u: (_fill_in(nbrs, u), u))
        ns = nbrs.pop(v)
        for x in ns:
            nbrs[x].discard(v)
            nbrs[x] |= ns - {x}
        order.append(v)
    return order


def decomposition_from_ordering(g: Graph, order: Sequence[int]) -> TreeDecomposition:
    """Tree decomposition induced by an elimination ordering.

    Bags contained in a neighbouring bag are merged away.
    """
    if g.n == 0:
        return TreeDecomposition((frozenset(),), ())
    pos = {v: i for i, v in enumerate(order)}
    nbrs = [set(a) for a in g.adj]
    bags = []
    parent = []
    for v in order:
        later = {u for u in nbrs[v] if pos[u] > pos[v]}
        bags.append(frozenset(later | {v}))
        for x in later:
            nbrs[x] |= later - {x}
        parent.append(min(later, key=pos.__getitem__) if later else None)
    node_of = {v: i for i, v in enumerate(order)}
    edges = []
    roots = []
    for i, p in enumerate(parent):
        if p is None:
            roots.append(i)
        else:
            edges.append((i, node_of[p]))
    edges += [(roots[t], roots[t + 1]) for t in range(len(roots) - 1)]
    return _compress(TreeDecomposition(tuple(bags), tuple(edges)))


def _compress(td: TreeDecomposition) -> TreeDecomposition:
    """Contract tree edges where one bag contains the other."""
    bags = {i: b for i, b in enumerate(td.bags)}
    adj = {i: set() for i in bags}
    for a, b in td.edges:
        adj[a].add(b)
        adj[b].add(a)
    changed = True
    while changed:
        changed = False
        for a in sorted(bags):
            for b in sorted(adj[a]):
                if bags[a] <= bags[b]:
                    # merge a into b
                    for x in adj[a]:
                        if x != b:
                            adj[x].discard(a)
                            adj[x].add(b)
                            adj[b].add(x)
                    adj[b].discard(a)
                    del adj[a], bags[a]
                    changed = True
                    break
            if changed:
                break
    ids = {old: new for new, old in enumerate(sorted(bags))}
    edges = {(min(ids[a], ids[b]), max(ids[a], ids[b])) for a in adj for b in adj[a]}
    return TreeDecomposition(tuple(bags[o] for o in sorted(bags)), tuple(sorted(edges)))


def min_fill_decomposition(g: Graph) -> TreeDecomposition:
    return decomposition_from_ordering(g, min_fill_ordering(g))


def validate_td(g: Graph, td: TreeDecomposition) -> Violation | None:
    """Check the decomposition axioms; return the first violation or None."""
    N = len(td.bags)
    if N == 0:
        return Violation("not a tree", "decomposition has no bags")
    for a, b in td.edges:
        if not (0 <= a < N and 0 <= b < N) or a == b:
            return Violation("not a tree", f"bad tree edge ({a}, {b})")
    if len(set(td.edges)) != N - 1 or len(td.edges) != N - 1:
        return Violation("not a tree", f"{N} bags need {N - 1} distinct tree edges, got {len(td.edges)}")
    nb = td.neighbours()
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in nb[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    if len(seen) != N:
        return Violation("not a tree", "tree edges do not connect all bags")
    occ: list[list[int]] = [[] for _ in range(g.n)]
    for i, bag in enumerate(td.bags):
        for v in bag:
            if not isinstance(v, int) or not 0 <= v < g.n:
                return Violation("unknown vertex", f"bag {i} contains {v!r}")
            occ[v].append(i)
    for v in range(g.n):
        if not occ[v]:
            return Violation("vertex not covered", f"vertex {v} is in no bag")
    for u, v in g.edges():
        if not any(v in td.bags[i] for i in occ[u]):
            return Violation("edge not covered", f"edge {u}-{v} is in no bag")
    for v in range(g.n):
        where = set(occ[v])
        start = occ[v][0]
        reached = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in nb[x]:
                if y in where and y not in reached:
                    reached.add(y)
                    queue.append(y)
        if reached != where:
            return Violation("subtree violated", f"bags containing vertex {v} are not connected")
    return None


def _require_valid(g, td):
    bad = validate_td(g, td)
    if bad is not None:
        raise ValueError(f"invalid tree decomposition: {bad}")


def expand_bags(g: Graph, td: TreeDecomposition, m: int) -> TreeDecomposition:
    """Replace every bag by the union of the closed m-balls of its vertices."""
    if m < 0:
        raise ValueError("radius must be non-negative")
    _require_valid(g, td)
    if m == 0:
        return td
    balls = [closed_ball(g, v, m) for v in range(g.n)]
    return TreeDecomposition(
        tuple(frozenset().union(*(balls[v] for v in bag)) for bag in td.bags), td.edges
    )


def distance_power(g: Graph, d: int) -> Graph:
    """Graph joining every pair of distinct vertices at distance at most ``d``."""
    return Graph(g.n, ((u, v) for u in range(g.n) for v in closed_ball(g, u, d) if u < v))


# ---------------------------------------------------------------------------
# nice decompositions

LEAF, INTRODUCE, INTRODUCE_EDGE, FORGET, JOIN = "leaf", "introduce", "introduce_edge", "forget", "join"


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: frozenset
    children: tuple = ()
    vertex: int | None = None
    edge: tuple | None = None


@dataclass(frozen=True)
class NiceTreeDecomposition:
    """Nodes in post-order (children before parents); the root is last."""

    nodes: tuple

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def width(self) -> int:
        return max(len(nd.bag) for nd in self.nodes) - 1

    def depths(self) -> list[int]:
        depth = [0] * len(self.nodes)
        for idx in range(len(self.nodes) - 1, -1, -1):
            for ch in self.nodes[idx].children:
                depth[ch] = depth[idx] + 1
        return depth


def make_nice(td: TreeDecomposition, g: Graph, root: int = 0) -> NiceTreeDecomposition:
    """Convert ``td`` to a nice decomposition rooted at an empty bag.

    Vertices are introduced and forgotten in increasing id order. Each graph
    edge gets exactly one introduce-edge node, placed right after the first
    node (in post-order) whose bag holds both endpoints.
    """
    _require_valid(g, td)
    nodes: list[NiceNode] = []
    introduced_edges: set = set()

    def add(node):
        nodes.append(node)
        return len(nodes) - 1

    def forget(top, bag, v):
        for w in sorted(bag):
            e = (min(v, w), max(v, w))
            if w != v and g.has_edge(v, w) and e not in introduced_edges:
                introduced_edges.add(e)
                top = add(NiceNode(INTRODUCE_EDGE, bag, (top,), edge=e))
        return add(NiceNode(FORGET, bag - {v}, (top,), vertex=v)), bag - {v}

    def introduce(top, bag, v):
        bag = bag | {v}
        top = add(NiceNode(INTRODUCE, bag, (top,), vertex=v))
        for w in sorted(bag):
            e = (min(v, w), max(v, w))
            if w != v and g.has_edge(v, w) and e not in introduced_edges:
                introduced_edges.add(e)
                top = add(NiceNode(INTRODUCE_EDGE, bag, (top,), edge=e))
        return top, bag

    def retarget(top, bag, target):
        for v in sorted(bag - target):
            top, bag = forget(top, bag, v)
        for v in sorted(target - bag):
            top, bag = introduce(top, bag, v)
        return top

    nb = td.neighbours()
    # iterative post-order over the rooted decomposition
    parent = {root: None}
    order = []
    stack = [root]
    while stack:
        x = stack.pop()
        order.append(x)
        for y in sorted(nb[x], reverse=True):
            if y not in parent:
                parent[y] = x
                stack.append(y)
    children: dict[int, list[int]] = {x: [] for x in order}
    for x in order:
        if parent[x] is not None:
            children[parent[x]].append(x)
    top_of: dict[int, int] = {}
    for x in reversed(order):
        bag = td.bags[x]
        kids = sorted(children[x])
        if not kids:
            top = retarget(add(NiceNode(LEAF, frozenset())), frozenset(), bag)
        else:
            branches = [retarget(top_of[c], td.bags[c], bag) for c in kids]
            top = branches[0]
            for other in branches[1:]:
                top = add(NiceNode(JOIN, bag, (top, other)))
        top_of[x] = top
    top = top_of[root]
    bag = td.bags[root]
    for v in sorted(bag):
        top, bag = forget(top, bag, v)
    return NiceTreeDecomposition(tuple(nodes))


# ---------------------------------------------------------------------------
# PACE formats


def parse_gr(text: str) -> Graph:
    """PACE ``.gr``: header ``p tw <n> <m>`` then 1-indexed edge lines."""
    n = m = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "tw" or n is not None:
                raise ParseError(f"malformed header {line!r}", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"malformed header {line!r}", lineno) from None
            continue
        if n is None:
            raise ParseError("edge before 'p tw' header", lineno)
        try:
            u, v = map(int, parts)
        except ValueError:
            raise ParseError(f"malformed edge line {line!r}", lineno) from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"vertex out of range 1..{n}", lineno)
        edges.append((u - 1, v - 1))
    if n is None:
        raise ParseError("missing 'p tw' header")
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges, found {len(edges)}")
    try:
        return Graph(n, edges)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def write_gr(g: Graph) -> str:
    lines = [f"p tw {g.n} {g.num_edges}"] + [f"{u + 1} {v + 1}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def parse_td(text: str) -> tuple[TreeDecomposition, int]:
    """PACE ``.td``; returns the decomposition and the declared vertex count.

    Axioms are not checked here; use :func:`validate_td`.
    """
    header = None
    bags: dict[int, frozenset] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        try:
            if parts[0] == "s":
                if len(parts) != 5 or parts[1] != "td" or header is not None:
                    raise ParseError(f"malformed header {line!r}", lineno)
                header = tuple(map(int, parts[2:]))
                continue
            if header is None:
                raise ParseError("content before 's td' header", lineno)
            num_bags, _, n = header
            if parts[0] == "b":
                bid = int(parts[1])
                verts = [int(x) for x in parts[2:]]
                if not 1 <= bid <= num_bags or bid in bags:
                    raise ParseError(f"bad or duplicate bag id {bid}", lineno)
                for v in verts:
                    if not 1 <= v <= n:
                        raise ParseError(f"bag vertex {v} outside 1..{n}", lineno)
                bags[bid] = frozenset(v - 1 for v in verts)
            else:
                a, b = map(int, parts)
                if not (1 <= a <= num_bags and 1 <= b <= num_bags):
                    raise ParseError("tree edge references unknown bag", lineno)
                edges.append((a - 1, b - 1))
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"malformed line {line!r}", lineno) from None
    if header is None:
        raise ParseError("missing 's td' header")
    num_bags, max_size, n = header
    if sorted(bags) != list(range(1, num_bags + 1)):
        raise ParseError(f"expected bags 1..{num_bags}, got {len(bags)}")
    td = TreeDecomposition(tuple(bags[i] for i in range(1, num_bags + 1)), tuple(edges))
    if td.width + 1 != max_size:
        raise ParseError(f"header declares bag size {max_size}, largest bag has {td.width + 1}")
    return td, n


def write_td(td: TreeDecomposition, n: int) -> str:
    lines = [f"s td {len(td.bags)} {td.width + 1} {n}"]
    for i, bag in enumerate(td.bags, 1):
        lines.append(" ".join(["b", str(i), *(str(v + 1) for v in sorted(bag))]))
    lines += [f"{a + 1} {b + 1}" for a, b in td.edges]
    return "\n".join(lines) + "\n"

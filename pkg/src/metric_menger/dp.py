"""Dynamic programming over nice tree decompositions for the colouring encoding.

Two modes are provided:

``general``
    Bags are expanded by the check radius, so each vertex check sees all
    of its ball inside one bag. States are colour tuples over the bag.
    Tables can grow with treewidth and maximum degree.

``tw``
    Only valid when the check radius is 1 (``r <= 3``). Runs on a
    decomposition of the graph itself. Each bag vertex carries its colour
    plus a small aggregate of what its already-introduced edges have shown:
    the number of same-index coloured neighbours for a coloured vertex, or
    (``r = 3`` only) the single index seen among the neighbours of an
    uncoloured vertex. Aggregates that can no longer pass the final check
    are dropped as soon as they appear. A vertex's check is completed at
    its forget node.

Colours are handled internally as small integer codes: 0 for uncoloured,
``3 * (i - 1) + j + 1`` for ``(i, j)``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .graph import MMInstance, MMPInstance, verify_mm_solution, verify_mmp_solution
from .local_check import (
    DEFAULT_LOCAL_GUARD,
    LocalCheckInstance,
    TerminalConflict,
    decode_paths,
    encode_mmp,
    locality,
    solve_local_brute,
)
from .solver import (
    DEFAULT_MAX_VERTICES,
    DEFAULT_NODE_BUDGET,
    GuardExceeded,
    SolveOutcome,
    enumerate_terminal_choices,
    solve_mmp_brute,
)
from .treewidth import (
    FORGET,
    INTRODUCE,
    INTRODUCE_EDGE,
    JOIN,
    LEAF,
    NiceTreeDecomposition,
    TreeDecomposition,
    expand_bags,
    make_nice,
    min_fill_decomposition,
    validate_td,
)

DEFAULT_STATE_BUDGET = 2_000_000
AUTO_BAG_LIMIT = 12
AUTO_TW_WIDTH_LIMIT = 4
METHODS = ("auto", "brute", "dp_general", "dp_tw", "local_brute")


def _code(color) -> int:
    return 0 if color is None else 3 * (color[0] - 1) + color[1] + 1


def _color(code: int):
    return None if code == 0 else ((code - 1) // 3 + 1, (code - 1) % 3)


def _index(code: int) -> int:
    return (code - 1) // 3 + 1 if code else 0


def _need(code: int) -> int:
    return (code - 1) % 3


def _allowed_codes(lc: LocalCheckInstance):
    return [sorted(_code(c) for c in a) for a in lc.allowed]


def _require_valid(g, td):
    bad = validate_td(g, td)
    if bad is not None:
        raise ValueError(f"invalid tree decomposition: {bad}")


def _reconstruct(ntd: NiceTreeDecomposition, orders, tables, n: int, color_of) -> list:
    """Walk back-links from the root and read each vertex's colour at its forget node."""
    codes = [0] * n
    stack = [(ntd.root, ())]
    while stack:
        idx, state = stack.pop()
        node = ntd.nodes[idx]
        link = tables[idx][state]
        if node.kind == LEAF:
            continue
        if node.kind == JOIN:
            stack.append((node.children[0], link[0]))
            stack.append((node.children[1], link[1]))
            continue
        child = node.children[0]
        if node.kind == FORGET:
            codes[node.vertex] = color_of(link[orders[child].index(node.vertex)])
        stack.append((child, link))
    return [_color(c) for c in codes]


# ---------------------------------------------------------------------------
# general mode


@dataclass
class GeneralPlan:
    """Expanded nice decomposition plus the node at which each vertex is checked."""

    ntd: NiceTreeDecomposition
    orders: list  # per node: sorted bag tuple
    checked_at: list  # per node: vertices whose check runs there
    max_bag: int

    @classmethod
    def build(cls, lc: LocalCheckInstance, td: TreeDecomposition) -> "GeneralPlan":
        g = lc.graph
        _require_valid(g, td)
        ntd = make_nice(expand_bags(g, td, lc.m_star), g)
        depth = ntd.depths()
        checked_at: list[list[int]] = [[] for _ in ntd.nodes]
        for v in range(g.n):
            ball = set(lc.balls[v])
            best = min(
                (i for i, nd in enumerate(ntd.nodes) if ball <= nd.bag),
                key=lambda i: (-depth[i], i),
            )
            checked_at[best].append(v)
        orders = [tuple(sorted(nd.bag)) for nd in ntd.nodes]
        return cls(ntd, orders, checked_at, ntd.width + 1)


def _compile_check(lc: LocalCheckInstance, v: int, order: tuple):
    pos = {u: p for p, u in enumerate(order)}
    pairs = tuple((pos[u], pos[w]) for u, w in lc.close_pairs[v])
    nbrs = tuple(pos[w] for w in lc.graph.adj[v])
    return pos[v], pairs, nbrs


def _passes(state, vpos, pairs, nbrs) -> bool:
    for a, b in pairs:
        ca, cb = state[a], state[b]
        if ca and cb and (ca - 1) // 3 != (cb - 1) // 3:
            return False
    cv = state[vpos]
    if cv:
        i = (cv - 1) // 3
        same = 0
        for p in nbrs:
            cw = state[p]
            if cw and (cw - 1) // 3 == i:
                same += 1
        if same != (cv - 1) % 3:
            return False
    return True


def general_tables(
    lc: LocalCheckInstance,
    plan: GeneralPlan,
    state_budget: int = DEFAULT_STATE_BUDGET,
    eager: bool = True,
) -> list[dict]:
    """Bottom-up tables ``state -> back-link`` for every node of ``plan.ntd``.

    With ``eager`` set, a state is also dropped as soon as its bag shows two
    coloured vertices of different indices within distance ``r - 1``, or a
    coloured vertex with more same-index coloured neighbours than its
    colour permits. Both conditions can never hold in a valid colouring.
    """
    g, r = lc.graph, lc.r
    allowed = _allowed_codes(lc)
    ntd, orders = plan.ntd, plan.orders
    tables: list[dict] = []
    for idx, node in enumerate(ntd.nodes):
        order = orders[idx]
        kind = node.kind
        if kind == LEAF:
            table = {(): None}
        elif kind == INTRODUCE_EDGE:
            table = {s: s for s in tables[node.children[0]]}
        elif kind == INTRODUCE:
            v = node.vertex
            child = tables[node.children[0]]
            p = order.index(v)
            dv = g.bfs(v)
            close = [q for q, u in enumerate(order) if u != v and dv[u] <= r - 1]
            nb = [q for q, u in enumerate(order) if dv[u] == 1]
            nb_of = {
                q: [t for t, x in enumerate(order) if g.bfs(order[q])[x] == 1] for q in nb
            }
            table = {}
            for s in child:
                for code in allowed[v]:
                    t = s[:p] + (code,) + s[p:]
                    if eager and code and not _eager_ok(t, p, code, close, nb, nb_of):
                        continue
                    table[t] = s
        elif kind == FORGET:
            child = tables[node.children[0]]
            p = orders[node.children[0]].index(node.vertex)
            table = {}
            for s in child:
                table.setdefault(s[:p] + s[p + 1:], s)
        else:  # JOIN
            left, right = (tables[c] for c in node.children)
            if len(right) < len(left):
                table = {s: (s, s) for s in right if s in left}
            else:
                table = {s: (s, s) for s in left if s in right}
        for v in plan.checked_at[idx]:
            vpos, pairs, nbrs = _compile_check(lc, v, order)
            table = {s: b for s, b in table.items() if _passes(s, vpos, pairs, nbrs)}
        if len(table) > state_budget:
            raise GuardExceeded(f"state budget of {state_budget} exceeded at node {idx}", "dp_general")
        tables.append(table)
    return tables


def _eager_ok(t, p, code, close, nb, nb_of) -> bool:
    i = (code - 1) // 3
    for q in close:
        cq = t[q]
        if cq and (cq - 1) // 3 != i:
            return False
    same = 0
    for q in nb:
        cq = t[q]
        if cq and (cq - 1) // 3 == i:
            same += 1
            # q gained a same-index neighbour; recount its bag neighbourhood
            cnt = sum(1 for x in nb_of[q] if t[x] and (t[x] - 1) // 3 == i)
            if cnt > (cq - 1) % 3:
                return False
    return same <= (code - 1) % 3


def solve_dp_general(
    lc: LocalCheckInstance,
    td: TreeDecomposition,
    state_budget: int = DEFAULT_STATE_BUDGET,
    plan: GeneralPlan | None = None,
    eager: bool = True,
):
    """Decide ``lc`` exactly over ``td``; returns a colouring or None."""
    if plan is None:
        plan = GeneralPlan.build(lc, td)
    tables = general_tables(lc, plan, state_budget, eager)
    if not tables[-1]:
        return None
    return _reconstruct(plan.ntd, plan.orders, tables, lc.graph.n, lambda code: code)


# ---------------------------------------------------------------------------
# treewidth-only mode


def solve_dp_tw_only(
    lc: LocalCheckInstance,
    ntd: NiceTreeDecomposition,
    state_budget: int = DEFAULT_STATE_BUDGET,
):
    """Decide ``lc`` (check radius 1) over a nice decomposition of its graph."""
    if lc.m_star != 1:
        raise ValueError(f"treewidth-only mode needs check radius 1 (r <= 3), got {lc.m_star}")
    g, r, k = lc.graph, lc.r, lc.k
    allowed = _allowed_codes(lc)
    K = max(3, k + 1)  # packed entry = code * K + aggregate
    orders = [tuple(sorted(nd.bag)) for nd in ntd.nodes]
    tables: list[dict] = []

    def absorb(val, other_code):
        """Aggregate of a bag vertex after seeing one more neighbour colour, or -1."""
        if not other_code:
            return val
        code, agg = divmod(val, K)
        oi = (other_code - 1) // 3
        if code:
            if (code - 1) // 3 == oi:
                agg += 1
                return -1 if agg > (code - 1) % 3 else code * K + agg
            return val if r == 1 else -1
        if r == 3:
            if agg == 0:
                return code * K + oi + 1
            return val if agg == oi + 1 else -1
        return val

    def merge(a, b):
        code, x = divmod(a, K)
        y = b % K
        if code:
            s = x + y
            return -1 if s > (code - 1) % 3 else code * K + s
        if x and y and x != y:
            return -1
        return code * K + (x or y)

    for idx, node in enumerate(ntd.nodes):
        order = orders[idx]
        kind = node.kind
        if kind == LEAF:
            table = {(): None}
        elif kind == INTRODUCE:
            v = node.vertex
            p = order.index(v)
            dv = g.bfs(v)
            # implied: differently indexed coloured vertices are never this close
            close = [q for q, u in enumerate(order) if u != v and dv[u] <= r - 1]
            table = {}
            for s in tables[node.children[0]]:
                for code in allowed[v]:
                    if code:
                        i = (code - 1) // 3
                        if any(s[q - (q > p)] >= K and (s[q - (q > p)] // K - 1) // 3 != i
                               for q in close):
                            continue
                    table[s[:p] + (code * K,) + s[p:]] = s
        elif kind == INTRODUCE_EDGE:
            u, v = node.edge
            pu, pv = order.index(u), order.index(v)
            table = {}
            for s in tables[node.children[0]]:
                cu, cv = s[pu] // K, s[pv] // K
                nu, nv = absorb(s[pu], cv), absorb(s[pv], cu)
                if nu < 0 or nv < 0:
                    continue
                t = list(s)
                t[pu], t[pv] = nu, nv
                table.setdefault(tuple(t), s)
        elif kind == FORGET:
            p = orders[node.children[0]].index(node.vertex)
            table = {}
            for s in tables[node.children[0]]:
                code, agg = divmod(s[p], K)
                if code and agg != (code - 1) % 3:
                    continue
                table.setdefault(s[:p] + s[p + 1:], s)
        else:  # JOIN
            left, right = (tables[c] for c in node.children)
            by_colors: dict[tuple, list] = {}
            for s in right:
                by_colors.setdefault(tuple(x // K for x in s), []).append(s)
            table = {}
            for a in left:
                for b in by_colors.get(tuple(x // K for x in a), ()):
                    merged = tuple(merge(x, y) for x, y in zip(a, b))
                    if -1 in merged:
                        continue
                    table.setdefault(merged, (a, b))
        if len(table) > state_budget:
            raise GuardExceeded(f"state budget of {state_budget} exceeded at node {idx}", "dp_tw")
        tables.append(table)
    if not tables[-1]:
        return None
    return _reconstruct(ntd, orders, tables, lc.graph.n, lambda val: val // K)


# ---------------------------------------------------------------------------
# orchestration


def _expanded_bag_size(g, td, r) -> int:
    return expand_bags(g, td, locality(r)).width + 1


def _choose(g, td, r, method) -> str:
    if method != "auto":
        return method
    if r <= 3 and td.width <= AUTO_TW_WIDTH_LIMIT:
        return "dp_tw"
    if _expanded_bag_size(g, td, r) <= AUTO_BAG_LIMIT:
        return "dp_general"
    return "brute"


class _SubSolver:
    """Solves terminal-pair instances over one graph, sharing decompositions."""

    def __init__(self, g, r, method, td, node_budget, state_budget, local_guard, max_vertices):
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
        if td is not None:
            _require_valid(g, td)
        elif method in ("auto", "dp_general", "dp_tw"):
            td = min_fill_decomposition(g)
        self.method = _choose(g, td, r, method)
        if self.method == "dp_tw" and r > 3:
            raise ValueError("dp_tw needs r <= 3")
        self.td = td
        self.ntd = make_nice(td, g) if self.method == "dp_tw" else None
        self.plan = None
        self.node_budget = node_budget
        self.state_budget = state_budget
        self.local_guard = local_guard
        self.max_vertices = max_vertices

    def solve(self, sub: MMPInstance):
        """Witness paths for ``sub``, or None."""
        try:
            if self.method == "brute":
                return solve_mmp_brute(sub, self.node_budget, self.max_vertices).witness
            try:
                lc = encode_mmp(sub)
            except TerminalConflict:
                return None
            if self.method == "dp_tw":
                coloring = solve_dp_tw_only(lc, self.ntd, self.state_budget)
            elif self.method == "dp_general":
                if self.plan is None:
                    self.plan = GeneralPlan.build(lc, self.td)
                coloring = solve_dp_general(lc, self.td, self.state_budget, self.plan)
            else:
                coloring = solve_local_brute(lc, self.local_guard)
        except GuardExceeded as exc:
            if exc.method is None:
                exc.method = self.method
            raise
        return None if coloring is None else decode_paths(sub, coloring)


def solve_mmp(
    inst: MMPInstance,
    method: str = "auto",
    td: TreeDecomposition | None = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
    state_budget: int = DEFAULT_STATE_BUDGET,
    local_guard: int = DEFAULT_LOCAL_GUARD,
    max_vertices: int | None = DEFAULT_MAX_VERTICES,
) -> SolveOutcome:
    """Decide a terminal-pair instance with the chosen method (see :func:`solve_mm`)."""
    start = time.perf_counter()
    runner = _SubSolver(inst.graph, inst.r, method, td, node_budget, state_budget, local_guard, max_vertices)
    witness = runner.solve(inst)
    stats = {"method": runner.method, "elapsed": time.perf_counter() - start}
    if witness is None:
        return SolveOutcome(False, None, stats)
    bad = verify_mmp_solution(inst, witness)
    if bad is not None:
        raise RuntimeError(f"{runner.method} produced an invalid witness: {bad}")
    return SolveOutcome(True, tuple(witness), stats)


def solve_mm(
    inst: MMInstance,
    method: str = "auto",
    td: TreeDecomposition | None = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
    state_budget: int = DEFAULT_STATE_BUDGET,
    local_guard: int = DEFAULT_LOCAL_GUARD,
    max_vertices: int | None = DEFAULT_MAX_VERTICES,
) -> SolveOutcome:
    """Decide an MM instance with the chosen method.

    Every terminal choice is encoded and solved in turn; the first yes is
    decoded and verified. ``auto`` uses ``dp_tw`` for ``r <= 3`` when the
    decomposition width is at most ``AUTO_TW_WIDTH_LIMIT``, ``dp_general``
    when the expanded bags stay within ``AUTO_BAG_LIMIT`` vertices, and
    ``brute`` otherwise. Budgets apply per terminal choice.
    """
    start = time.perf_counter()
    runner = _SubSolver(inst.graph, inst.r, method, td, node_budget, state_budget, local_guard, max_vertices)
    subs = 0
    witness = None
    for sub in enumerate_terminal_choices(inst):
        subs += 1
        witness = runner.solve(sub)
        if witness is not None:
            break
    stats = {"method": runner.method, "subinstances": subs, "elapsed": time.perf_counter() - start}
    if witness is None:
        return SolveOutcome(False, None, stats)
    bad = verify_mm_solution(inst, witness)
    if bad is not None:
        raise RuntimeError(f"{runner.method} produced an invalid witness: {bad}")
    return SolveOutcome(True, tuple(witness), stats)

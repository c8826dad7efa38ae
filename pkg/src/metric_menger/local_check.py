"""Locally checkable colouring encoding of the terminal-pair problem.

Colours are ``None`` (uncoloured) or ``(i, j)``: vertex on path ``i``
with ``j`` path neighbours (0 for a single-vertex path, 1 for an end,
2 for an interior vertex). A colouring is valid when the check passes at
every vertex, and valid colourings correspond to solutions.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .graph import MMPInstance, closed_ball, verify_mmp_solution
from .solver import GuardExceeded

BOT = None
DEFAULT_LOCAL_GUARD = 10**7


class TerminalConflict(ValueError):
    """Some vertex is a terminal of two different path indices; the instance is a 'no'."""


def locality(r: int) -> int:
    """Ball radius of the check: ``floor(r/2)``, clamped to at least 1."""
    return max(1, r // 2)


def palette(k: int) -> list:
    return [BOT] + [(i, j) for i in range(1, k + 1) for j in (0, 1, 2)]


@dataclass(frozen=True)
class LocalCheckInstance:
    graph: object
    r: int
    k: int
    m_star: int
    allowed: tuple  # per vertex: frozenset of colours
    balls: tuple  # per vertex: sorted closed m_star-ball
    close_pairs: tuple  # per vertex: pairs (u, w), u < w, in the ball with dist(u, w) <= r - 1
    terminals: tuple = ()

    def to_json(self) -> str:
        """Debug dump; not a stable format."""
        def fmt(c):
            return "bot" if c is None else f"{c[0]},{c[1]}"

        return json.dumps(
            {
                "r": self.r,
                "k": self.k,
                "m_star": self.m_star,
                "allowed": {
                    str(v): sorted(fmt(c) for c in a) for v, a in enumerate(self.allowed)
                },
            },
            indent=1,
        )


def encode_mmp(inst: MMPInstance) -> LocalCheckInstance:
    g, k, r = inst.graph, inst.k, inst.r
    free = frozenset([BOT] + [(i, 2) for i in range(1, k + 1)])
    allowed: list = [free] * g.n
    owner: dict[int, int] = {}
    for i, (s, t) in enumerate(inst.terminals, 1):
        for v in {s, t}:
            if owner.get(v, i) != i:
                raise TerminalConflict(f"vertex {v} is a terminal of paths {owner[v]} and {i}")
            owner[v] = i
            allowed[v] = frozenset([(i, 0) if s == t else (i, 1)])
    m_star = locality(r)
    balls = []
    pairs = []
    for v in range(g.n):
        ball = tuple(sorted(closed_ball(g, v, m_star)))
        balls.append(ball)
        pairs.append(
            tuple(
                (u, w)
                for u, w in itertools.combinations(ball, 2)
                if g.bfs(u)[w] <= r - 1
            )
        )
    return LocalCheckInstance(g, r, k, m_star, tuple(allowed), tuple(balls), tuple(pairs), inst.terminals)


def _check(inst: LocalCheckInstance, v: int, c) -> bool:
    for u, w in inst.close_pairs[v]:
        cu, cw = c[u], c[w]
        if cu is not None and cw is not None and cu[0] != cw[0]:
            return False
    cv = c[v]
    if cv is not None:
        i, j = cv
        same = 0
        for w in inst.graph.adj[v]:
            cw = c[w]
            if cw is not None and cw[0] == i:
                same += 1
        if same != j:
            return False
    return True


def check(inst: LocalCheckInstance, v: int, c: Mapping) -> bool:
    """Evaluate the local condition at ``v`` given colours on its ball.

    ``c`` maps vertices to colours (a dict or a full per-vertex sequence)
    and must cover ``inst.balls[v]``.
    """
    for u in inst.balls[v]:
        try:
            cu = c[u]
        except (KeyError, IndexError):
            raise ValueError(f"colouring does not cover vertex {u} of the ball around {v}") from None
        if cu not in inst.allowed[u]:
            raise ValueError(f"colour {cu} is not allowed at vertex {u}")
    return _check(inst, v, c)


def is_valid_coloring(inst: LocalCheckInstance, c: Sequence) -> bool:
    return all(_check(inst, v, c) for v in range(inst.graph.n))


def solve_local_brute(inst: LocalCheckInstance, guard: int = DEFAULT_LOCAL_GUARD):
    """Exhaustive search over colourings; returns a list of colours or None.

    Vertices are coloured in id order and each vertex check is applied as
    soon as its whole ball is coloured, so dead prefixes are cut early.
    """
    n = inst.graph.n
    combos = 1
    for a in inst.allowed:
        combos *= len(a)
        if combos > guard:
            raise GuardExceeded(f"more than {guard} colourings to enumerate", "local_brute")
    ready: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        ready[max(inst.balls[v])].append(v)
    options = [sorted(a, key=lambda c: (-1, -1) if c is None else c) for a in inst.allowed]
    c: list = [None] * n

    def go(x):
        if x == n:
            return True
        for col in options[x]:
            c[x] = col
            if all(_check(inst, v, c) for v in ready[x]) and go(x + 1):
                return True
        c[x] = None
        return False

    return list(c) if go(0) else None


def canonical_coloring(inst: MMPInstance, paths: Sequence[Sequence[int]]) -> list:
    """Colouring induced by a solution: ends (i,1), lone vertex (i,0), interior (i,2)."""
    c: list = [None] * inst.graph.n
    for i, p in enumerate(paths, 1):
        for v in p:
            c[v] = (i, 2)
        if len(p) == 1:
            c[p[0]] = (i, 0)
        else:
            c[p[0]] = c[p[-1]] = (i, 1)
    return c


def decode_paths(inst: MMPInstance, c: Sequence) -> tuple:
    """Recover the solution paths from a valid colouring.

    Path ``i`` is the component of ``s_i`` among vertices coloured with
    index ``i``; any other components (cycles) are dropped.
    """
    g = inst.graph
    out = []
    for i, (s, t) in enumerate(inst.terminals, 1):
        def on(v):
            return c[v] is not None and c[v][0] == i

        if not on(s):
            raise ValueError(f"terminal {s} of path {i} is not coloured with index {i}")
        path = [s]
        prev = None
        while path[-1] != t:
            cur = path[-1]
            nxt = [w for w in g.adj[cur] if on(w) and w != prev]
            if len(nxt) != 1 or nxt[0] in path:
                raise ValueError(f"colour class {i} is not a path at vertex {cur}")
            prev = cur
            path.append(nxt[0])
        out.append(tuple(path))
    bad = verify_mmp_solution(inst, out)
    if bad is not None:
        raise ValueError(f"decoded paths fail verification: {bad}")
    return tuple(out)

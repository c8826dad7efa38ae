"""Text formats for instances and solutions.

Instance files (vertex ids 1-indexed on disk, 0-indexed in memory)::

    c comment
    p mm <n> <edges> <r> <k>
    e <u> <v>
    a <v>
    z <v>

The terminal-pair form uses the header ``p mmp <n> <edges> <r> <k>`` and
lines ``t <i> <s> <t>`` in place of ``a``/``z``. Solution files hold
``s yes`` or ``s no`` followed, for a yes, by one ``P <i> <v1> <v2> ...``
line per path.
"""

from __future__ import annotations

from typing import Sequence

from .cnf import ParseError
from .graph import Graph, MMInstance, MMPInstance

FORMAT_VERSION = "1"


def _ints(parts, line, lineno):
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise ParseError(f"malformed line {line!r}", lineno) from None


def parse_instance(text: str) -> MMInstance | MMPInstance:
    header = None
    edges = []
    A, Z = [], []
    terms: dict[int, tuple[int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "p":
            if header is not None:
                raise ParseError("second header line", lineno)
            if len(parts) != 6 or parts[1] not in ("mm", "mmp"):
                raise ParseError(f"malformed header {line!r}", lineno)
            n, m, r, k = _ints(parts[2:], line, lineno)
            if n < 0 or m < 0 or r < 1 or k < 1:
                raise ParseError(f"header values out of range in {line!r}", lineno)
            header = (parts[1], n, m, r, k)
            continue
        if header is None:
            raise ParseError("content before 'p' header", lineno)
        kind, n, _, _, k = header

        def vertex(x):
            if not 1 <= x <= n:
                raise ParseError(f"vertex {x} outside 1..{n}", lineno)
            return x - 1

        if tag == "e" and len(parts) == 3:
            u, v = _ints(parts[1:], line, lineno)
            edges.append((vertex(u), vertex(v)))
        elif tag in ("a", "z") and len(parts) == 2 and kind == "mm":
            (v,) = _ints(parts[1:], line, lineno)
            (A if tag == "a" else Z).append(vertex(v))
        elif tag == "t" and len(parts) == 4 and kind == "mmp":
            i, s, t = _ints(parts[1:], line, lineno)
            if not 1 <= i <= k or i in terms:
                raise ParseError(f"bad or duplicate terminal index {i}", lineno)
            terms[i] = (vertex(s), vertex(t))
        else:
            raise ParseError(f"unexpected line {line!r}", lineno)
    if header is None:
        raise ParseError("missing 'p' header")
    kind, n, m, r, k = header
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges, found {len(edges)}")
    try:
        g = Graph(n, edges)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    if kind == "mm":
        return MMInstance(g, frozenset(A), frozenset(Z), r, k)
    if sorted(terms) != list(range(1, k + 1)):
        raise ParseError(f"expected terminal pairs 1..{k}, got {sorted(terms)}")
    return MMPInstance(g, tuple(terms[i] for i in range(1, k + 1)), r)


def write_instance(inst: MMInstance | MMPInstance, comments: Sequence[str] = ()) -> str:
    g = inst.graph
    lines = [f"c {c}" for c in comments]
    kind = "mmp" if isinstance(inst, MMPInstance) else "mm"
    lines.append(f"p {kind} {g.n} {g.num_edges} {inst.r} {inst.k}")
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges()]
    if kind == "mm":
        lines += [f"a {v + 1}" for v in sorted(inst.A)]
        lines += [f"z {v + 1}" for v in sorted(inst.Z)]
    else:
        lines += [f"t {i} {s + 1} {t + 1}" for i, (s, t) in enumerate(inst.terminals, 1)]
    return "\n".join(lines) + "\n"


def parse_solution(text: str) -> tuple[bool, tuple | None]:
    """Returns ``(answer, paths)``; ``paths`` is None for a no.

    The writer always ends with a newline, so text whose last line is not
    newline-terminated is rejected as truncated.
    """
    if text and not text.endswith("\n"):
        raise ParseError("truncated file: last line is not newline-terminated", text.count("\n") + 1)
    answer = None
    paths: dict[int, tuple] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if answer is not None or len(parts) != 2 or parts[1] not in ("yes", "no"):
                raise ParseError(f"malformed status line {line!r}", lineno)
            answer = parts[1] == "yes"
        elif parts[0] == "P":
            if answer is not True:
                raise ParseError("path line without a preceding 's yes'", lineno)
            if len(parts) < 3:
                raise ParseError(f"path line without vertices {line!r}", lineno)
            i, *vs = _ints(parts[1:], line, lineno)
            if i != len(paths) + 1:
                raise ParseError(f"expected path {len(paths) + 1}, got {i}", lineno)
            if min(vs) < 1:
                raise ParseError("vertex ids are 1-indexed", lineno)
            paths[i] = tuple(v - 1 for v in vs)
        else:
            raise ParseError(f"unexpected line {line!r}", lineno)
    if answer is None:
        raise ParseError("missing 's' status line")
    if answer and not paths:
        raise ParseError("'s yes' without any path lines")
    return answer, (tuple(paths[i] for i in sorted(paths)) if answer else None)


def write_solution(answer: bool, paths: Sequence[Sequence[int]] | None = None) -> str:
    if not answer:
        return "s no\n"
    lines = ["s yes"]
    for i, p in enumerate(paths, 1):
        lines.append(" ".join(["P", str(i), *(str(v + 1) for v in p)]))
    return "\n".join(lines) + "\n"

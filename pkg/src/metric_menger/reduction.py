"""3SAT -> MM(r, k) gadget construction, padding, and witness translation.

The gadget graph has two halves. The *variable half* is a chain of
diamonds, one per variable, each made of two parallel routes: route
``(i, 0)`` carries one vertex per occurrence of the literal ``-x_i`` and
route ``(i, 1)`` one per occurrence of ``x_i``. The *clause half* is a
chain of clause gadgets with one vertex per literal slot. Every literal
occurrence joins its clause-half vertex to its variable-half vertex by an
exclusion path of ``r - 1`` edges. Each half has a tail of ``3m`` vertices
(``a_1..a_3m`` and ``b_1..b_3m``); ``a_q`` and ``b_q`` are tied to a middle
vertex ``c_q`` of the q-th exclusion path by dummy paths of ``r - 1`` edges.
The formula is satisfiable iff two paths from ``{a_1, b_1}`` to the two
far ends of the halves exist at pairwise distance ``>= r``.

The ``deg3`` variant (``r >= 4``) splits each variable-chain junction into
two vertices, routes the first two clause slots through two helper
vertices, and lets each pair of dummy paths share its last edge.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .cnf import CnfFormula, evaluate
from .graph import Graph, MMInstance

VARIANTS = ("deg4", "deg3")


class InvalidWitness(ValueError):
    """A path set that cannot come from a valid solution of the gadget instance."""


@dataclass(frozen=True)
class ExclusionPath:
    occurrence: tuple  # (clause j, slot l), both 1-based
    literal: int
    g1_end: int
    internal: tuple  # ordered from the variable half towards the clause half
    c: int
    g2_end: int

    @property
    def vertices(self) -> tuple:
        return (self.g1_end, *self.internal, self.g2_end)


@dataclass(frozen=True)
class DummyPaths:
    a_internal: tuple  # ordered from a_q towards c_q
    b_internal: tuple  # ordered from b_q towards c_q


@dataclass
class ReductionCertificate:
    """Role labels tying every gadget vertex back to the formula."""

    variant: str
    r: int
    k: int
    num_vars: int
    num_clauses: int
    clauses: tuple
    a_tail: tuple
    b_tail: tuple
    v_nodes: tuple  # deg4: v_0..v_n; deg3: ((w_1-, w_1+), ..., (w_n-, w_n+))
    variable_paths: dict  # (i, b) -> internal vertices from the left junction
    u_nodes: tuple
    u_prime_nodes: tuple
    literal_nodes: dict  # (j, l) -> vertex
    exclusion_paths: tuple
    dummy_paths: tuple
    clause_helpers: tuple = ()  # deg3 only: (h1, h2) per clause
    padding: tuple = ()  # (a, z) pairs added for k > 2
    num_vertices: int = 0

    @property
    def a1(self) -> int:
        return self.a_tail[0]

    @property
    def b1(self) -> int:
        return self.b_tail[0]

    @property
    def variable_end(self) -> int:
        return self.v_nodes[-1] if self.variant == "deg4" else self.v_nodes[-1][1]

    @property
    def clause_end(self) -> int:
        return self.u_prime_nodes[-1]

    def roles(self) -> dict[int, str]:
        """Map every vertex to one role label; raises if a vertex gets two."""
        out: dict[int, str] = {}

        def put(v, role):
            if v in out and out[v] != role:
                raise ValueError(f"vertex {v} has roles {out[v]!r} and {role!r}")
            out[v] = role

        for q, v in enumerate(self.a_tail, 1):
            put(v, f"a{q}")
        for q, v in enumerate(self.b_tail, 1):
            put(v, f"b{q}")
        if self.variant == "deg4":
            for i, v in enumerate(self.v_nodes):
                put(v, f"v{i}")
        else:
            for i, (lo, hi) in enumerate(self.v_nodes, 1):
                put(lo, f"w{i}-")
                put(hi, f"w{i}+")
        for (i, b), verts in self.variable_paths.items():
            for t, v in enumerate(verts):
                put(v, f"P[{i},{b}]#{t}")
        for j, v in enumerate(self.u_nodes, 1):
            put(v, f"u{j}")
        for j, v in enumerate(self.u_prime_nodes, 1):
            put(v, f"u{j}'")
        for (j, l), v in self.literal_nodes.items():
            put(v, f"L[{j},{l}]")
        for j, (h1, h2) in enumerate(self.clause_helpers, 1):
            put(h1, f"h{j}.1")
            put(h2, f"h{j}.2")
        for q, ex in enumerate(self.exclusion_paths, 1):
            for t, v in enumerate(ex.internal):
                put(v, f"c{q}" if v == ex.c else f"X{q}#{t}")
        for q, d in enumerate(self.dummy_paths, 1):
            shared = set(d.a_internal) & set(d.b_internal)
            for t, v in enumerate(d.a_internal):
                put(v, f"D{q}*" if v in shared else f"Da{q}#{t}")
            for t, v in enumerate(d.b_internal):
                put(v, f"D{q}*" if v in shared else f"Db{q}#{t}")
        for t, (a, z) in enumerate(self.padding, 1):
            put(a, f"pad-a{t}")
            put(z, f"pad-z{t}")
        return out

    def to_json(self) -> str:
        """JSON document; vertex ids are 1-indexed like the instance files."""

        def vs(xs):
            return [x + 1 for x in xs]

        doc = {
            "variant": self.variant,
            "r": self.r,
            "k": self.k,
            "num_vars": self.num_vars,
            "num_clauses": self.num_clauses,
            "num_vertices": self.num_vertices,
            "clauses": [list(c) for c in self.clauses],
            "a_tail": vs(self.a_tail),
            "b_tail": vs(self.b_tail),
            "v_nodes": [vs(x) if isinstance(x, tuple) else x + 1 for x in self.v_nodes],
            "variable_paths": [
                {"var": i, "polarity": b, "internal": vs(p)}
                for (i, b), p in sorted(self.variable_paths.items())
            ],
            "u_nodes": vs(self.u_nodes),
            "u_prime_nodes": vs(self.u_prime_nodes),
            "literal_nodes": [
                {"clause": j, "slot": l, "vertex": v + 1}
                for (j, l), v in sorted(self.literal_nodes.items())
            ],
            "clause_helpers": [vs(h) for h in self.clause_helpers],
            "exclusion_paths": [
                {
                    "clause": ex.occurrence[0],
                    "slot": ex.occurrence[1],
                    "literal": ex.literal,
                    "g1_end": ex.g1_end + 1,
                    "internal": vs(ex.internal),
                    "c": ex.c + 1,
                    "g2_end": ex.g2_end + 1,
                }
                for ex in self.exclusion_paths
            ],
            "dummy_paths": [
                {"a_internal": vs(d.a_internal), "b_internal": vs(d.b_internal)}
                for d in self.dummy_paths
            ],
            "padding": [vs(p) for p in self.padding],
        }
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "ReductionCertificate":
        def vs(xs):
            return tuple(x - 1 for x in xs)

        try:
            d = json.loads(text)
            return cls(
                variant=d["variant"],
                r=d["r"],
                k=d["k"],
                num_vars=d["num_vars"],
                num_clauses=d["num_clauses"],
                num_vertices=d.get("num_vertices", 0),
                clauses=tuple(tuple(c) for c in d["clauses"]),
                a_tail=vs(d["a_tail"]),
                b_tail=vs(d["b_tail"]),
                v_nodes=tuple(vs(x) if isinstance(x, list) else x - 1 for x in d["v_nodes"]),
                variable_paths={
                    (e["var"], e["polarity"]): vs(e["internal"]) for e in d["variable_paths"]
                },
                u_nodes=vs(d["u_nodes"]),
                u_prime_nodes=vs(d["u_prime_nodes"]),
                literal_nodes={(e["clause"], e["slot"]): e["vertex"] - 1 for e in d["literal_nodes"]},
                clause_helpers=tuple(vs(h) for h in d.get("clause_helpers", [])),
                exclusion_paths=tuple(
                    ExclusionPath(
                        (e["clause"], e["slot"]),
                        e["literal"],
                        e["g1_end"] - 1,
                        vs(e["internal"]),
                        e["c"] - 1,
                        e["g2_end"] - 1,
                    )
                    for e in d["exclusion_paths"]
                ),
                dummy_paths=tuple(
                    DummyPaths(vs(e["a_internal"]), vs(e["b_internal"]))
                    for e in d["dummy_paths"]
                ),
                padding=tuple(vs(p) for p in d.get("padding", [])),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed certificate: {exc}") from None


@dataclass
class _Builder:
    n: int = 0
    edges: list = field(default_factory=list)

    def new(self, count: int = 1) -> list[int]:
        out = list(range(self.n, self.n + count))
        self.n += count
        return out

    def chain(self, vertices: Sequence[int]) -> None:
        self.edges.extend(zip(vertices, vertices[1:]))


def build_reduction(phi: CnfFormula, r: int, k: int = 2, variant: str = "deg4"):
    """Build the MM(r, k) gadget instance for ``phi``.

    Returns ``(instance, certificate)``. Needs ``r >= 3`` (``r >= 4`` for
    ``deg3``), ``k >= 2`` and at least one clause.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    if r < 3:
        raise ValueError(f"the construction requires r >= 3, got r={r}")
    if variant == "deg3" and r < 4:
        raise ValueError(f"the degree-3 variant requires r >= 4, got r={r}")
    if k < 2:
        raise ValueError(f"the construction requires k >= 2, got k={k}")
    n, m = phi.num_vars, phi.num_clauses
    if m == 0:
        raise ValueError("the construction needs at least one clause")

    B = _Builder()
    deg3 = variant == "deg3"

    # variable half
    if deg3:
        junctions = [tuple(B.new(2)) for _ in range(n)]
        v_nodes = tuple(junctions)
        left = [lo for lo, _ in junctions]
        right = [hi for _, hi in junctions]
        for i in range(n - 1):
            B.edges.append((right[i], left[i + 1]))
    else:
        v_nodes = tuple(B.new(n + 1))
        left, right = list(v_nodes[:-1]), list(v_nodes[1:])
    variable_paths = {}
    occ_index = {}
    for i in range(1, n + 1):
        for b in (0, 1):
            occ = phi.occurrences(i, positive=bool(b))
            inner = tuple(B.new(max(len(occ), 1)))
            variable_paths[(i, b)] = inner
            B.chain([left[i - 1], *inner, right[i - 1]])
            for t, jl in enumerate(occ):
                occ_index[jl] = inner[t]
    a_tail = tuple(B.new(3 * m))
    B.chain([*a_tail, left[0]])

    # clause half
    u_nodes, u_prime, helpers = [], [], []
    literal_nodes = {}
    for j in range(1, m + 1):
        u, up = B.new(2)
        lits = B.new(3)
        u_nodes.append(u)
        u_prime.append(up)
        for l, x in enumerate(lits, 1):
            literal_nodes[(j, l)] = x
        if deg3:
            h1, h2 = B.new(2)
            helpers.append((h1, h2))
            l1, l2, l3 = lits
            B.edges += [(u, h1), (u, l3), (h1, l1), (h1, l2), (h2, l1), (h2, l2), (h2, up), (l3, up)]
        else:
            for x in lits:
                B.edges += [(u, x), (x, up)]
    for j in range(m - 1):
        B.edges.append((u_prime[j], u_nodes[j + 1]))
    b_tail = tuple(B.new(3 * m))
    B.chain([*b_tail, u_nodes[0]])

    # exclusion paths, one per literal occurrence in (clause, slot) order
    c_offset = (r - 1 + 1) // 2  # ceil((r-1)/2) edges from the variable half
    exclusion = []
    for j in range(1, m + 1):
        for l in range(1, 4):
            inner = tuple(B.new(r - 2))
            g1, g2 = occ_index[(j, l)], literal_nodes[(j, l)]
            B.chain([g1, *inner, g2])
            exclusion.append(
                ExclusionPath((j, l), phi.clauses[j - 1][l - 1], g1, inner, inner[c_offset - 1], g2)
            )

    # dummy paths
    dummies = []
    for q, ex in enumerate(exclusion):
        a, b = a_tail[q], b_tail[q]
        if deg3:
            shared = B.new(1)
            ai = tuple(B.new(r - 3)) + tuple(shared)
            bi = tuple(B.new(r - 3)) + tuple(shared)
            B.chain([a, *ai])
            B.chain([b, *bi, ex.c])
        else:
            ai, bi = tuple(B.new(r - 2)), tuple(B.new(r - 2))
            B.chain([a, *ai, ex.c])
            B.chain([b, *bi, ex.c])
        dummies.append(DummyPaths(ai, bi))

    g = Graph(B.n, B.edges)
    cert = ReductionCertificate(
        variant=variant,
        r=r,
        k=2,
        num_vars=n,
        num_clauses=m,
        clauses=phi.clauses,
        a_tail=a_tail,
        b_tail=b_tail,
        v_nodes=v_nodes,
        variable_paths=variable_paths,
        u_nodes=tuple(u_nodes),
        u_prime_nodes=tuple(u_prime),
        literal_nodes=literal_nodes,
        exclusion_paths=tuple(exclusion),
        dummy_paths=tuple(dummies),
        clause_helpers=tuple(helpers),
        num_vertices=g.n,
    )
    inst = MMInstance(g, {cert.a1, cert.b1}, {cert.variable_end, cert.clause_end}, r, 2)
    if k > 2:
        inst = pad_to_k(inst, k)
        cert.k = k
        cert.padding = tuple((v, v + 1) for v in range(g.n, inst.graph.n, 2))
        cert.num_vertices = inst.graph.n
    return inst, cert


def pad_to_k(inst: MMInstance, k_target: int) -> MMInstance:
    """Lift an MM(r, 2) instance to MM(r, k_target) by adding isolated edges.

    Fresh pair ``t`` uses vertices ``n + 2t`` (joined to A) and ``n + 2t + 1``
    (joined to Z).
    """
    if inst.k != 2:
        raise ValueError(f"padding expects an instance with k = 2, got k = {inst.k}")
    if k_target < 2:
        raise ValueError(f"k_target must be at least 2, got {k_target}")
    if k_target == 2:
        return inst
    g = inst.graph
    extra = k_target - 2
    fresh = [(g.n + 2 * t, g.n + 2 * t + 1) for t in range(extra)]
    graph = Graph(g.n + 2 * extra, g.edges() + fresh)
    return MMInstance(
        graph,
        inst.A | {a for a, _ in fresh},
        inst.Z | {z for _, z in fresh},
        inst.r,
        k_target,
    )


def extract_assignment(cert: ReductionCertificate, sol: Sequence[Sequence[int]]) -> dict[int, int]:
    """Read the variable assignment off the path that starts at ``a_1``.

    ``x_i = 1`` iff that path runs through route ``(i, 0)``.
    """
    anchored = [p for p in sol if len(p) and p[0] == cert.a1]
    if len(anchored) != 1:
        raise InvalidWitness(f"expected exactly one path starting at a_1={cert.a1}, found {len(anchored)}")
    on_path = set(anchored[0])
    out = {}
    for i in range(1, cert.num_vars + 1):
        takes = [all(v in on_path for v in cert.variable_paths[(i, b)]) for b in (0, 1)]
        if takes[0] == takes[1]:
            which = "both" if takes[0] else "neither"
            raise InvalidWitness(f"path from a_1 traverses {which} of the routes for x_{i}")
        out[i] = 1 if takes[0] else 0
    return out


def build_forward_witness(cert: ReductionCertificate, f: Mapping[int, int]) -> tuple:
    """Solution paths for the gadget instance from a satisfying assignment."""
    phi = CnfFormula(cert.num_vars, cert.clauses)
    if not evaluate(phi, f):
        raise ValueError("assignment does not satisfy the formula")
    P = list(cert.a_tail)
    for i in range(1, cert.num_vars + 1):
        route = cert.variable_paths[(i, 0 if f[i] else 1)]
        if cert.variant == "deg4":
            P.append(cert.v_nodes[i - 1])
            P.extend(route)
        else:
            lo, hi = cert.v_nodes[i - 1]
            P += [lo, *route, hi]
    if cert.variant == "deg4":
        P.append(cert.v_nodes[-1])

    Q = list(cert.b_tail)
    for j, clause in enumerate(cert.clauses, 1):
        slot = next(l for l, x in enumerate(clause, 1) if bool(f[abs(x)]) == (x > 0))
        u, up, lit = cert.u_nodes[j - 1], cert.u_prime_nodes[j - 1], cert.literal_nodes[(j, slot)]
        if cert.variant == "deg3" and slot < 3:
            h1, h2 = cert.clause_helpers[j - 1]
            Q += [u, h1, lit, h2, up]
        else:
            Q += [u, lit, up]
    return (tuple(P), tuple(Q), *(tuple(p) for p in cert.padding))

"""Walk a small 3-CNF formula through the gadget reduction and back."""

from metric_menger import (
    build_forward_witness,
    build_reduction,
    evaluate,
    extract_assignment,
    max_degree,
    parse_dimacs,
    sat_brute_force,
    solve_mm,
    verify_mm_solution,
)

text = """c four variables, three clauses
p cnf 4 3
1 -2 3 0
-1 -2 4 0
2 -3 -4 0
"""
phi = parse_dimacs(text)
print("formula:", phi.clauses)
print("satisfiable:", sat_brute_force(phi))

# the gadget graph at r = 3, two paths
inst, cert = build_reduction(phi, 3, 2)
print(f"\ngadget: {inst.graph.n} vertices, {inst.graph.num_edges} edges, max degree {max_degree(inst.graph)}")
print("A =", sorted(inst.A), " Z =", sorted(inst.Z))

# a satisfying assignment gives two far-apart paths directly
f = sat_brute_force(phi)
P, Q = build_forward_witness(cert, f)
print("\nforward witness lengths:", len(P) - 1, len(Q) - 1)
print("verifies:", verify_mm_solution(inst, (P, Q)) is None)

# and the solver's own answer decodes to an assignment
out = solve_mm(inst)
print("\nsolver:", out.stats["method"], "->", "yes" if out.answer else "no", f"({out.stats['elapsed']:.2f}s)")
g = extract_assignment(cert, out.witness)
print("extracted:", g, "satisfies:", evaluate(phi, g))

# deg3 variant needs r >= 4; larger graph, degree three
inst3, _ = build_reduction(phi, 4, 2, "deg3")
print(f"\ndeg3 at r=4: {inst3.graph.n} vertices, max degree {max_degree(inst3.graph)}")

# an unsatisfiable formula: x and not x
bad = parse_dimacs("p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n")
inst_bad, _ = build_reduction(bad, 3, 2)
print("\ncontradiction:", "yes" if solve_mm(inst_bad, "brute").answer else "no")

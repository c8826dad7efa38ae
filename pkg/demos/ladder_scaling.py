"""Run time of the treewidth DP on ladders of growing length."""

import time

from metric_menger import GuardExceeded, solve_mm
from metric_menger.generators import ladder_decomposition, ladder_instance

print(f"{'length':>6} {'vertices':>8} {'dp_tw s':>9} {'brute':>8}")
prev = None
for length in (10, 20, 40, 80, 160):
    inst = ladder_instance(length, 3)
    td = ladder_decomposition(length)
    t0 = time.perf_counter()
    out = solve_mm(inst, "dp_tw", td=td)
    dt = time.perf_counter() - t0
    try:
        b = solve_mm(inst, "brute", node_budget=50_000, max_vertices=None).answer
        brute = "yes" if b else "no"
    except GuardExceeded:
        brute = "budget"
    ratio = "" if prev is None else f"  x{dt / prev:.1f}"
    print(f"{length:>6} {inst.graph.n:>8} {dt:>9.4f} {brute:>8}{ratio}")
    prev = dt
    assert out.answer

# width stays 2, so doubling the length should roughly double the time

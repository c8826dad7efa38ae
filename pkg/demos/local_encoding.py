"""The colouring view of the terminal-pair problem on a tiny graph."""

from metric_menger import (
    Graph,
    MMPInstance,
    decode_paths,
    encode_mmp,
    min_fill_decomposition,
    solve_dp_general,
    solve_local_brute,
)
from metric_menger.local_check import palette

# an 8-cycle, two pairs on opposite sides
g = Graph(8, [(i, (i + 1) % 8) for i in range(8)])
for r in (2, 3):
    inst = MMPInstance(g, ((0, 2), (4, 6)), r)
    lc = encode_mmp(inst)
    print(f"r={r}: ball radius {lc.m_star}, palette {palette(2)}")
    print("  allowed at 0:", sorted(lc.allowed[0], key=str), " at 1:", sorted(lc.allowed[1], key=str))
    c = solve_dp_general(lc, min_fill_decomposition(g))
    print("  dp colouring:", c)
    print("  brute agrees:", (c is None) == (solve_local_brute(lc) is None))
    if c is not None:
        print("  paths:", decode_paths(inst, c))

"""Exhaustive witness search for small n, one group class at a time."""

import time

from leekit.abelian import abelian_groups_of_order
from leekit.search import SearchOptions, SearchTask, search_witness

for n in range(3, 8):
    v = 2 * n * n + 1
    for G in abelian_groups_of_order(v):
        t0 = time.perf_counter()
        out = search_witness(SearchTask(n, G, SearchOptions()))
        dt = time.perf_counter() - t0
        print(f"n={n} G={list(G.invariant_factors)}: {out.status} after {out.nodes_explored} nodes ({dt:.2f}s)")
        if out.witness is not None:
            print("   T =", sorted(t.residues[0] for t in out.witness.T))

# a budget stops a long class and hands back a token to pick up later
task = SearchTask(9, abelian_groups_of_order(163)[0], SearchOptions(time_budget=1.0))
out = search_witness(task)
print("n=9 with 1s budget:", out.status, out.nodes_explored, "nodes so far")

"""
Splitting a typed multigraph almost evenly
==========================================

Every half-edge gets a color so that each node sees about as much red as
blue: within one of half its degree either way. C edges carry one color on
both halves, O edges carry one of each.
"""

import numpy as np

from degsplit import balanced_split, check_eq1, check_types, gen_random_max_degree, reduce_degree

g = gen_random_max_degree(300, 16, seed=4, typed=True)
print(f"{g.n} nodes, {g.m} edges, max degree {g.max_degree}")

# The degree goes down level by level: each halving step pairs up edges at
# every node into virtual edges, so the next graph has roughly half the degree.
red = reduce_degree(g)
print("max degree per level:", red.max_degrees)

lab, ledger = balanced_split(g)
print("types ok:", bool(check_types(g, lab)), " eq1 ok:", bool(check_eq1(g, lab)))

# red minus blue at every node
diff = np.zeros(g.n, dtype=int)
for e, (u, v, _) in enumerate(g.edges):
    a, b = lab.halves[e]
    diff[u] += 1 if a == "R" else -1
    diff[v] += 1 if b == "R" else -1
values, counts = np.unique(diff, return_counts=True)
print("discrepancy histogram:", dict(zip(values.tolist(), counts.tolist())))

# The ledger lists which oracle was called where, and at what multiplicity.
for entry in ledger:
    print(f"  {entry.phase:<22} {entry.unit:<5} overhead={entry.overhead:<4} param={entry.param}")

"""
From exact splits to arbitrary red degrees
==========================================

An exact split gives every node ``floor(d/2)`` or ``floor(d/2) + 1`` red edges.
Repeating it on the red subgraph halves the red degree again, and with a
color swap in between any target ``y`` in ``0..delta-1`` can be reached.
"""

from collections import Counter

from degsplit import check_pi, exact_split, gen_random_regular, pi_plan, solve_pi

g = gen_random_regular(60, 7, seed=1)


def red_degrees(lab):
    d = [0] * g.n
    for e, (u, v, _) in enumerate(g.edges):
        if lab.edge_color(e) == "R":
            d[u] += 1
            d[v] += 1
    return d


lab, _ = exact_split(g, "round_down")
print("exact split, red degrees:", Counter(red_degrees(lab)))
lab, _ = exact_split(g, "round_up")
print("rounded up, red degrees: ", Counter(red_degrees(lab)))

# Each target y has a short plan: a base problem, then halving steps.
for y in range(7):
    plan = pi_plan(7, y) if y < 6 else None
    steps = " -> ".join(f"{s.kind}({s.y})" for s in plan.steps) if plan else "swap of y=0"
    print(f"y={y}: {steps}")

for y in range(7):
    lab, _, plan = solve_pi(g, y)
    print(f"y={y}: red degrees {sorted(set(red_degrees(lab)))}, valid={bool(check_pi(g, 7, y, lab))}")

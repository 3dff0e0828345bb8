"""
Checking solvers against exhaustive search
==========================================

On graphs with at most 24 free choices every labeling can be enumerated.
That gives an answer to "is this satisfiable at all" that shares nothing with
the solvers.
"""

from degsplit import brute_force_labeling, brute_force_orientation, exact_split, gen_structured, check_eq2

tri = gen_structured("cycle", 3)
res = brute_force_labeling(tri, "eq2_down", count=True)
print("triangle, exact split: satisfiable", res.sat, "with", res.count, "of 8 colorings")
lab, _ = exact_split(tri)
print("solver output passes:", bool(check_eq2(tri, lab)))

k4 = gen_structured("complete", 4)
for y in range(3):
    print(f"K4, y={y}:", brute_force_labeling(k4, "pi", y=y).sat)

# K5 would need every node at outdegree 0 or 4, but at most one node can have each.
print("K5, out<=0 or in<=0:", brute_force_orientation(gen_structured("complete", 5), 0, 0, 0).sat)
print("C4, out<=1 or in<=1:", brute_force_orientation(gen_structured("cycle", 4), 0.5, 0.5, 0).sat)

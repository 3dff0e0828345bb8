from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from degsplit.graph import B, O, R, Labeling, RangeError, build_graph, gen_random_max_degree, gen_random_regular, gen_structured
from degsplit.pi import (
    BASE_CEIL_HALF_MINUS1,
    BASE_FLOOR_HALF,
    BASE_ZERO,
    FROM_2Y,
    FROM_2Y_MINUS_1,
    FROM_2Y_PLUS_1,
    InvalidInput,
    pi_base,
    pi_halve_from_2y,
    pi_halve_from_odd,
    pi_normalize,
    pi_plan,
    pi_swap,
    pi_table,
    pi_targets,
    solve_pi,
)
from degsplit.splitting import EdgeTypeError
from degsplit.verify import check_ledger, check_pi


def red_degrees(g, lab):
    d = [0] * g.n
    for e, (u, v, _) in enumerate(g.edges):
        d[u] += lab.halves[e][0] == R
        d[v] += lab.halves[e][1] == R
    return d


def test_targets_max_degree():
    assert pi_targets(4, 1, 4).allowed == {1, 2}


def test_targets_degree3():
    t = pi_targets(4, 1, 3)
    assert t.x_tilde == Fraction(9, 8) and t.alpha == 1 and t.beta == Fraction(1, 8)
    assert t.tau == Fraction(3, 8) and t.x_choices == (1,)
    assert t.allowed == {0, 1, 2}


def test_targets_degree2_boundary():
    t = pi_targets(4, 1, 2)
    assert t.x_tilde == Fraction(3, 4) and t.beta == 1 - t.tau
    assert t.x_choices == (1,) and t.allowed == {0, 1, 2}


def test_targets_two_choices():
    # delta 8, y 2, d 4: x~ = 5/4, beta 1/4 strictly between tau 1/4? no: equal, so unique
    assert pi_targets(8, 2, 4).x_choices == (1,)
    # delta 8, y 3, d 3: x~ = 21/16, beta 5/16 in (3/16, 13/16)
    assert pi_targets(8, 3, 3).x_choices == (1, 2)


def test_targets_range():
    with pytest.raises(RangeError):
        pi_targets(1, 0, 1)
    with pytest.raises(RangeError):
        pi_targets(4, 4, 2)
    with pytest.raises(RangeError):
        pi_targets(4, 1, 5)


@given(st.integers(2, 40).flatmap(lambda D: st.tuples(st.just(D), st.integers(0, D - 1), st.integers(1, D))))
def test_targets_swap_symmetry(args):
    delta, y, d = args
    mirrored = {d - a for a in pi_targets(delta, delta - 1 - y, d).allowed}
    assert pi_targets(delta, y, d).allowed == mirrored


def test_table():
    table = pi_table(5, 2)
    assert set(table.per_degree) == {1, 2, 3, 4, 5} and table.allowed(5) == {2, 3}


def test_normalize():
    assert pi_normalize(7, 6) == 2
    assert all(pi_normalize(d - 1, d) == 0 for d in range(2, 20))
    assert pi_normalize(-1, 5) == 3


def test_swap_involution():
    lab = Labeling.from_edge_colors([R, B, B])
    assert pi_swap(pi_swap(lab)) == lab
    assert pi_swap(lab).halves == [[B, B], [R, R], [R, R]]


def test_swap_all_blue():
    g = gen_structured("complete", 4)
    blue = Labeling.from_edge_colors([B] * 6)
    assert check_pi(g, 3, 0, blue)
    assert check_pi(g, 3, 2, pi_swap(blue))


def test_swap_k4_matching():
    g = gen_structured("complete", 4)
    # edges (0,1) and (2,3) form a perfect matching
    colors = [R if (u, v) in ((0, 1), (2, 3)) else B for u, v, _ in g.edges]
    lab = Labeling.from_edge_colors(colors)
    assert check_pi(g, 3, 1, lab) and check_pi(g, 3, 1, pi_swap(lab))


def test_base_zero():
    g = gen_random_regular(30, 5, 2)
    lab = pi_base(g, "zero")
    assert all(h == [B, B] for h in lab.halves) and check_pi(g, 5, 0, lab)


def test_base_floor_half_c4():
    g = gen_structured("cycle", 4)
    lab = pi_base(g, "floor_half")
    assert all(r in (1, 2) for r in red_degrees(g, lab))
    assert check_pi(g, 2, 1, lab)


def test_base_ceil_half_minus1_k4():
    g = gen_structured("complete", 4)
    lab = pi_base(g, "ceil_half_minus1")
    assert check_pi(g, 3, 1, lab)


@pytest.mark.parametrize("delta", range(2, 10))
def test_bases_random(delta):
    for seed in range(4):
        g = gen_random_max_degree(40, delta, seed)
        d = max(g.max_degree, 2)
        assert check_pi(g, d, 0, pi_base(g, BASE_ZERO, d))
        assert check_pi(g, d, d // 2, pi_base(g, BASE_FLOOR_HALF, d))
        assert check_pi(g, d, (d + 1) // 2 - 1, pi_base(g, BASE_CEIL_HALF_MINUS1, d))


def test_halve_from_zero():
    g = gen_random_regular(20, 4, 1)
    lab = pi_halve_from_2y(g, pi_base(g, "zero"), 0)
    assert all(h == [B, B] for h in lab.halves)


def test_halve_from_2y_delta5():
    for seed in range(5):
        g = gen_random_regular(40, 5, seed)
        src, _, _ = solve_pi(g, 2)
        out = pi_halve_from_2y(g, src, 1)
        assert check_pi(g, 5, 1, out)
        assert all(r in (1, 2) for r in red_degrees(g, out))


def test_halve_from_2y_swap_path():
    # delta 6, y 4: 2y = 8 reduces to 3 and 4 > (6-2)/2 takes the swapped route
    for seed in range(5):
        g = gen_random_regular(40, 6, seed)
        src, _, _ = solve_pi(g, 3)
        assert check_pi(g, 6, 4, pi_halve_from_2y(g, src, 4))


def test_halve_from_odd_low():
    for seed in range(5):
        g = gen_random_regular(40, 5, seed)
        src, _, _ = solve_pi(g, 3)
        assert check_pi(g, 5, 1, pi_halve_from_odd(g, src, 1))


def test_halve_from_odd_high():
    # delta 6, y 4 from 2y - 1 = 7, which reduces to 2
    for seed in range(5):
        g = gen_random_regular(40, 6, seed)
        src, _, _ = solve_pi(g, 2)
        assert check_pi(g, 6, 4, pi_halve_from_odd(g, src, 4))


def test_halve_from_odd_delta4():
    for seed in range(5):
        g = gen_random_regular(40, 4, seed)
        src, _, _ = solve_pi(g, 1)
        out = pi_halve_from_odd(g, src, 0)
        assert all(r in (0, 1) for r in red_degrees(g, out))


def test_halve_rejects_invalid_input():
    g = gen_random_regular(20, 5, 0)
    blue = Labeling.from_edge_colors([B] * g.m)
    with pytest.raises(InvalidInput):
        pi_halve_from_2y(g, blue, 1)  # needs Pi(2)
    with pytest.raises(InvalidInput):
        pi_halve_from_odd(g, blue, 1)  # needs Pi(3)


def test_halve_from_odd_gap():
    g = gen_random_regular(20, 6, 0)
    with pytest.raises(RangeError):
        pi_halve_from_odd(g, Labeling.from_edge_colors([B] * g.m), 2, check=False)


def test_plan_examples():
    plan = pi_plan(5, 2)
    assert plan.kinds() == [BASE_FLOOR_HALF] and plan.steps[0].y == 2

    plan = pi_plan(5, 1)
    assert plan.kinds() == [BASE_FLOOR_HALF, FROM_2Y]
    assert [s.y for s in plan.steps] == [2, 1]

    plan = pi_plan(6, 4)
    assert plan.kinds() == [BASE_CEIL_HALF_MINUS1, FROM_2Y_MINUS_1]
    assert [s.raw for s in plan.steps] == [7, 4] and plan.steps[0].y == 2


def test_plan_delta2():
    assert pi_plan(2, 0).kinds() == [BASE_ZERO]


def test_plan_range():
    with pytest.raises(RangeError):
        pi_plan(5, 4)
    with pytest.raises(RangeError):
        pi_plan(1, 0)


def _ceil_log2(x):
    return (x - 1).bit_length()


def test_plan_length_exhaustive():
    for delta in range(2, 65):
        for y in range(delta - 1):
            plan = pi_plan(delta, y)
            assert len(plan) <= _ceil_log2(delta) + 2
            assert plan.steps[-1].y == y
            for prev, step in zip(plan.steps, plan.steps[1:]):
                if step.kind == FROM_2Y:
                    assert prev.raw == 2 * step.raw
                elif step.kind == FROM_2Y_PLUS_1:
                    assert prev.raw == 2 * step.raw + 1
                else:
                    assert step.kind == FROM_2Y_MINUS_1 and prev.raw == 2 * step.raw - 1


@given(st.integers(3, 9), st.data())
def test_chain_is_metamorphic(delta, data):
    """Every intermediate labeling of a plan solves its own step's problem."""
    y = data.draw(st.integers(0, delta - 2))
    seed = data.draw(st.integers(0, 1000))
    g = gen_random_max_degree(30, delta, seed)
    plan = pi_plan(delta, y)
    lab = None
    for step in plan.steps:
        if step.kind.startswith("base"):
            lab = pi_base(g, step.kind, delta)
        elif step.kind == FROM_2Y:
            lab = pi_halve_from_2y(g, lab, step.y, delta)
        else:
            lab = pi_halve_from_odd(g, lab, step.y, delta)
        assert check_pi(g, delta, step.y, lab)


def test_solve_zero_all_blue():
    g = gen_random_max_degree(30, 6, 1)
    lab, _, plan = solve_pi(g, 0)
    assert all(h == [B, B] for h in lab.halves) and plan.kinds() == [BASE_ZERO]


def test_solve_k4():
    g = gen_structured("complete", 4)
    lab, _, _ = solve_pi(g, 1)
    assert all(r in (1, 2) for r in red_degrees(g, lab))


def test_solve_random_6_regular():
    g = gen_random_regular(50, 6, 11)
    lab, ledger, plan = solve_pi(g, 4)
    assert check_pi(g, 6, 4, lab)
    assert check_ledger(ledger, 6, "solve_pi")


def test_solve_top_value_is_all_red_on_regular():
    g = gen_random_regular(30, 5, 3)
    lab, _, plan = solve_pi(g, 4)
    assert all(h == [R, R] for h in lab.halves) and plan.kinds()[-1] == "swap"
    assert check_pi(g, 5, 4, lab)


def test_solve_explicit_delta_above_max_degree():
    g = gen_structured("cycle", 6)
    lab, _, _ = solve_pi(g, 2, delta=4)
    assert check_pi(g, 4, 2, lab)


def test_solve_rejects():
    with pytest.raises(EdgeTypeError):
        solve_pi(build_graph(2, [(0, 1, O)]), 0)
    with pytest.raises(RangeError):
        solve_pi(gen_structured("complete", 5), 4, delta=3)
    with pytest.raises(RangeError):
        solve_pi(gen_structured("cycle", 4), 2)

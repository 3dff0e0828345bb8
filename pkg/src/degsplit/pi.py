"""Arbitrary red-blue splittings ``Pi(y)``.

Nodes of maximum degree ``delta`` need ``d_R`` in ``{y, y+1}``; a node of
degree ``d < delta`` needs ``d_R`` within one of some ``x_d`` that tracks
``(d / delta) * (y + 1/2)``. :func:`solve_pi` gets there from one of three easy
base problems through a chain of halving steps, each of which is a single
:func:`~degsplit.splitting.exact_split` on the current red subgraph.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph import B, R, Labeling, RangeError, TypedMultiGraph
from .splitting import ROUND_DOWN, ROUND_UP, EdgeTypeError, exact_split
from .subroutines import CostLedger

BASE_ZERO = "base_zero"
BASE_FLOOR_HALF = "base_floor_half"
BASE_CEIL_HALF_MINUS1 = "base_ceil_half_minus1"
FROM_2Y = "from_2y"
FROM_2Y_PLUS_1 = "from_2y_plus_1"
FROM_2Y_MINUS_1 = "from_2y_minus_1"
SWAP = "swap"
BASE_KINDS = (BASE_ZERO, BASE_FLOOR_HALF, BASE_CEIL_HALF_MINUS1)


class InvalidInput(ValueError):
    """The labeling handed to a halving step does not solve its source problem."""


@dataclass(frozen=True)
class DegreeTarget:
    d: int
    tau: Fraction
    x_tilde: Fraction
    alpha: int
    beta: Fraction
    x_choices: tuple[int, ...]
    allowed: frozenset[int]


@dataclass(frozen=True)
class PiTargets:
    delta: int
    y: int
    per_degree: dict[int, DegreeTarget]

    def allowed(self, d: int) -> frozenset[int]:
        return self.per_degree[d].allowed


def _check_range(delta: int, y: int) -> None:
    if delta < 2:
        raise RangeError(f"delta must be at least 2, got {delta}")
    if not 0 <= y <= delta - 1:
        raise RangeError(f"y must lie in 0..{delta - 1}, got {y}")


def pi_targets(delta: int, y: int, d: int) -> DegreeTarget:
    """Allowed red degrees of a degree-``d`` node under ``Pi(y)``, with the derived quantities."""
    _check_range(delta, y)
    if not 1 <= d <= delta:
        raise RangeError(f"degree must lie in 1..{delta}, got {d}")
    tau = Fraction(d, 2 * delta)
    x_tilde = Fraction(d, delta) * (y + Fraction(1, 2))
    alpha = x_tilde.numerator // x_tilde.denominator
    beta = x_tilde - alpha
    if d == delta:
        return DegreeTarget(d, tau, x_tilde, alpha, beta, (), frozenset({y, y + 1}) & frozenset(range(d + 1)))
    if beta <= tau:
        choices = (alpha,)
    elif beta >= 1 - tau:
        choices = (alpha + 1,)
    else:
        choices = (alpha, alpha + 1)
    allowed = frozenset(r for x in choices for r in (x - 1, x, x + 1) if 0 <= r <= d)
    return DegreeTarget(d, tau, x_tilde, alpha, beta, choices, allowed)


def pi_table(delta: int, y: int) -> PiTargets:
    return PiTargets(delta, y, {d: pi_targets(delta, y, d) for d in range(1, delta + 1)})


def pi_normalize(y: int, delta: int) -> int:
    """Representative of ``y`` modulo ``delta - 1`` in ``0..delta-2``."""
    if delta < 2:
        raise RangeError(f"delta must be at least 2, got {delta}")
    return y % (delta - 1)


def pi_swap(labeling: Labeling) -> Labeling:
    """Exchange R and B; turns a ``Pi(y)`` solution into a ``Pi(delta-1-y)`` solution."""
    return labeling.swapped()


def _require_all_c(g: TypedMultiGraph) -> None:
    if not g.all_c():
        raise EdgeTypeError("Pi(y) is an edge-coloring problem; all edges must be of type C")


def _resolve_delta(g: TypedMultiGraph, delta: int | None) -> int:
    if delta is None:
        delta = max(g.max_degree, 2)
    if delta < 2:
        raise RangeError(f"delta must be at least 2, got {delta}")
    if g.max_degree > delta:
        raise RangeError(f"graph has max degree {g.max_degree} > delta = {delta}")
    return delta


def pi_base(
    g: TypedMultiGraph, which: str, delta: int | None = None, ledger: CostLedger | None = None
) -> Labeling:
    """Solve one of the base problems ``Pi(0)``, ``Pi(floor(delta/2))``, ``Pi(ceil(delta/2)-1)``.

    ``which`` is ``"zero"``, ``"floor_half"`` or ``"ceil_half_minus1"`` (the
    ``base_`` prefix is accepted too).
    """
    _require_all_c(g)
    _resolve_delta(g, delta)
    which = which.removeprefix("base_")
    if which == "zero":
        return Labeling.from_edge_colors([B] * g.m)
    if which not in ("floor_half", "ceil_half_minus1"):
        raise ValueError(f"unknown base problem {which!r}")
    lab, _ = exact_split(g, ROUND_DOWN, ledger)
    return lab if which == "floor_half" else pi_swap(lab)


def _split_red(g: TypedMultiGraph, labeling: Labeling, mode: str, ledger: CostLedger | None) -> Labeling:
    red = [e for e in range(g.m) if labeling.edge_color(e) == R]
    sub_lab, _ = exact_split(g.subgraph(red), mode, ledger)
    colors = [B] * g.m
    for i, e in enumerate(red):
        if sub_lab.edge_color(i) == R:
            colors[e] = R
    return Labeling.from_edge_colors(colors)


def _precheck(g: TypedMultiGraph, delta: int, source: int, labeling: Labeling) -> None:
    from .verify import check_pi

    verdict = check_pi(g, delta, source, labeling)
    if not verdict.passed:
        raise InvalidInput(f"input does not solve Pi({source}): {verdict.violations[:3]}")


def pi_halve_from_2y(
    g: TypedMultiGraph,
    labeling: Labeling,
    y: int,
    delta: int | None = None,
    ledger: CostLedger | None = None,
    check: bool = True,
) -> Labeling:
    """Turn a solution of ``Pi(2y)`` into a solution of ``Pi(y)``, for ``0 <= y <= delta-2``."""
    _require_all_c(g)
    delta = _resolve_delta(g, delta)
    if not 0 <= y <= delta - 2:
        raise RangeError(f"y must lie in 0..{delta - 2}, got {y}")
    if check:
        _precheck(g, delta, pi_normalize(2 * y, delta), labeling)
    if 2 * y <= delta - 2:
        return _split_red(g, labeling, ROUND_DOWN, ledger)
    return pi_swap(_split_red(g, pi_swap(labeling), ROUND_DOWN, ledger))


def pi_halve_from_odd(
    g: TypedMultiGraph,
    labeling: Labeling,
    y: int,
    delta: int | None = None,
    ledger: CostLedger | None = None,
    check: bool = True,
) -> Labeling:
    """Turn a solution of ``Pi(2y+1)`` (small ``y``) or ``Pi(2y-1)`` (large ``y``) into one of ``Pi(y)``.

    Small means ``y <= (delta-3)/2`` and large means ``y >= (delta+1)/2``; the
    one or two values in between are base problems and are rejected.
    """
    _require_all_c(g)
    delta = _resolve_delta(g, delta)
    if not 0 <= y <= delta - 2:
        raise RangeError(f"y must lie in 0..{delta - 2}, got {y}")
    if 2 * y <= delta - 3:
        if check:
            _precheck(g, delta, pi_normalize(2 * y + 1, delta), labeling)
        return _split_red(g, labeling, ROUND_UP, ledger)
    if 2 * y >= delta + 1:
        if check:
            _precheck(g, delta, pi_normalize(2 * y - 1, delta), labeling)
        return pi_swap(_split_red(g, pi_swap(labeling), ROUND_UP, ledger))
    raise RangeError(f"no odd-source halving step reaches y = {y} for delta = {delta}")


@dataclass(frozen=True)
class PlanStep:
    y: int  # normalized target of this step
    kind: str
    raw: int  # un-normalized value from the interval doubling


@dataclass(frozen=True)
class PiPlan:
    delta: int
    target: int
    steps: tuple[PlanStep, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def kinds(self) -> list[str]:
        return [s.kind for s in self.steps]


def _base_kind(r: int, delta: int) -> str | None:
    if r == 0:
        return BASE_ZERO
    if r == delta // 2:
        return BASE_FLOOR_HALF
    if r == (delta + 1) // 2 - 1:
        return BASE_CEIL_HALF_MINUS1
    return None


def pi_plan(delta: int, y: int) -> PiPlan:
    """Chain of steps from a base problem to ``Pi(y)``, for ``0 <= y <= delta-2``.

    The interval ``[y, y]`` of raw targets doubles until some member reduces to
    a base problem; the chain then walks from that member back to ``y``.
    """
    if delta < 2:
        raise RangeError(f"delta must be at least 2, got {delta}")
    if not 0 <= y <= delta - 2:
        raise RangeError(f"y must lie in 0..{delta - 2}, got {y}")
    mod = delta - 1
    levels: list[tuple[int, int, str]] = []
    lo = hi = y
    while True:
        hits = [x for x in range(lo, hi + 1) if _base_kind(x % mod, delta)]
        if hits:
            break
        cases = {"low" if 2 * (x % mod) <= delta - 3 else "high" for x in range(lo, hi + 1)}
        assert len(cases) == 1 and all(
            2 * (x % mod) <= delta - 3 or 2 * (x % mod) >= delta + 1 for x in range(lo, hi + 1)
        ), (delta, y, lo, hi)
        case = cases.pop()
        levels.append((lo, hi, case))
        lo, hi = (2 * lo, 2 * hi + 1) if case == "low" else (2 * lo - 1, 2 * hi)

    x = hits[0]
    steps = [PlanStep(x % mod, _base_kind(x % mod, delta), x)]
    for plo, phi, case in reversed(levels):
        if case == "low":
            parent, kind = x // 2, FROM_2Y if x % 2 == 0 else FROM_2Y_PLUS_1
        else:
            parent, kind = (x + 1) // 2, FROM_2Y if x % 2 == 0 else FROM_2Y_MINUS_1
        assert plo <= parent <= phi
        steps.append(PlanStep(parent % mod, kind, parent))
        x = parent
    assert steps[-1].y == y
    return PiPlan(delta, y, tuple(steps))


def solve_pi(
    g: TypedMultiGraph, y: int, delta: int | None = None, ledger: CostLedger | None = None
) -> tuple[Labeling, CostLedger, PiPlan]:
    """Edge coloring solving ``Pi(y)`` for ``0 <= y <= delta-1``.

    ``delta`` defaults to the graph's maximum degree (at least 2). ``y = delta-1``
    (all red at maximum-degree nodes) is the color swap of ``Pi(0)``.
    """
    _require_all_c(g)
    delta = _resolve_delta(g, delta)
    _check_range(delta, y)
    ledger = ledger if ledger is not None else CostLedger()
    if y == delta - 1:
        base = pi_plan(delta, 0)
        plan = PiPlan(delta, y, base.steps + (PlanStep(y, SWAP, y),))
    else:
        plan = pi_plan(delta, y)

    lab: Labeling | None = None
    for j, step in enumerate(plan.steps):
        with ledger.phase(f"pi[{j}]"):
            if step.kind in BASE_KINDS:
                lab = pi_base(g, step.kind, delta, ledger)
            elif step.kind == FROM_2Y:
                lab = pi_halve_from_2y(g, lab, step.y, delta, ledger, check=False)
            elif step.kind == SWAP:
                lab = pi_swap(lab)
            else:
                lab = pi_halve_from_odd(g, lab, step.y, delta, ledger, check=False)
    return lab, ledger, plan

"""Validity checkers and exhaustive oracles.

Nothing here calls into the solvers: every predicate is re-derived from its
definition so that a solver bug cannot hide behind a shared helper.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .graph import B, C, R, Labeling, Orientation, RangeError, TypedMultiGraph

MAX_BRUTE_BITS = 24
_CHUNK = 1 << 16


class TooLarge(ValueError):
    """The exhaustive search space exceeds ``2 ** MAX_BRUTE_BITS``."""


@dataclass
class Verdict:
    """Outcome of a check. ``violations`` holds ``(id, observed, allowed)`` triples."""

    passed: bool
    violations: list[tuple] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    @classmethod
    def from_violations(cls, violations: list[tuple], **details) -> "Verdict":
        return cls(not violations, violations, details)


def _red_degrees(g: TypedMultiGraph, labeling: Labeling) -> list[int]:
    d_r = [0] * g.n
    for e, (u, v, _) in enumerate(g.edges):
        a, b = labeling.halves[e]
        d_r[u] += a == R
        d_r[v] += b == R
    return d_r


def _require_total(g: TypedMultiGraph, labeling: Labeling) -> list[tuple]:
    if len(labeling) != g.m:
        return [("labeling", len(labeling), f"{g.m} edges")]
    return [(e, tuple(h), "total") for e, h in enumerate(labeling.halves) if None in h or any(x not in (R, B) for x in h)]


def _edge_colors(g: TypedMultiGraph, labeling: Labeling) -> list[tuple]:
    """Violations for edges whose two halves differ (whole-edge colorings only)."""
    return [(e, tuple(h), "equal halves") for e, h in enumerate(labeling.halves) if h[0] != h[1]]


def check_types(g: TypedMultiGraph, labeling: Labeling) -> Verdict:
    """C edges carry one color on both halves, O edges carry one of each."""
    bad = _require_total(g, labeling)
    if bad:
        return Verdict.from_violations(bad)
    for e, (_, _, t) in enumerate(g.edges):
        a, b = labeling.halves[e]
        if (t == C) != (a == b):
            bad.append((e, (a, b), "equal halves" if t == C else "different halves"))
    return Verdict.from_violations(bad)


def check_eq1(g: TypedMultiGraph, labeling: Labeling) -> Verdict:
    """``d_R(v)`` and ``d_B(v)`` lie in ``[d(v)/2 - 1, d(v)/2 + 1]``."""
    bad = _require_total(g, labeling)
    if bad:
        return Verdict.from_violations(bad)
    for v, r in enumerate(_red_degrees(g, labeling)):
        d = g.degree(v)
        if abs(2 * r - d) > 2:
            bad.append((v, r, (d / 2 - 1, d / 2 + 1)))
    return Verdict.from_violations(bad)


def _eq2_sets(d: int, mode: str) -> frozenset[int]:
    down = frozenset({d // 2, d // 2 + 1}) & frozenset(range(d + 1))
    if mode == "round_down":
        return down
    if mode == "round_up":
        return frozenset(d - r for r in down)
    raise ValueError(f"unknown mode {mode!r}")


def check_eq2(g: TypedMultiGraph, labeling: Labeling, mode: str = "round_down") -> Verdict:
    """Exact splitting: ``d_R(v)`` in ``{floor(d/2), floor(d/2)+1}``, or the swapped sets for ``round_up``."""
    if not all(t == C for _, _, t in g.edges):
        raise TypeError("exact splitting is defined for all-C graphs only")
    bad = _require_total(g, labeling) or _edge_colors(g, labeling)
    if bad:
        return Verdict.from_violations(bad)
    for v, r in enumerate(_red_degrees(g, labeling)):
        allowed = _eq2_sets(g.degree(v), mode)
        if r not in allowed:
            bad.append((v, r, sorted(allowed)))
    return Verdict.from_violations(bad)


def check_lemma31(g: TypedMultiGraph, labeling: Labeling) -> Verdict:
    """Every node of degree at least 3 sees both colors."""
    bad = _require_total(g, labeling)
    if bad:
        return Verdict.from_violations(bad)
    for v, r in enumerate(_red_degrees(g, labeling)):
        d = g.degree(v)
        if d >= 3 and not 1 <= r <= d - 1:
            bad.append((v, r, (1, d - 1)))
    return Verdict.from_violations(bad)


def x_candidates(delta: int, y: int, d: int) -> tuple[int, ...]:
    """Admissible ``x_d`` for a degree ``d < delta``, in integer arithmetic.

    With ``x~ = d(2y+1) / (2 delta)``: the fractional part is ``rem / den`` and
    ``tau = d / den``.
    """
    num, den = d * (2 * y + 1), 2 * delta
    alpha, rem = divmod(num, den)
    if rem <= d:
        return (alpha,)
    if rem >= den - d:
        return (alpha + 1,)
    return (alpha, alpha + 1)


def pi_allowed(delta: int, y: int, d: int) -> frozenset[int]:
    if d == delta:
        return frozenset(r for r in (y, y + 1) if r <= d)
    return frozenset(r for x in x_candidates(delta, y, d) for r in (x - 1, x, x + 1) if 0 <= r <= d)


def _pi_range(g: TypedMultiGraph, delta: int, y: int) -> None:
    if delta < 2:
        raise RangeError(f"delta must be at least 2, got {delta}")
    if not 0 <= y <= delta - 1:
        raise RangeError(f"y must lie in 0..{delta - 1}, got {y}")
    if g.max_degree > delta:
        raise RangeError(f"graph has max degree {g.max_degree} > delta = {delta}")


def check_pi(g: TypedMultiGraph, delta: int, y: int, labeling: Labeling) -> Verdict:
    """``Pi(y)``: degree-``delta`` nodes have ``d_R`` in ``{y, y+1}``; for every
    smaller degree ``d`` one admissible ``x_d`` must be within 1 of every such node.

    ``details["x_candidates"]`` maps each occurring degree to the ``x_d`` values
    that survive.
    """
    _pi_range(g, delta, y)
    bad = _require_total(g, labeling) or _edge_colors(g, labeling)
    if bad:
        return Verdict.from_violations(bad)
    d_r = _red_degrees(g, labeling)
    by_degree: dict[int, list[int]] = {}
    for v in range(g.n):
        if g.degree(v) > 0:
            by_degree.setdefault(g.degree(v), []).append(v)
    surviving = {}
    for d, nodes in sorted(by_degree.items()):
        if d == delta:
            for v in nodes:
                if d_r[v] not in (y, y + 1):
                    bad.append((v, d_r[v], [y, y + 1]))
            continue
        choices = x_candidates(delta, y, d)
        ok = [x for x in choices if all(abs(d_r[v] - x) <= 1 for v in nodes)]
        surviving[d] = ok
        if not ok:
            x = choices[0]
            for v in nodes:
                if abs(d_r[v] - x) > 1:
                    bad.append((v, d_r[v], f"x_{d} in {list(choices)}"))
            if not any(b[0] in nodes for b in bad):
                bad.append((nodes[0], d_r[nodes[0]], f"x_{d} in {list(choices)}"))
    return Verdict.from_violations(bad, x_candidates=surviving)


def check_eps_split(g: TypedMultiGraph, labeling: Labeling, eps: float) -> Verdict:
    """``d_R, d_B`` within ``[(1 - eps) d/2 - 1, (1 + eps) d/2 + 1]``."""
    bad = _require_total(g, labeling)
    if bad:
        return Verdict.from_violations(bad)
    for v, r in enumerate(_red_degrees(g, labeling)):
        d = g.degree(v)
        lo, hi = (1 - eps) * d / 2 - 1, (1 + eps) * d / 2 + 1
        for x in (r, d - r):
            if not lo - 1e-9 <= x <= hi + 1e-9:
                bad.append((v, x, (lo, hi)))
                break
    return Verdict.from_violations(bad)


def _out_in(g: TypedMultiGraph, orientation: Orientation) -> tuple[list[int], list[int]]:
    out = [0] * g.n
    inn = [0] * g.n
    for e, (u, v, _) in enumerate(g.edges):
        h = orientation.heads[e]
        if h not in (0, 1):
            raise ValueError(f"edge {e} has direction {h!r}")
        tail, head = (u, v) if h == 0 else (v, u)
        out[tail] += 1
        inn[head] += 1
    return out, inn


def check_sinkless(g: TypedMultiGraph, orientation: Orientation) -> Verdict:
    """Every node of degree at least 3 has an outgoing edge."""
    out, _ = _out_in(g, orientation)
    return Verdict.from_violations([(v, 0, ">= 1") for v in range(g.n) if g.degree(v) >= 3 and out[v] == 0])


def check_balanced(g: TypedMultiGraph, orientation: Orientation) -> Verdict:
    """Outdegree within ``[d/2 - 1, d/2 + 1]``."""
    out, _ = _out_in(g, orientation)
    return Verdict.from_violations(
        [(v, out[v], (g.degree(v) / 2 - 1, g.degree(v) / 2 + 1)) for v in range(g.n) if abs(2 * out[v] - g.degree(v)) > 2]
    )


def unbalanced_slack(delta: int, c: float) -> float:
    return c * math.sqrt(delta * math.log(delta)) if delta > 1 else 0.0


def check_unbalanced(g: TypedMultiGraph, orientation: Orientation, params) -> Verdict:
    """Each node has outdegree at most ``rho1 d + s`` or indegree at most ``rho2 d + s``,
    with ``s = slack * sqrt(D ln D)`` and ``D`` the maximum degree.

    ``params`` needs attributes ``rho1``, ``rho2`` and ``slack``.
    """
    out, inn = _out_in(g, orientation)
    s = unbalanced_slack(g.max_degree, params.slack)
    bad = []
    for v in range(g.n):
        d = g.degree(v)
        t_out, t_in = params.rho1 * d + s, params.rho2 * d + s
        if out[v] > t_out and inn[v] > t_in:
            bad.append((v, (out[v], inn[v]), (t_out, t_in)))
    return Verdict.from_violations(bad)


# ---------------------------------------------------------------------------
# exhaustive oracles


@dataclass
class BruteResult:
    sat: bool
    witness: Labeling | Orientation | None
    count: int | None = None

    def __bool__(self) -> bool:
        return self.sat


def _incidence_matrix(g: TypedMultiGraph, sign_o: bool) -> tuple[np.ndarray, np.ndarray]:
    """``count(v) = base[v] + A[v] @ bits`` for one bit per edge.

    For labelings (``sign_o``): a C edge bit is its color, an O edge bit says
    whether endpoint0's half is R. For orientations: a bit of 1 reverses the
    edge, and the count is the outdegree.
    """
    a = np.zeros((g.n, g.m), dtype=np.int16)
    base = np.zeros(g.n, dtype=np.int16)
    for e, (u, v, t) in enumerate(g.edges):
        if sign_o and t == C:
            a[u, e] += 1
            a[v, e] += 1
        else:  # endpoint0 counts the bit, endpoint1 its complement
            if sign_o:
                a[u, e] += 1
                a[v, e] -= 1
                base[v] += 1
            else:
                a[u, e] -= 1
                base[u] += 1
                a[v, e] += 1
    return a, base


def _enumerate(m: int, accept: Callable[[np.ndarray], np.ndarray], count: bool) -> tuple[int | None, int]:
    if m > MAX_BRUTE_BITS:
        raise TooLarge(f"{m} free choices exceed the limit of {MAX_BRUTE_BITS}")
    total = 1 << m
    shifts = np.arange(m, dtype=np.int64)
    first, hits = None, 0
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        bits = ((idx[:, None] >> shifts) & 1).astype(np.int16)
        ok = accept(bits)
        if ok.any():
            if first is None:
                first = int(idx[np.argmax(ok)])
            hits += int(ok.sum())
            if not count:
                break
    return first, hits


def _node_sets_mask(counts: np.ndarray, allowed: list[Iterable[int]]) -> np.ndarray:
    ok = np.ones(counts.shape[0], dtype=bool)
    for v, s in enumerate(allowed):
        ok &= np.isin(counts[:, v], np.fromiter(s, dtype=np.int16))
    return ok


def _labeling_from_bits(g: TypedMultiGraph, index: int) -> Labeling:
    halves = []
    for e, (_, _, t) in enumerate(g.edges):
        bit = (index >> e) & 1
        a = R if bit else B
        halves.append([a, a] if t == C else [a, B if bit else R])
    return Labeling(halves)


def brute_force_labeling(
    g: TypedMultiGraph,
    predicate,
    *,
    y: int | None = None,
    delta: int | None = None,
    count: bool = False,
) -> BruteResult:
    """Search every type-consistent labeling for one satisfying ``predicate``.

    ``predicate`` is ``"eq1"``, ``"eq2_down"``, ``"eq2_up"``, ``"lemma31"``,
    ``"pi"`` (needs ``y``; ``delta`` defaults to the max degree) or a callable
    ``f(g) -> list of allowed d_R sets per node``. The witness is the
    lowest-index satisfying assignment; ``count=True`` also counts all of them.
    """
    if g.m > MAX_BRUTE_BITS:
        raise TooLarge(f"{g.m} free choices exceed the limit of {MAX_BRUTE_BITS}")
    a, base = _incidence_matrix(g, sign_o=True)
    a_t = a.T.astype(np.int16)
    degrees = g.degrees()

    def red(bits: np.ndarray) -> np.ndarray:
        return bits @ a_t + base

    if callable(predicate):
        allowed = [frozenset(s) for s in predicate(g)]
        accept = lambda bits: _node_sets_mask(red(bits), allowed)  # noqa: E731
    elif predicate == "eq1":
        allowed = [[r for r in range(d + 1) if abs(2 * r - d) <= 2] for d in degrees]
        accept = lambda bits: _node_sets_mask(red(bits), allowed)  # noqa: E731
    elif predicate in ("eq2_down", "eq2_up"):
        if not g.all_c():
            raise TypeError("exact splitting is defined for all-C graphs only")
        mode = "round_down" if predicate == "eq2_down" else "round_up"
        allowed = [_eq2_sets(d, mode) for d in degrees]
        accept = lambda bits: _node_sets_mask(red(bits), allowed)  # noqa: E731
    elif predicate == "lemma31":
        allowed = [range(1, d) if d >= 3 else range(d + 1) for d in degrees]
        accept = lambda bits: _node_sets_mask(red(bits), allowed)  # noqa: E731
    elif predicate == "pi":
        if not g.all_c():
            raise TypeError("Pi(y) is defined for all-C graphs only")
        if y is None:
            raise ValueError("predicate 'pi' needs y")
        delta = max(g.max_degree, 2) if delta is None else delta
        _pi_range(g, delta, y)
        groups: dict[int, list[int]] = {}
        for v, d in enumerate(degrees):
            if d > 0:
                groups.setdefault(d, []).append(v)

        def accept(bits: np.ndarray) -> np.ndarray:
            r = red(bits)
            ok = np.ones(r.shape[0], dtype=bool)
            for d, nodes in groups.items():
                sub = r[:, nodes]
                if d == delta:
                    ok &= np.all((sub == y) | (sub == y + 1), axis=1)
                else:
                    any_x = np.zeros_like(ok)
                    for x in x_candidates(delta, y, d):
                        any_x |= np.all(np.abs(sub - x) <= 1, axis=1)
                    ok &= any_x
            return ok

    else:
        raise ValueError(f"unknown predicate {predicate!r}")

    first, hits = _enumerate(g.m, accept, count)
    witness = None if first is None else _labeling_from_bits(g, first)
    return BruteResult(first is not None, witness, hits if count else None)


def brute_force_orientation(
    g: TypedMultiGraph,
    rho1: float,
    rho2: float,
    slack_absolute: float,
    *,
    delta: int | None = None,
    count: bool = False,
) -> BruteResult:
    """Search every orientation for one where each node has
    ``outdeg <= rho1 * D - slack`` or ``indeg <= rho2 * D - slack``.

    ``D`` defaults to the maximum degree. The slack is subtracted: this is the
    lower-bound form of the unbalanced orientation predicate.
    """
    if g.m > MAX_BRUTE_BITS:
        raise TooLarge(f"{g.m} edges exceed the limit of {MAX_BRUTE_BITS}")
    delta = g.max_degree if delta is None else delta
    a, base = _incidence_matrix(g, sign_o=False)
    a_t = a.T.astype(np.int16)
    deg = np.array(g.degrees(), dtype=np.int16)
    t_out = rho1 * delta - slack_absolute
    t_in = rho2 * delta - slack_absolute

    def accept(bits: np.ndarray) -> np.ndarray:
        out = bits @ a_t + base
        return np.all((out <= t_out + 1e-9) | ((deg - out) <= t_in + 1e-9), axis=1)

    first, hits = _enumerate(g.m, accept, count)
    witness = None if first is None else Orientation([(first >> e) & 1 for e in range(g.m)])
    return BruteResult(first is not None, witness, hits if count else None)


# ---------------------------------------------------------------------------
# ledger shape

_STEP = re.compile(r"^(halve|extra)\[(\d+)\]$")
_PI_STEP = re.compile(r"^pi\[(\d+)\]$")


def _ceil_log2(x: int) -> int:
    return (x - 1).bit_length() if x >= 1 else 0


def _split_block(entries: list, prefix: str, outer: int, delta: int | None, bad: list) -> None:
    """Check the entries of one halving pipeline rooted at ``prefix + "split"``.

    With ``delta=None`` the level count is read off the final stage's overhead
    ``2^(k+2)`` and cross-checked against the first level's parameter ``4 sqrt(D)``.
    """
    root = prefix + "split"
    block = [e for e in entries if e.phase == root or e.phase.startswith(root + "/")]
    final = [e for e in block if e.phase == root + "/lemma31"]
    if not final:
        bad.append((root, "no lemma31 stage", "present"))
        return
    ratio = final[0].overhead // outer
    if ratio * outer != final[0].overhead or ratio < 4 or ratio & (ratio - 1):
        bad.append((root + "/lemma31", final[0].overhead, f"{outer} * 2^(k+2)"))
        return
    k = ratio.bit_length() - 3
    if delta is not None and k != _ceil_log2(delta):
        bad.append((root, k, f"ceil(log2 {delta}) = {_ceil_log2(delta)} levels"))
    if sorted(e.unit for e in final) != ["RS32", "SO"]:
        bad.append((root + "/lemma31", sorted(e.unit for e in final), ["RS32", "SO"]))
    if any(e.overhead != final[0].overhead for e in final):
        bad.append((root + "/lemma31", [e.overhead for e in final], "uniform overhead"))

    levels: dict[tuple[str, int], list] = {}
    for e in block:
        rest = e.phase[len(root) + 1:]
        if rest == "lemma31":
            continue
        match = _STEP.match(rest)
        if not match:
            bad.append((e.phase, e.unit, "halve[i] / extra[j] / lemma31"))
            continue
        levels.setdefault((match.group(1), int(match.group(2))), []).append(e)
    expected = {("halve", i) for i in range(k)} | {("extra", 0), ("extra", 1)}
    if set(levels) != expected:
        bad.append((root, sorted(levels), sorted(expected)))
    bo = [levels[("halve", i)] for i in range(k) if ("halve", i) in levels]
    d_hat = None
    if bo and bo[0] and bo[0][0].param:
        d_hat = (bo[0][0].param / 4) ** 2
        if not (2 ** (k - 1) < d_hat + 1e-6 and d_hat <= 2**k + 1e-6):
            bad.append((root + "/halve[0]", d_hat, f"max degree in (2^{k - 1}, 2^{k}]"))
    if delta is not None:
        d_hat = delta
    for (kind, i), lst in sorted(levels.items()):
        unit = "BO" if kind == "halve" else "SO"
        want_overhead = outer * 2 ** (i if kind == "halve" else k + i)
        if [e.unit for e in lst] != [unit] or lst[0].count != 1:
            bad.append((f"{root}/{kind}[{i}]", [e.unit for e in lst], [unit]))
            continue
        if lst[0].overhead != want_overhead:
            bad.append((f"{root}/{kind}[{i}]", lst[0].overhead, want_overhead))
        if kind == "halve" and d_hat is not None:
            want = 4 * math.sqrt(d_hat) / 2 ** (i / 2)
            if lst[0].param is None or not math.isclose(lst[0].param, want, rel_tol=1e-9):
                bad.append((f"{root}/halve[{i}]", lst[0].param, want))


def _exact_block(entries: list, prefix: str, bad: list) -> None:
    root = prefix + "exact"
    block = [e for e in entries if e.phase.startswith(root + "/")]
    matching = [e for e in block if e.phase == root + "/matching"]
    if [e.unit for e in matching] != ["MM"]:
        bad.append((root + "/matching", [e.unit for e in matching], ["MM"]))
    residual = [e for e in block if e.phase.startswith(root + "/residual/")]
    stray = [e for e in block if e not in matching and e not in residual]
    if stray:
        bad.append((root, [e.phase for e in stray], "matching / residual"))
    if residual:
        _split_block(residual, root + "/residual/", 2 * (matching[0].overhead if matching else 1), None, bad)


def check_ledger(ledger, delta: int | None, pipeline: str) -> Verdict:
    """Check the invocation structure recorded by ``balanced_split``,
    ``exact_split`` or ``solve_pi``.

    ``delta`` is the input's maximum degree (for ``solve_pi``, the problem's
    degree bound).
    """
    entries = list(ledger.entries if hasattr(ledger, "entries") else ledger)
    bad: list[tuple] = []
    for e in entries:
        if e.count < 1 or e.overhead < 1:
            bad.append((e.phase, (e.count, e.overhead), "positive"))
    if pipeline == "balanced_split":
        if entries or (delta or 0) >= 1:
            _split_block(entries, "", 1, delta, bad)
        details = {"levels": _ceil_log2(delta)} if delta is not None else {}
    elif pipeline == "exact_split":
        if entries:
            _exact_block(entries, "", bad)
        details = {}
    elif pipeline == "solve_pi":
        steps: dict[int, list] = {}
        for e in entries:
            head = e.phase.split("/", 1)[0]
            match = _PI_STEP.match(head)
            if not match:
                bad.append((e.phase, e.unit, "pi[j]/..."))
                continue
            steps.setdefault(int(match.group(1)), []).append(e)
        bound = _ceil_log2(delta) + 2
        if len(steps) > bound or (steps and max(steps) >= bound):
            bad.append(("pi", sorted(steps), f"at most {bound} steps"))
        for j, lst in sorted(steps.items()):
            _exact_block(lst, f"pi[{j}]/", bad)
        details = {"steps": sorted(steps), "bound": bound}
    else:
        raise ValueError(f"unknown pipeline {pipeline!r}")
    return Verdict.from_violations(bad, **details)

"""Unbalanced orientations by random sampling plus Moser-Tardos resampling.

Every node ``v`` should end up with outdegree at most ``rho1 d(v) + s`` or
indegree at most ``rho2 d(v) + s``, ``s = slack * sqrt(D ln D)``. One sample
draws a bit ``X_v`` per node and bits ``Y_e``, ``Z_e`` per edge; an edge's
direction depends only on its own bits and its endpoints' ``X``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Orientation, TypedMultiGraph
from .subroutines import LLL_RESAMPLE, CostLedger


class DomainError(ValueError):
    pass


class BudgetExhausted(RuntimeError):
    def __init__(self, count: int):
        super().__init__(f"no valid orientation after {count} resamples")
        self.count = count


@dataclass(frozen=True)
class OrientParams:
    rho1: float
    rho2: float
    slack: float
    eta: float
    nu: float
    max_resample: int | None
    seed: int

    def threshold(self, d: int, delta: int) -> tuple[float, float]:
        s = slack_term(delta, self.slack)
        return self.rho1 * d + s, self.rho2 * d + s


_TOL = 1e-12


def derive_params(
    rho1: float, rho2: float, C: float = 2.0, seed: int = 0, max_resample: int | None = None
) -> OrientParams:
    """``eta = (1/2 - rho2) / (1 - rho1 - rho2)``, ``nu = rho1 + rho2 - 1/2``.

    ``max_resample=None`` means ``50 n`` at run time.
    """
    for name, rho in (("rho1", rho1), ("rho2", rho2)):
        if not -_TOL <= rho <= 0.5 + _TOL:
            raise DomainError(f"{name} = {rho} outside [0, 1/2]")
    if rho1 + rho2 < 0.5 - _TOL:
        raise DomainError(f"rho1 + rho2 = {rho1 + rho2} < 1/2")
    if C < 0:
        raise DomainError(f"slack constant must be non-negative, got {C}")
    denom = 1 - rho1 - rho2
    eta = 0.5 if denom < _TOL else (0.5 - rho2) / denom
    eta = min(1.0, max(0.0, eta))
    nu = min(0.5, max(0.0, rho1 + rho2 - 0.5))
    return OrientParams(rho1, rho2, C, eta, nu, max_resample, seed)


def slack_term(delta: int, c: float) -> float:
    return c * math.sqrt(delta * math.log(delta)) if delta > 1 else 0.0


@dataclass
class SampleState:
    X: np.ndarray  # per node, 1 with probability eta
    Y: np.ndarray  # per edge, 1 with probability nu
    Z: np.ndarray  # per edge, fair coin

    def class_degrees(self, g: TypedMultiGraph) -> tuple[np.ndarray, np.ndarray]:
        """``(d_0, d_1)``: per node, the number of neighbors (with multiplicity) with ``X = 0`` / ``X = 1``."""
        d1 = np.zeros(g.n, dtype=np.int64)
        deg = np.array(g.degrees(), dtype=np.int64)
        for u, v, _ in g.edges:
            d1[u] += self.X[v]
            d1[v] += self.X[u]
        return deg - d1, d1


def sample_state(g: TypedMultiGraph, params: OrientParams, rng: np.random.Generator) -> SampleState:
    X = (rng.random(g.n) < params.eta).astype(np.int8)
    Y = (rng.random(g.m) < params.nu).astype(np.int8)
    Z = (rng.random(g.m) < 0.5).astype(np.int8)
    return SampleState(X, Y, Z)


def _low_high(g: TypedMultiGraph) -> tuple[np.ndarray, np.ndarray]:
    ends = np.array([(u, v) for u, v, _ in g.edges], dtype=np.int64).reshape(-1, 2)
    return ends.min(axis=1), ends.max(axis=1)


def _low_to_high(xu: np.ndarray, xv: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Direction of ``{u, v}``, ``u`` the lower id: True means ``u -> v``."""
    return np.where(xu == xv, z == 1, np.where(xu == 0, y == 0, y == 1))


def _heads(g: TypedMultiGraph, low_to_high: np.ndarray, low: np.ndarray) -> np.ndarray:
    ep0 = np.array([u for u, _, _ in g.edges], dtype=np.int64)
    # head 0 means endpoint0 -> endpoint1, i.e. the tail is endpoint0
    tail_is_low = low_to_high
    low_is_ep0 = low == ep0
    return np.where(tail_is_low == low_is_ep0, 0, 1).astype(np.int64)


def orient_from_sample(g: TypedMultiGraph, state: SampleState) -> Orientation:
    """Apply the sampling rule to every edge ``{u, v}`` with ``u < v``:
    equal ``X`` -> ``u -> v`` iff ``Z = 1``; ``X_u = 0, X_v = 1`` -> ``u -> v`` iff
    ``Y = 0``; ``X_u = 1, X_v = 0`` -> ``u -> v`` iff ``Y = 1``.
    """
    if g.m == 0:
        return Orientation([])
    low, high = _low_high(g)
    lth = _low_to_high(state.X[low], state.X[high], state.Y, state.Z)
    return Orientation(_heads(g, lth, low).tolist())


def event_scope(g: TypedMultiGraph, v: int) -> tuple[list[int], list[int]]:
    """Variables of ``v``'s bad event: ``X`` of ``v`` and its neighbors, ``Y, Z`` of its edges."""
    nodes = [v] + sorted(set(g.neighbors(v)) - {v})
    edges = sorted(e for e, _ in g.incidence(v))
    return nodes, edges


def resample(
    state: SampleState, scope: tuple[list[int], list[int]], params: OrientParams, rng: np.random.Generator
) -> None:
    """Redraw exactly the variables in ``scope`` (nodes first, then edges), in place."""
    nodes, edges = scope
    state.X[nodes] = rng.random(len(nodes)) < params.eta
    state.Y[edges] = rng.random(len(edges)) < params.nu
    state.Z[edges] = rng.random(len(edges)) < 0.5


def bad_event(g: TypedMultiGraph, v: int, orientation: Orientation, params: OrientParams) -> bool:
    """True iff ``v`` exceeds both its outdegree and its indegree threshold."""
    out = sum(1 for e, s in g.incidence(v) if orientation.heads[e] == s)
    d = g.degree(v)
    t_out, t_in = params.threshold(d, g.max_degree)
    return out > t_out and d - out > t_in


def lll_orient(
    g: TypedMultiGraph, params: OrientParams, ledger: CostLedger | None = None
) -> tuple[Orientation, int, dict]:
    """Sample, then repeatedly resample the scope of the lowest-id violated node.

    The scope of ``v`` is ``X_v``, ``X_u`` for its neighbors and ``Y_e, Z_e``
    for its incident edges. Returns the orientation, the number of resamples
    and ``{"violations_initial", "outdegrees", "indegrees"}``.
    """
    rng = np.random.default_rng(params.seed)
    budget = params.max_resample if params.max_resample is not None else 50 * max(g.n, 1)
    state = sample_state(g, params, rng)
    deg = np.array(g.degrees(), dtype=np.int64)
    if g.m == 0:
        return Orientation([]), 0, {"violations_initial": 0, "outdegrees": [0] * g.n, "indegrees": [0] * g.n}

    low, high = _low_high(g)
    ep0 = np.array([u for u, _, _ in g.edges], dtype=np.int64)
    ep1 = np.array([v for _, v, _ in g.edges], dtype=np.int64)
    t_out = params.rho1 * deg + slack_term(g.max_degree, params.slack)
    t_in = params.rho2 * deg + slack_term(g.max_degree, params.slack)

    def direction(edges: np.ndarray) -> np.ndarray:
        lth = _low_to_high(state.X[low[edges]], state.X[high[edges]], state.Y[edges], state.Z[edges])
        return np.where(lth == (low[edges] == ep0[edges]), 0, 1)

    heads = direction(np.arange(g.m))
    tails = np.where(heads == 0, ep0, ep1)
    out = np.bincount(tails, minlength=g.n)
    bad = (out > t_out) & (deg - out > t_in)
    initial = int(bad.sum())
    incident = [np.array(sorted(e for e, _ in g.incidence(v)), dtype=np.int64) for v in range(g.n)]

    resamples = 0
    while bad.any():
        if resamples >= budget:
            raise BudgetExhausted(resamples)
        v = int(np.flatnonzero(bad)[0])
        scope = event_scope(g, v)
        resample(state, scope, params, rng)
        resamples += 1

        nodes = scope[0]
        touched = np.unique(np.concatenate([incident[x] for x in nodes]))
        old_tails = tails[touched]
        heads[touched] = direction(touched)
        tails[touched] = np.where(heads[touched] == 0, ep0[touched], ep1[touched])
        np.subtract.at(out, old_tails, 1)
        np.add.at(out, tails[touched], 1)
        affected = np.unique(np.concatenate([ep0[touched], ep1[touched]]))
        bad[affected] = (out[affected] > t_out[affected]) & (deg[affected] - out[affected] > t_in[affected])

    if ledger is not None and resamples:
        ledger.record(LLL_RESAMPLE, count=resamples)
    stats = {
        "violations_initial": initial,
        "outdegrees": out.tolist(),
        "indegrees": (deg - out).tolist(),
    }
    return Orientation(heads.tolist()), resamples, stats


@dataclass(frozen=True)
class ClassStat:
    """Pooled mean of a per-node count over one ``X`` class, with its standard error."""

    mean: float
    se: float
    expected: float
    observations: int

    def z_score(self) -> float:
        return (self.mean - self.expected) / self.se if self.se > 0 else (0.0 if self.mean == self.expected else math.inf)


def empirical_means(
    g: TypedMultiGraph, params: OrientParams, trials: int, seed: int | None = None
) -> dict[str, ClassStat | None]:
    """Monte-Carlo check of the sampling rule's expectations (no resampling).

    ``"in0"`` is the mean indegree of ``X = 0`` nodes, expected ``rho2 d``;
    ``"out1"`` the mean outdegree of ``X = 1`` nodes, expected ``rho1 d``. Both
    are ratio estimators pooled over trials; the standard error treats each
    trial as one cluster. A class that never occurs is reported as ``None``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(params.seed if seed is None else seed)
    n, m = g.n, g.m
    deg = np.array(g.degrees(), dtype=np.float64)
    X = (rng.random((trials, n)) < params.eta).astype(np.int8)
    Y = (rng.random((trials, m)) < params.nu).astype(np.int8)
    Z = (rng.random((trials, m)) < 0.5).astype(np.int8)
    out = np.zeros((trials, n))
    if m:
        low, high = _low_high(g)
        lth = _low_to_high(X[:, low], X[:, high], Y, Z)
        low_oh = np.zeros((m, n))
        high_oh = np.zeros((m, n))
        low_oh[np.arange(m), low] = 1
        high_oh[np.arange(m), high] = 1
        out = lth @ low_oh + (~lth) @ high_oh
    inn = deg[None, :] - out

    def pooled(mask: np.ndarray, values: np.ndarray, rho: float) -> ClassStat | None:
        counts = mask.sum(axis=1).astype(np.float64)
        total = counts.sum()
        if total == 0:
            return None
        sums = (values * mask).sum(axis=1)
        ratio = sums.sum() / total
        expected = rho * (deg[None, :] * mask).sum() / total
        resid = sums - ratio * counts
        # one cluster per trial; a single trial falls back to T - 1 = 1
        se = math.sqrt((resid**2).sum() / (trials * max(trials - 1, 1))) / counts.mean()
        return ClassStat(float(ratio), float(se), float(expected), int(total))

    return {
        "in0": pooled(X == 0, inn, params.rho2),
        "out1": pooled(X == 1, out, params.rho1),
    }

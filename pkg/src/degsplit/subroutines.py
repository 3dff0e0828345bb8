"""Centralized stand-ins for the distributed black boxes, plus the cost ledger.

Each oracle computes a correct answer sequentially and appends one entry to a
:class:`CostLedger`, so that the invocation structure of a pipeline (which
subroutine, how often, at which simulation overhead) can be inspected
afterwards in place of a round count.
"""

from __future__ import annotations

import json
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator

from .graph import Orientation, TypedMultiGraph, bfs_tree, find_cycle

SO = "SO"
BO = "BO"
MM = "MM"
RS32 = "RS32"
LLL_RESAMPLE = "LLL_RESAMPLE"
UNITS = (SO, BO, MM, RS32, LLL_RESAMPLE)


@dataclass(frozen=True)
class LedgerEntry:
    phase: str
    unit: str
    count: int = 1
    overhead: int = 1
    param: float | None = None


@dataclass
class CostLedger:
    """Append-only log of subroutine invocations.

    ``phase(name, overhead)`` opens a nested scope: entries recorded inside get
    the slash-joined phase path and the product of all enclosing overheads.
    """

    entries: list[LedgerEntry] = field(default_factory=list)
    _scopes: list[tuple[str, int]] = field(default_factory=list, repr=False, compare=False)

    @contextmanager
    def phase(self, name: str, overhead: int = 1) -> Iterator["CostLedger"]:
        self._scopes.append((name, overhead))
        try:
            yield self
        finally:
            self._scopes.pop()

    def record(self, unit: str, count: int = 1, param: float | None = None, overhead: int = 1) -> LedgerEntry:
        if unit not in UNITS:
            raise ValueError(f"unknown ledger unit {unit!r}")
        if count < 1 or overhead < 1:
            raise ValueError("count and overhead must be positive")
        total = overhead
        for _, o in self._scopes:
            total *= o
        entry = LedgerEntry("/".join(n for n, _ in self._scopes), unit, count, total, param)
        self.entries.append(entry)
        return entry

    def extend(self, other: "CostLedger") -> None:
        self.entries.extend(other.entries)

    def count(self, unit: str) -> int:
        return sum(e.count for e in self.entries if e.unit == unit)

    def summary(self) -> dict[str, int]:
        return {u: self.count(u) for u in UNITS if self.count(u)}

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def to_jsonl(self) -> str:
        return "".join(json.dumps(asdict(e), sort_keys=True) + "\n" for e in self.entries)

    @classmethod
    def from_jsonl(cls, text: str) -> "CostLedger":
        ledger = cls()
        for line in text.splitlines():
            if line.strip():
                ledger.entries.append(LedgerEntry(**json.loads(line)))
        return ledger


def _ledger(ledger: CostLedger | None) -> CostLedger:
    return ledger if ledger is not None else CostLedger()


def sinkless_orientation(g: TypedMultiGraph, ledger: CostLedger | None = None) -> Orientation:
    """Orientation in which every node of degree >= 3 has an outgoing edge.

    Per component: if it contains a cycle, that cycle is oriented consistently
    and every other node points along a BFS tree toward it; a tree component
    is rooted at a leaf and oriented toward the root.
    """
    heads = [0] * g.m
    seen = [False] * g.n
    for start in range(g.n):
        if seen[start]:
            continue
        depth, _ = bfs_tree(g, [start])
        nodes = sorted(depth)
        for v in nodes:
            seen[v] = True
        comp_edges = sorted({e for v in nodes for e, _ in g.incidence(v)})
        cycle = find_cycle(g, nodes, comp_edges)
        if cycle is not None:
            cyc_nodes, cyc_edges = cycle
            for i, e in enumerate(cyc_edges):
                heads[e] = g.side_of(e, cyc_nodes[i])
            sources = cyc_nodes
        else:
            sources = [min(v for v in nodes if g.degree(v) <= 1)]
        cyc = set(cycle[1]) if cycle else set()
        _, parent = bfs_tree(g, sources, set(comp_edges) - cyc)
        for v, e in parent.items():
            if e >= 0:
                heads[e] = g.side_of(e, v)
    _ledger(ledger).record(SO)
    return Orientation(heads)


def _euler_orientation(g: TypedMultiGraph) -> Orientation:
    """Orient along closed trails of ``g`` plus a dummy node joined to all odd nodes."""
    n, m = g.n, g.m
    dummy = n
    adj: list[list[tuple[int, int]]] = [[(e, g.edges[e][1 - s]) for e, s in g.incidence(v)] for v in range(n)]
    adj.append([])
    ends = [(u, v) for u, v, _ in g.edges]
    for v in range(n):
        if g.degree(v) % 2:
            e = len(ends)
            ends.append((v, dummy))
            adj[v].append((e, dummy))
            adj[dummy].append((e, v))
    used = [False] * len(ends)
    ptr = [0] * (n + 1)
    heads = [0] * m
    for start in range(n + 1):
        x = start
        while True:
            lst = adj[x]
            while ptr[x] < len(lst) and used[lst[ptr[x]][0]]:
                ptr[x] += 1
            if ptr[x] == len(lst):
                break
            e, y = lst[ptr[x]]
            used[e] = True
            if e < m:
                heads[e] = 0 if ends[e][0] == x else 1
            x = y
    return Orientation(heads)


def balanced_orientation(g: TypedMultiGraph, ledger: CostLedger | None = None) -> Orientation:
    """|outdeg - indeg| <= 1 everywhere, with equality on even-degree nodes."""
    orientation = _euler_orientation(g)
    _ledger(ledger).record(BO, param=float(g.max_degree))
    return orientation


def eps_balanced_orientation(g: TypedMultiGraph, eps: float, ledger: CostLedger | None = None) -> Orientation:
    """Outdegree >= (1 - eps) d/2 - 1; realized by the exact Euler orientation."""
    if not 0 < eps <= 1:
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    orientation = _euler_orientation(g)
    _ledger(ledger).record(BO, param=1.0 / eps)
    return orientation


def outdeg2_orientation(g: TypedMultiGraph, ledger: CostLedger | None = None) -> Orientation:
    """Every node of degree >= 5 gets outdegree >= 2 (charged as one sinkless orientation)."""
    orientation = _euler_orientation(g)
    _ledger(ledger).record(SO)
    return orientation


def maximal_matching(
    g: TypedMultiGraph, edges: Iterable[int] | None = None, ledger: CostLedger | None = None
) -> list[int]:
    """Greedy maximal matching by edge id, optionally restricted to ``edges``."""
    candidates = range(g.m) if edges is None else sorted(edges)
    matched = [False] * g.n
    chosen = []
    for e in candidates:
        u, v, _ = g.edges[e]
        if not matched[u] and not matched[v]:
            matched[u] = matched[v] = True
            chosen.append(e)
    _ledger(ledger).record(MM)
    return chosen


def ruling_set_32(g: TypedMultiGraph, ledger: CostLedger | None = None) -> list[int]:
    """Greedy (3,2)-ruling set by node id: members pairwise >= 3 apart, all nodes within 2."""
    covered = [False] * g.n
    members = []
    for v in range(g.n):
        if covered[v]:
            continue
        members.append(v)
        covered[v] = True
        for e, s in g.incidence(v):
            u = g.edges[e][1 - s]
            covered[u] = True
            for f, t in g.incidence(u):
                covered[g.edges[f][1 - t]] = True
    _ledger(ledger).record(RS32)
    return members

"""Balanced red-blue splittings of typed multigraphs.

Pipeline:

* :func:`lemma31_split` -- every node of degree >= 3 sees both colors, via a
  clustering of a max-degree-3 subgraph and one sinkless orientation.
* :func:`balanced_split` -- ``d_R(v), d_B(v)`` within ``d(v)/2 +- 1``: repeated
  halving by splitting off pairs of outgoing edges into virtual edges, then
  :func:`lemma31_split` on the final degree-4 graph and unfolding.
* :func:`exact_split` -- for all-``C`` graphs, ``d_R(v)`` in
  ``{floor(d/2), floor(d/2) + 1}`` (or the color-swapped variant).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .graph import (
    B,
    C,
    O,
    R,
    Labeling,
    Orientation,
    TypedMultiGraph,
    bfs_tree,
    find_cycle,
    flip,
    split_nodes_epsilon,
)
from .subroutines import (
    CostLedger,
    eps_balanced_orientation,
    maximal_matching,
    outdeg2_orientation,
    ruling_set_32,
    sinkless_orientation,
)

ROUND_DOWN = "round_down"
ROUND_UP = "round_up"


class InconsistentInput(ValueError):
    """A labeling handed to :func:`unfold_labels` violates a virtual edge's type."""


class EdgeTypeError(TypeError):
    """An operation that needs an all-``C`` graph was given ``O`` edges."""


def _happy_color(colors) -> str:
    """Color for a new half-edge so that the node sees both colors, if it can."""
    present = {c for c in colors if c is not None}
    if len(present) == 1:
        return flip(next(iter(present)))
    return R


def _paint_default(lab: Labeling, g: TypedMultiGraph, e: int) -> None:
    # C -> both halves R, O -> endpoint0 half R
    lab.paint(g, e, 0, R)


# ---------------------------------------------------------------------------
# both colors at every node of degree >= 3


@dataclass
class ClusterDecomposition:
    owner: dict[int, int]
    members: dict[int, list[int]]
    internal: dict[int, list[int]]
    bad: dict[int, bool]
    e_c: dict[int, int] = field(default_factory=dict)
    e_nc: dict[int, int] = field(default_factory=dict)


def _clusters(h: TypedMultiGraph, centers: list[int]) -> ClusterDecomposition:
    depth, parent = bfs_tree(h, centers)
    owner: dict[int, int] = {}
    for v in depth:  # discovery order, parents first
        e = parent[v]
        owner[v] = v if e < 0 else owner[h.other(e, v)]
    members: dict[int, list[int]] = {c: [] for c in centers}
    for v in range(h.n):
        members[owner[v]].append(v)
    internal: dict[int, list[int]] = {c: [] for c in centers}
    for e, (u, v, _) in enumerate(h.edges):
        if owner[u] == owner[v]:
            internal[owner[u]].append(e)
    bad = {
        c: all(h.degree(x) == 3 for x in members[c]) and len(internal[c]) == len(members[c]) - 1
        for c in centers
    }
    return ClusterDecomposition(owner, members, internal, bad)


def _assign_intercluster(h: TypedMultiGraph, cd: ClusterDecomposition, ledger: CostLedger) -> dict[int, int]:
    """Assign each intercluster edge to one of its clusters via a sinkless orientation."""
    owner = cd.owner
    inter = [e for e, (u, v, _) in enumerate(h.edges) if owner[u] != owner[v]]
    by_cluster: dict[int, list[int]] = {c: [] for c in cd.members}
    for e in inter:
        u, v, _ = h.edges[e]
        by_cluster[owner[u]].append(e)
        by_cluster[owner[v]].append(e)
    slot: dict[tuple[int, int], int] = {}
    n_h = 0
    for c in sorted(cd.members):
        if cd.bad[c]:
            lst = by_cluster[c]
            half = len(lst) // 2
            for i, e in enumerate(lst):
                slot[(e, c)] = n_h if i < half else n_h + 1
            n_h += 2
        else:
            for e in by_cluster[c]:
                slot[(e, c)] = n_h
            n_h += 1
    h_edges = [(slot[(e, owner[h.edges[e][0]])], slot[(e, owner[h.edges[e][1]])], C) for e in inter]
    orientation = sinkless_orientation(TypedMultiGraph(n_h, h_edges), ledger)
    return {e: owner[h.edges[e][orientation.heads[i]]] for i, e in enumerate(inter)}


def _color_tree_upward(
    h: TypedMultiGraph, lab: Labeling, order: list[int], parent: dict[int, int]
) -> None:
    # every other half at u is colored by now; pick u's half of the parent edge to make u happy
    for u in order:
        f = parent[u]
        others = [lab[(e, s)] for e, s in h.incidence(u) if e != f]
        lab.paint(h, f, h.side_of(f, u), _happy_color(others))


def _color_max3(h: TypedMultiGraph, ledger: CostLedger) -> Labeling:
    lab = Labeling.empty(h.m)
    centers = ruling_set_32(h, ledger)
    cd = _clusters(h, centers)
    owner = cd.owner
    assigned = _assign_intercluster(h, cd, ledger)

    for c in centers:
        if cd.bad[c]:
            mine = sorted(e for e, a in assigned.items() if a == c)
            cd.e_c[c], cd.e_nc[c] = mine[0], mine[1]
    skipped = set(cd.e_nc.values())
    for e in sorted(assigned):
        if e not in skipped:
            _paint_default(lab, h, e)

    def end_in(e: int, c: int) -> int:
        u, v, _ = h.edges[e]
        return u if owner[u] == c else v

    # bad clusters: the e_c - e_nc path first (this colors every e_nc) ...
    paths: dict[int, tuple[list[int], list[int]]] = {}
    for c in centers:
        if not cd.bad[c]:
            continue
        e_c, e_nc = cd.e_c[c], cd.e_nc[c]
        a, b = end_in(e_c, c), end_in(e_nc, c)
        _, par = bfs_tree(h, [a], set(cd.internal[c]))
        path_edges = []
        x = b
        while x != a:
            path_edges.append(par[x])
            x = h.other(par[x], x)
        path_edges.reverse()
        cur = flip(lab[(e_c, h.side_of(e_c, a))])
        x = a
        nodes = [a]
        for p in path_edges:
            lab.paint(h, p, h.side_of(p, x), cur)
            x = h.other(p, x)
            nodes.append(x)
            cur = flip(lab[(p, h.side_of(p, x))])
        lab.paint(h, e_nc, h.side_of(e_nc, b), cur)
        paths[c] = (nodes, path_edges)

    # ... then the subtrees hanging off each path, from the leaves inward
    for c, (nodes, path_edges) in paths.items():
        allowed = set(cd.internal[c]) - set(path_edges)
        depth, parent = bfs_tree(h, sorted(set(nodes)), allowed)
        order = sorted((v for v in depth if parent[v] >= 0), key=lambda v: (-depth[v], v))
        _color_tree_upward(h, lab, order, parent)

    for c in centers:
        if cd.bad[c]:
            continue
        members, internal = cd.members[c], cd.internal[c]
        low = [x for x in members if h.degree(x) < 3]
        cycle = None
        if low:
            sources = [low[0]]
            allowed = set(internal)
        else:
            cycle = find_cycle(h, members, internal)
            assert cycle is not None, "good cluster without low-degree node must contain a cycle"
            sources = cycle[0]
            allowed = set(internal) - set(cycle[1])
        depth, parent = bfs_tree(h, sources, allowed)
        tree = {e for e in parent.values() if e >= 0}
        for e in internal:
            if e not in tree and (cycle is None or e not in cycle[1]):
                _paint_default(lab, h, e)
        order = sorted((v for v in depth if parent[v] >= 0), key=lambda v: (-depth[v], v))
        _color_tree_upward(h, lab, order, parent)
        if cycle is not None:
            cyc_nodes, cyc_edges = cycle
            for i, v in enumerate(cyc_nodes):
                out, prev = cyc_edges[i], cyc_edges[i - 1]
                others = [lab[(e, s)] for e, s in h.incidence(v) if e not in (out, prev)]
                lab.paint(h, out, h.side_of(out, v), _happy_color(others))
    assert lab.is_total()
    return lab


def lemma31_split(g: TypedMultiGraph, ledger: CostLedger | None = None) -> Labeling:
    """Type-consistent labeling where every node of degree >= 3 sees both R and B.

    Each node of degree >= 3 marks its three lowest-id half-edges; edges marked
    at both ends form a subgraph of maximum degree 3 which is solved by
    clustering, and the remaining marked edges let their marking node fix
    itself up afterwards.
    """
    ledger = ledger if ledger is not None else CostLedger()
    marks = [[False, False] for _ in range(g.m)]
    for v in range(g.n):
        if g.degree(v) >= 3:
            for e, s in g.incidence(v)[:3]:
                marks[e][s] = True
    inner = [e for e in range(g.m) if marks[e][0] and marks[e][1]]
    h = g.subgraph(inner)
    sub = _color_max3(h, ledger)
    lab = Labeling.empty(g.m)
    for i, e in enumerate(inner):
        lab.halves[e] = list(sub.halves[i])

    for v in range(g.n):
        if g.degree(v) < 3 or h.degree(v) >= 3:
            continue
        private = [(e, s) for e, s in g.incidence(v)[:3] if not marks[e][1 - s]]
        if len(private) >= 2:
            for (e, s), color in zip(private, (R, B, R)):
                lab.paint(g, e, s, color)
        else:
            (e, s), = private
            seen = [lab[half] for half in g.incidence(v)]
            lab.paint(g, e, s, _happy_color(seen))

    for e in range(g.m):
        if lab.halves[e][0] is None:
            _paint_default(lab, g, e)
    return lab


# ---------------------------------------------------------------------------
# virtual edges and degree halving


@dataclass(frozen=True)
class VirtualEdge:
    """Edge ``{u, w}`` standing for the pair ``{middle, u} = e1``, ``{middle, w} = e2``."""

    e1: int
    e2: int
    middle: int
    t1: str
    t2: str

    @property
    def type(self) -> str:
        return O if self.t1 == self.t2 else C


@dataclass(frozen=True)
class ClosedPair:
    """Two same-type edges from ``middle`` to one neighbor, split off without a virtual edge."""

    e1: int
    e2: int
    middle: int


@dataclass
class VirtualEdgeMap:
    """How the edges of a coarser graph arise from the edges of ``fine``.

    ``sources[i]`` is either the id of the fine edge kept as coarse edge ``i``
    or the :class:`VirtualEdge` it replaces. Closed pairs vanish from the
    coarse graph altogether.
    """

    fine: TypedMultiGraph
    sources: list
    closed: list[ClosedPair] = field(default_factory=list)

    def pairs_at(self, v: int) -> int:
        return sum(1 for s in self.sources if isinstance(s, VirtualEdge) and s.middle == v) + sum(
            1 for p in self.closed if p.middle == v
        )


@dataclass(frozen=True)
class HalvingSchedule:
    delta: int
    k: int
    eps: tuple[float, ...]
    extra_levels: int = 2


def halving_schedule(delta: int) -> HalvingSchedule:
    """``k = ceil(log2 delta)`` levels with ``eps_i = 2^(i/2) / (4 sqrt(delta))``."""
    k = (delta - 1).bit_length() if delta >= 1 else 0
    eps = tuple(2 ** (i / 2) / (4 * math.sqrt(delta)) for i in range(k))
    return HalvingSchedule(delta, k, eps)


def _pair_off(g: TypedMultiGraph, orientation: Orientation, quota: list[int]) -> tuple[TypedMultiGraph, VirtualEdgeMap]:
    """Let every node ``v`` split off up to ``quota[v]`` pairs of its edges.

    A node pairs its outgoing edges first (lowest ids first); a node still
    short of its quota may take incident edges nobody has used. Edges of
    different types leading to the same neighbor are never paired together.
    """
    used = [False] * g.m
    out: list[list[int]] = [[] for _ in range(g.n)]
    for e, head in enumerate(orientation.heads):
        out[g.edges[e][head]].append(e)
    pairs: list[tuple[int, int, int]] = []

    def take(v: int, candidates: list[int], want: int) -> int:
        pool = [e for e in candidates if not used[e]]
        got = 0
        for i, e in enumerate(pool):
            if got >= want:
                break
            if used[e]:
                continue
            u, t = g.other(e, v), g.edges[e][2]
            for f in pool[i + 1:]:
                if not used[f] and (g.other(f, v) != u or g.edges[f][2] == t):
                    used[e] = used[f] = True
                    pairs.append((v, e, f))
                    got += 1
                    break
        return got

    got = [take(v, out[v], quota[v]) for v in range(g.n)]
    for v in range(g.n):
        if got[v] < quota[v]:
            take(v, [e for e, _ in g.incidence(v)], quota[v] - got[v])

    edges = []
    sources: list = []
    for e in range(g.m):
        if not used[e]:
            edges.append(g.edges[e])
            sources.append(e)
    closed = []
    for v, e1, e2 in pairs:
        u, w = g.other(e1, v), g.other(e2, v)
        if u == w:
            closed.append(ClosedPair(e1, e2, v))
            continue
        ve = VirtualEdge(e1, e2, v, g.edges[e1][2], g.edges[e2][2])
        edges.append((u, w, ve.type))
        sources.append(ve)
    return TypedMultiGraph(g.n, edges), VirtualEdgeMap(g, sources, closed)


def halve_step(g: TypedMultiGraph, eps: float, ledger: CostLedger | None = None) -> tuple[TypedMultiGraph, VirtualEdgeMap]:
    """One halving level: every node splits off ``floor(outdeg / 2)`` pairs of out-edges."""
    orientation = eps_balanced_orientation(g, eps, ledger)
    quota = [o // 2 for o in orientation.outdegrees(g)]
    return _pair_off(g, orientation, quota)


def outdeg2_step(g: TypedMultiGraph, ledger: CostLedger | None = None) -> tuple[TypedMultiGraph, VirtualEdgeMap]:
    """One of the two final levels: each node of degree >= 5 splits off one pair."""
    orientation = outdeg2_orientation(g, ledger)
    quota = [1 if g.degree(v) >= 5 else 0 for v in range(g.n)]
    return _pair_off(g, orientation, quota)


def unfold_labels(labeling: Labeling, vmap: VirtualEdgeMap) -> Labeling:
    """Translate a labeling of the coarse graph back to ``vmap.fine``.

    The middle node of each virtual edge gets one R and one B half; the outer
    ends keep the colors of the virtual edge's halves.
    """
    fine = vmap.fine
    if len(labeling) != len(vmap.sources):
        raise InconsistentInput(f"labeling has {len(labeling)} edges, map has {len(vmap.sources)}")
    out = Labeling.empty(fine.m)
    for ce, src in enumerate(vmap.sources):
        a, b = labeling.halves[ce]
        if a is None or b is None:
            raise InconsistentInput(f"edge {ce} is not fully labeled")
        if isinstance(src, int):
            out.halves[src] = [a, b]
            continue
        if (a == b) != (src.type == C):
            raise InconsistentInput(f"edge {ce} of type {src.type} labeled ({a}, {b})")
        v = src.middle
        s_v1 = fine.side_of(src.e1, v)
        out.paint(fine, src.e1, 1 - s_v1, a)
        s_v2 = fine.side_of(src.e2, v)
        out.paint(fine, src.e2, s_v2, flip(out[(src.e1, s_v1)]))
        assert out[(src.e2, 1 - s_v2)] == b
    for pair in vmap.closed:
        out.paint(fine, pair.e1, fine.side_of(pair.e1, pair.middle), R)
        out.paint(fine, pair.e2, fine.side_of(pair.e2, pair.middle), B)
    return out


@dataclass
class DegreeReduction:
    schedule: HalvingSchedule
    graphs: list[TypedMultiGraph]
    maps: list[VirtualEdgeMap]

    @property
    def max_degrees(self) -> list[int]:
        return [h.max_degree for h in self.graphs]


def reduce_degree(g: TypedMultiGraph, ledger: CostLedger | None = None) -> DegreeReduction:
    """Build ``G_0 = g, ..., G_{k+2}`` with ``G_{k+2}`` of maximum degree at most 4."""
    ledger = ledger if ledger is not None else CostLedger()
    schedule = halving_schedule(g.max_degree)
    graphs, maps = [g], []
    for i, eps in enumerate(schedule.eps):
        with ledger.phase(f"halve[{i}]", overhead=2**i):
            nxt, vmap = halve_step(graphs[-1], eps, ledger)
        graphs.append(nxt)
        maps.append(vmap)
    for j in range(schedule.extra_levels):
        with ledger.phase(f"extra[{j}]", overhead=2 ** (schedule.k + j)):
            nxt, vmap = outdeg2_step(graphs[-1], ledger)
        graphs.append(nxt)
        maps.append(vmap)
    return DegreeReduction(schedule, graphs, maps)


def balanced_split(g: TypedMultiGraph, ledger: CostLedger | None = None) -> tuple[Labeling, CostLedger]:
    """Half-edge labeling with ``d_R(v), d_B(v)`` in ``[d(v)/2 - 1, d(v)/2 + 1]``."""
    ledger = ledger if ledger is not None else CostLedger()
    if g.m == 0:
        return Labeling.empty(0), ledger
    with ledger.phase("split"):
        red = reduce_degree(g, ledger)
        final = red.graphs[-1]
        if final.max_degree > 4:
            raise AssertionError(f"degree reduction stopped at max degree {final.max_degree}")
        with ledger.phase("lemma31", overhead=2 ** (red.schedule.k + 2)):
            lab = lemma31_split(final, ledger)
    for vmap in reversed(red.maps):
        lab = unfold_labels(lab, vmap)
    return lab, ledger


def exact_split(
    g: TypedMultiGraph, mode: str = ROUND_DOWN, ledger: CostLedger | None = None
) -> tuple[Labeling, CostLedger]:
    """Edge 2-coloring with ``d_R(v)`` in ``{floor(d/2), floor(d/2) + 1}``.

    ``mode="round_up"`` swaps the colors, giving ``d_R(v)`` in
    ``{ceil(d/2) - 1, ceil(d/2)}``. Even-degree nodes are handled by a maximal
    matching (colored red) and by pairing the edges of the unmatched ones into
    ``O`` edges; the all-odd remainder goes through :func:`balanced_split`.
    """
    if mode not in (ROUND_DOWN, ROUND_UP):
        raise ValueError(f"unknown mode {mode!r}")
    if not g.all_c():
        raise EdgeTypeError("exact_split needs every edge to be of type C")
    ledger = ledger if ledger is not None else CostLedger()
    if g.m == 0:
        return Labeling.empty(0), ledger
    with ledger.phase("exact"):
        even = [g.degree(v) % 2 == 0 for v in range(g.n)]
        inside = [e for e, (u, v, _) in enumerate(g.edges) if even[u] and even[v]]
        with ledger.phase("matching"):
            matching = maximal_matching(g, inside, ledger)
        in_matching = set(matching)
        matched = {x for e in matching for x in g.edges[e][:2]}
        free = [v for v in range(g.n) if even[v] and v not in matched and g.degree(v) > 0]
        free_set = set(free)

        sources: list = []
        edges = []
        for e, (u, v, t) in enumerate(g.edges):
            if e not in in_matching and u not in free_set and v not in free_set:
                sources.append(e)
                edges.append((u, v, t))
        closed = []
        for v in free:
            inc = [e for e, _ in g.incidence(v)]
            for e1, e2 in zip(inc[0::2], inc[1::2]):
                u, w = g.other(e1, v), g.other(e2, v)
                if u == w:
                    closed.append(ClosedPair(e1, e2, v))
                else:
                    sources.append(VirtualEdge(e1, e2, v, C, C))
                    edges.append((u, w, O))
        residual = TypedMultiGraph(g.n, edges)
        with ledger.phase("residual", overhead=2):
            res_lab, _ = balanced_split(residual, ledger)
    lab = unfold_labels(res_lab, VirtualEdgeMap(g, sources, closed))
    for e in matching:
        lab.halves[e] = [R, R]
    if mode == ROUND_UP:
        lab = lab.swapped()
    return lab, ledger


def eps_split(g: TypedMultiGraph, eps: float, ledger: CostLedger | None = None) -> tuple[Labeling, CostLedger]:
    """``d_R, d_B`` within ``[(1 - eps) d/2 - 1, (1 + eps) d/2 + 1]`` via node splitting."""
    virtual, _ = split_nodes_epsilon(g, eps)
    return balanced_split(virtual, ledger)

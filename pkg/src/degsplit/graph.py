"""Typed multigraphs with half-edge identity, generators and JSON I/O.

Every edge carries a type: ``C`` (both half-edges get the same color) or
``O`` (the two half-edges get different colors, i.e. the edge is oriented).
Half-edges are addressed as ``(edge_id, side)`` where ``side`` 0 is the half
at ``endpoint0`` and side 1 the half at ``endpoint1``.
"""

from __future__ import annotations

import io
import json
import math
import os
from collections import deque
from typing import IO, Iterable, Sequence, Union

import numpy as np

C = "C"
O = "O"
R = "R"
B = "B"
EDGE_TYPES = (C, O)
COLORS = (R, B)

PathOrStream = Union[str, os.PathLike, IO[str]]


class GraphError(ValueError):
    pass


class SelfLoop(GraphError):
    def __init__(self, node: int):
        super().__init__(f"self-loop at node {node}")
        self.node = node


class NodeOutOfRange(GraphError):
    pass


class ParityError(GraphError):
    pass


class RetryExhausted(GraphError):
    pass


class BadParam(GraphError):
    pass


class RangeError(ValueError):
    """A numeric parameter (degree bound, target value) is outside its domain."""


class ParseError(ValueError):
    """Malformed JSON payload; carries the line and/or field where it failed."""

    def __init__(self, message: str, *, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.line = line
        self.field = field


def flip(color: str) -> str:
    return B if color == R else R


class TypedMultiGraph:
    """Multigraph without self-loops; edges are ``(endpoint0, endpoint1, type)``.

    Edge ids are the positions in ``edges``. The incidence list of a node holds
    its half-edges ``(edge_id, side)`` in increasing edge-id order. Instances
    are treated as immutable.
    """

    __slots__ = ("n", "edges", "_incidence", "_degrees")

    def __init__(self, n: int, edges: Iterable[Sequence]):
        if n < 0:
            raise BadParam(f"node count must be non-negative, got {n}")
        self.n = int(n)
        normalized = []
        incidence: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for e, edge in enumerate(edges):
            u, v, t = edge
            u, v = int(u), int(v)
            if t not in EDGE_TYPES:
                raise BadParam(f"edge {e}: unknown type {t!r}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise NodeOutOfRange(f"edge {e}: ({u}, {v}) outside 0..{self.n - 1}")
            if u == v:
                raise SelfLoop(u)
            normalized.append((u, v, t))
            incidence[u].append((e, 0))
            incidence[v].append((e, 1))
        self.edges: tuple[tuple[int, int, str], ...] = tuple(normalized)
        self._incidence = tuple(tuple(lst) for lst in incidence)
        self._degrees = tuple(len(lst) for lst in incidence)

    @property
    def m(self) -> int:
        return len(self.edges)

    def incidence(self, v: int) -> tuple[tuple[int, int], ...]:
        return self._incidence[v]

    def degree(self, v: int) -> int:
        return self._degrees[v]

    def degrees(self) -> list[int]:
        return list(self._degrees)

    @property
    def max_degree(self) -> int:
        return max(self._degrees, default=0)

    def endpoint(self, e: int, side: int) -> int:
        return self.edges[e][side]

    def edge_type(self, e: int) -> str:
        return self.edges[e][2]

    def other(self, e: int, v: int) -> int:
        u, w, _ = self.edges[e]
        return w if u == v else u

    def side_of(self, e: int, v: int) -> int:
        u, w, _ = self.edges[e]
        if u == v:
            return 0
        if w == v:
            return 1
        raise GraphError(f"node {v} is not an endpoint of edge {e}")

    def neighbors(self, v: int) -> list[int]:
        """Neighbors with multiplicity, in incidence order."""
        return [self.edges[e][1 - s] for e, s in self._incidence[v]]

    def all_c(self) -> bool:
        return all(t == C for _, _, t in self.edges)

    def subgraph(self, edge_ids: Iterable[int], edge_type: str | None = None) -> "TypedMultiGraph":
        """Graph on the same node set keeping the given edges (renumbered in the given order)."""
        return TypedMultiGraph(
            self.n,
            [(u, v, edge_type or t) for u, v, t in (self.edges[e] for e in edge_ids)],
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TypedMultiGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"TypedMultiGraph(n={self.n}, m={self.m}, max_degree={self.max_degree})"


class Labeling:
    """R/B assignment to half-edges; ``None`` marks an unset half."""

    __slots__ = ("halves",)

    def __init__(self, halves: Iterable[Sequence[str | None]]):
        self.halves = [[h[0], h[1]] for h in halves]

    @classmethod
    def empty(cls, m: int) -> "Labeling":
        return cls([None, None] for _ in range(m))

    @classmethod
    def from_edge_colors(cls, colors: Iterable[str]) -> "Labeling":
        return cls([c, c] for c in colors)

    def __len__(self) -> int:
        return len(self.halves)

    def __getitem__(self, half: tuple[int, int]) -> str | None:
        e, side = half
        return self.halves[e][side]

    def __setitem__(self, half: tuple[int, int], color: str | None) -> None:
        e, side = half
        self.halves[e][side] = color

    def paint(self, g: TypedMultiGraph, e: int, side: int, color: str) -> None:
        """Color one half-edge and force the other half by the edge type."""
        self.halves[e][side] = color
        self.halves[e][1 - side] = color if g.edges[e][2] == C else flip(color)

    def is_total(self) -> bool:
        return all(a is not None and b is not None for a, b in self.halves)

    def edge_color(self, e: int) -> str | None:
        a, b = self.halves[e]
        return a if a == b else None

    def swapped(self) -> "Labeling":
        return Labeling([[flip(a) if a else a, flip(b) if b else b] for a, b in self.halves])

    def copy(self) -> "Labeling":
        return Labeling(self.halves)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Labeling):
            return NotImplemented
        return self.halves == other.halves

    def __repr__(self) -> str:
        return f"Labeling(m={len(self.halves)})"


class Orientation:
    """Per-edge direction: 0 means endpoint0 -> endpoint1, 1 the reverse."""

    __slots__ = ("heads",)

    def __init__(self, heads: Iterable[int]):
        self.heads = [int(h) for h in heads]

    def __len__(self) -> int:
        return len(self.heads)

    def tail(self, g: TypedMultiGraph, e: int) -> int:
        return g.edges[e][self.heads[e]]

    def head(self, g: TypedMultiGraph, e: int) -> int:
        return g.edges[e][1 - self.heads[e]]

    def outdegrees(self, g: TypedMultiGraph) -> list[int]:
        out = [0] * g.n
        for e, h in enumerate(self.heads):
            out[g.edges[e][h]] += 1
        return out

    def indegrees(self, g: TypedMultiGraph) -> list[int]:
        out = self.outdegrees(g)
        return [d - o for d, o in zip(g.degrees(), out)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Orientation):
            return NotImplemented
        return self.heads == other.heads

    def __repr__(self) -> str:
        return f"Orientation(m={len(self.heads)})"


def build_graph(n: int, edge_list: Iterable[Sequence]) -> TypedMultiGraph:
    return TypedMultiGraph(n, edge_list)


# ---------------------------------------------------------------------------
# generators


def _assign_types(rng: np.random.Generator, m: int, typed: bool) -> list[str]:
    if not typed:
        return [C] * m
    coins = rng.random(m) < 0.5
    return [O if c else C for c in coins]


def gen_random_regular(
    n: int,
    delta: int,
    seed: int = 0,
    *,
    typed: bool = False,
    max_retries: int | None = None,
) -> TypedMultiGraph:
    """Random delta-regular multigraph from the configuration model.

    Stub pairings that form a self-loop are re-drawn by swapping partners with
    a random other pairing; parallel edges are kept.
    """
    if delta < 1:
        raise BadParam(f"delta must be >= 1, got {delta}")
    if n < 2:
        raise BadParam(f"need at least 2 nodes, got {n}")
    if (n * delta) % 2:
        raise ParityError(f"n * delta = {n * delta} is odd")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), delta)
    rng.shuffle(stubs)
    pairs = stubs.reshape(-1, 2)
    retries = 0
    budget = 100 * n if max_retries is None else max_retries
    n_pairs = len(pairs)
    loops = list(np.flatnonzero(pairs[:, 0] == pairs[:, 1]))
    while loops:
        i = loops.pop()
        if pairs[i, 0] != pairs[i, 1]:
            continue
        if retries >= budget:
            raise RetryExhausted(f"could not remove self-loops after {retries} retries")
        retries += 1
        j = int(rng.integers(n_pairs))
        a = pairs[i, 0]
        b, c = pairs[j]
        if j == i or b == a or c == a:
            loops.append(i)
            continue
        pairs[i] = (a, b)
        pairs[j] = (a, c)
    types = _assign_types(rng, n_pairs, typed)
    edges = [(int(min(u, v)), int(max(u, v)), t) for (u, v), t in zip(pairs, types)]
    return TypedMultiGraph(n, edges)


def gen_random_max_degree(
    n: int,
    delta: int,
    seed: int = 0,
    *,
    fill: float = 0.85,
    typed: bool = False,
    simple: bool = False,
) -> TypedMultiGraph:
    """Random multigraph with maximum degree at most ``delta``.

    Edges are drawn between uniformly random pairs of nodes that still have
    spare degree, until about ``fill * n * delta / 2`` edges exist or no pair
    is left. ``simple=True`` rejects parallel edges.
    """
    if n < 2 or delta < 1:
        raise BadParam("need n >= 2 and delta >= 1")
    rng = np.random.default_rng(seed)
    target = int(fill * n * delta / 2)
    deg = np.zeros(n, dtype=int)
    seen: set[tuple[int, int]] = set()
    pairs = []
    misses = 0
    while len(pairs) < target and misses < 20 * n:
        free = np.flatnonzero(deg < delta)
        if len(free) < 2:
            break
        u, v = rng.choice(free, size=2, replace=False)
        u, v = int(min(u, v)), int(max(u, v))
        if simple and (u, v) in seen:
            misses += 1
            continue
        seen.add((u, v))
        pairs.append((u, v))
        deg[u] += 1
        deg[v] += 1
    types = _assign_types(rng, len(pairs), typed)
    return TypedMultiGraph(n, [(u, v, t) for (u, v), t in zip(pairs, types)])


def gen_structured(kind: str, *params: int, edge_type: str = C) -> TypedMultiGraph:
    """Named graphs: ``path(n)``, ``cycle(n)``, ``complete(n)``, ``star(leaves)``,
    ``full_tree(delta, depth)``.

    ``full_tree`` has a root with ``delta`` children and every other internal
    node has ``delta - 1`` children, so internal degrees are all ``delta``.
    """
    t = edge_type
    if kind == "path":
        (n,) = params
        if n < 1:
            raise BadParam("path needs at least one node")
        return TypedMultiGraph(n, [(i, i + 1, t) for i in range(n - 1)])
    if kind == "cycle":
        (n,) = params
        if n < 3:
            raise BadParam("cycle needs at least 3 nodes")
        return TypedMultiGraph(n, [(i, (i + 1) % n, t) for i in range(n)])
    if kind == "complete":
        (n,) = params
        if n < 1:
            raise BadParam("complete graph needs at least one node")
        return TypedMultiGraph(n, [(i, j, t) for i in range(n) for j in range(i + 1, n)])
    if kind == "star":
        (leaves,) = params
        if leaves < 1:
            raise BadParam("star needs at least one leaf")
        return TypedMultiGraph(leaves + 1, [(0, i, t) for i in range(1, leaves + 1)])
    if kind == "full_tree":
        delta, depth = params
        if delta < 2 or depth < 0:
            raise BadParam("full_tree needs delta >= 2 and depth >= 0")
        edges = []
        frontier = [0]
        n = 1
        for level in range(depth):
            nxt = []
            for parent in frontier:
                for _ in range(delta if level == 0 else delta - 1):
                    edges.append((parent, n, t))
                    nxt.append(n)
                    n += 1
            frontier = nxt
        return TypedMultiGraph(n, edges)
    raise BadParam(f"unknown graph kind {kind!r}")


# ---------------------------------------------------------------------------
# structure


def girth(g: TypedMultiGraph) -> float:
    """Length of a shortest cycle; parallel edges count as a 2-cycle. ``inf`` for forests."""
    best = math.inf
    for root in range(g.n):
        dist = {root: 0}
        via = {root: -1}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            if 2 * dist[x] + 1 >= best:
                break
            for e, s in g.incidence(x):
                if e == via[x]:
                    continue
                y = g.edges[e][1 - s]
                if y not in dist:
                    dist[y] = dist[x] + 1
                    via[y] = e
                    queue.append(y)
                else:
                    best = min(best, dist[x] + dist[y] + 1)
    return best


def bfs_tree(
    g: TypedMultiGraph,
    sources: Iterable[int],
    allowed_edges: set[int] | None = None,
) -> tuple[dict[int, int], dict[int, int]]:
    """Multi-source BFS; returns ``(depth, parent_edge)`` for every reached node.

    Sources are visited in the given order and edges in id order, so ties go
    to earlier sources.
    """
    depth: dict[int, int] = {}
    parent: dict[int, int] = {}
    queue: deque[int] = deque()
    for s in sources:
        if s not in depth:
            depth[s] = 0
            parent[s] = -1
            queue.append(s)
    while queue:
        x = queue.popleft()
        for e, side in g.incidence(x):
            if allowed_edges is not None and e not in allowed_edges:
                continue
            y = g.edges[e][1 - side]
            if y not in depth:
                depth[y] = depth[x] + 1
                parent[y] = e
                queue.append(y)
    return depth, parent


def find_cycle(
    g: TypedMultiGraph, nodes: Sequence[int], edges: Iterable[int]
) -> tuple[list[int], list[int]] | None:
    """A cycle inside the subgraph spanned by ``edges`` over the connected ``nodes``.

    Returns ``(cycle_nodes, cycle_edges)`` with ``cycle_edges[i]`` joining
    ``cycle_nodes[i]`` and ``cycle_nodes[i + 1]`` (cyclically), or ``None`` when
    the subgraph is a tree. Uses the lowest-id non-tree edge of a BFS tree.
    """
    edge_set = set(edges)
    if not nodes:
        return None
    depth, parent = bfs_tree(g, [min(nodes)], edge_set)
    tree_edges = {e for e in parent.values() if e >= 0}
    extra = sorted(edge_set - tree_edges)
    if not extra:
        return None
    f = extra[0]
    x, z, _ = g.edges[f]
    # climb both endpoints to their lowest common ancestor
    up_x, up_z = [x], [z]
    ex, ez = [], []
    a, b = x, z
    while a != b:
        if depth[a] >= depth[b]:
            e = parent[a]
            ex.append(e)
            a = g.other(e, a)
            up_x.append(a)
        else:
            e = parent[b]
            ez.append(e)
            b = g.other(e, b)
            up_z.append(b)
    # x -> ... -> lca -> ... -> z -> (f) -> x
    cycle_nodes = up_x + list(reversed(up_z[:-1]))
    cycle_edges = ex + list(reversed(ez)) + [f]
    return cycle_nodes, cycle_edges


def split_nodes_epsilon(g: TypedMultiGraph, eps: float) -> tuple[TypedMultiGraph, list[int]]:
    """Replace every node of degree >= ceil(2/eps) by virtual nodes of degree in [s, 2s).

    ``s = ceil(2/eps)``. Half-edges are handed out in incidence order; edge ids
    and types are unchanged. Returns the new graph and the map from virtual
    node to original node.
    """
    if not eps > 0:
        raise BadParam(f"eps must be positive, got {eps}")
    s = math.ceil(round(2.0 / eps, 9))
    owner: dict[tuple[int, int], int] = {}
    back: list[int] = []
    for v in range(g.n):
        inc = g.incidence(v)
        d = len(inc)
        parts = d // s if d >= s else 1
        base, extra = divmod(d, parts) if d else (0, 0)
        pos = 0
        for p in range(parts):
            size = base + (1 if p < extra else 0)
            vid = len(back)
            back.append(v)
            for half in inc[pos:pos + size]:
                owner[half] = vid
            pos += size
    edges = [(owner[(e, 0)], owner[(e, 1)], t) for e, (_, _, t) in enumerate(g.edges)]
    return TypedMultiGraph(len(back), edges), back


# ---------------------------------------------------------------------------
# JSON


def _dump(payload: dict, dest: PathOrStream | None) -> str:
    text = json.dumps(payload, separators=(",", ":")) + "\n"
    if dest is None:
        return text
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def to_payload(obj: TypedMultiGraph | Labeling | Orientation) -> dict:
    if isinstance(obj, TypedMultiGraph):
        return {"n": obj.n, "edges": [[u, v, t] for u, v, t in obj.edges]}
    if isinstance(obj, Labeling):
        if not obj.is_total():
            raise ValueError("only total labelings are serialized")
        return {"labels": [[a, b] for a, b in obj.halves]}
    if isinstance(obj, Orientation):
        return {"orient": list(obj.heads)}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(obj: TypedMultiGraph | Labeling | Orientation, dest: PathOrStream | None = None) -> str:
    """Serialize compactly (one line, stable key order); also returns the text."""
    return _dump(to_payload(obj), dest)


def _load(src: PathOrStream | dict) -> dict:
    if isinstance(src, dict):
        return src
    if hasattr(src, "read"):
        text = src.read()
    elif isinstance(src, str) and src.lstrip().startswith("{"):
        text = src
    else:
        with open(src, encoding="utf-8") as fh:
            text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    if not isinstance(data, dict):
        raise ParseError("top-level value must be an object", line=1)
    return data


def _int(value, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"expected integer, got {value!r}", field=field)
    return value


def graph_from_payload(data: dict) -> TypedMultiGraph:
    if "n" not in data or "edges" not in data:
        raise ParseError("graph needs 'n' and 'edges'", field="n" if "n" not in data else "edges")
    n = _int(data["n"], "n")
    raw = data["edges"]
    if not isinstance(raw, list):
        raise ParseError("'edges' must be a list", field="edges")
    edges = []
    for i, item in enumerate(raw):
        if not isinstance(item, list) or len(item) != 3:
            raise ParseError("edge must be [u, v, type]", field=f"edges[{i}]")
        u = _int(item[0], f"edges[{i}][0]")
        v = _int(item[1], f"edges[{i}][1]")
        if item[2] not in EDGE_TYPES:
            raise ParseError(f"unknown edge type {item[2]!r}", field=f"edges[{i}][2]")
        edges.append((u, v, item[2]))
    try:
        return TypedMultiGraph(n, edges)
    except GraphError as exc:
        raise ParseError(str(exc), field="edges") from exc


def labeling_from_payload(data: dict, graph: TypedMultiGraph | None = None) -> Labeling:
    raw = data.get("labels")
    if not isinstance(raw, list):
        raise ParseError("labeling needs a 'labels' list", field="labels")
    if graph is not None and len(raw) != graph.m:
        raise ParseError(f"{len(raw)} labels for a graph with {graph.m} edges", field="labels")
    halves = []
    for i, item in enumerate(raw):
        if not isinstance(item, list) or len(item) != 2 or any(c not in COLORS for c in item):
            raise ParseError("label must be a pair of 'R'/'B'", field=f"labels[{i}]")
        halves.append(item)
    return Labeling(halves)


def orientation_from_payload(data: dict, graph: TypedMultiGraph | None = None) -> Orientation:
    raw = data.get("orient")
    if not isinstance(raw, list):
        raise ParseError("orientation needs an 'orient' list", field="orient")
    if graph is not None and len(raw) != graph.m:
        raise ParseError(f"{len(raw)} directions for a graph with {graph.m} edges", field="orient")
    for i, h in enumerate(raw):
        if h not in (0, 1) or isinstance(h, bool):
            raise ParseError(f"direction must be 0 or 1, got {h!r}", field=f"orient[{i}]")
    return Orientation(raw)


def read_json(
    src: PathOrStream | dict, graph: TypedMultiGraph | None = None
) -> TypedMultiGraph | Labeling | Orientation:
    """Read any of the three payload kinds, detected by its keys.

    When ``graph`` is given, labelings and orientations are checked against
    its edge count.
    """
    data = _load(src)
    if "edges" in data:
        return graph_from_payload(data)
    if "labels" in data:
        return labeling_from_payload(data, graph)
    if "orient" in data:
        return orientation_from_payload(data, graph)
    raise ParseError("unrecognized payload; expected 'edges', 'labels' or 'orient'")


def read_graph(src: PathOrStream | dict) -> TypedMultiGraph:
    obj = read_json(src)
    if not isinstance(obj, TypedMultiGraph):
        raise ParseError("expected a graph payload", field="edges")
    return obj


def read_labeling(src: PathOrStream | dict, graph: TypedMultiGraph | None = None) -> Labeling:
    return labeling_from_payload(_load(src), graph)


def read_orientation(src: PathOrStream | dict, graph: TypedMultiGraph | None = None) -> Orientation:
    return orientation_from_payload(_load(src), graph)


def dumps(obj: TypedMultiGraph | Labeling | Orientation) -> str:
    buf = io.StringIO()
    write_json(obj, buf)
    return buf.getvalue()

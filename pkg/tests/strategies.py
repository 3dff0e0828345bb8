"""Hypothesis strategies for typed multigraphs."""

from hypothesis import strategies as st

from degsplit.graph import C, O, TypedMultiGraph


@st.composite
def multigraphs(draw, max_nodes=12, max_edges=30, types=(C, O), min_edges=0):
    n = draw(st.integers(2, max_nodes))
    m = draw(st.integers(min_edges, max_edges))
    edges = []
    for _ in range(m):
        u = draw(st.integers(0, n - 1))
        v = draw(st.integers(0, n - 2))
        if v >= u:
            v += 1
        edges.append((u, v, draw(st.sampled_from(types))))
    return TypedMultiGraph(n, edges)


def c_multigraphs(**kw):
    return multigraphs(types=(C,), **kw)

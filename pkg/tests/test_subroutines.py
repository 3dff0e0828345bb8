import pytest
from hypothesis import given

from degsplit.graph import TypedMultiGraph, bfs_tree, gen_random_regular, gen_structured
from degsplit.subroutines import (
    BO,
    MM,
    RS32,
    SO,
    CostLedger,
    LedgerEntry,
    balanced_orientation,
    eps_balanced_orientation,
    maximal_matching,
    outdeg2_orientation,
    ruling_set_32,
    sinkless_orientation,
)

from strategies import multigraphs


def _sinkless_ok(g, ori):
    out = ori.outdegrees(g)
    return all(out[v] >= 1 for v in range(g.n) if g.degree(v) >= 3)


def test_sinkless_cycle():
    g = gen_structured("cycle", 3)
    ori = sinkless_orientation(g)
    assert ori.outdegrees(g) == [1, 1, 1]


def test_sinkless_k4():
    g = gen_structured("complete", 4)
    assert _sinkless_ok(g, sinkless_orientation(g))


def test_sinkless_star():
    g = gen_structured("star", 5)
    assert sinkless_orientation(g).outdegrees(g)[0] >= 1


def test_sinkless_tree():
    g = gen_structured("full_tree", 3, 3)
    assert _sinkless_ok(g, sinkless_orientation(g))


@given(multigraphs(max_nodes=14, max_edges=40))
def test_sinkless_property(g):
    ledger = CostLedger()
    ori = sinkless_orientation(g, ledger)
    assert _sinkless_ok(g, ori)
    assert [(e.unit, e.count) for e in ledger] == [(SO, 1)]


@given(multigraphs(max_nodes=14, max_edges=40))
def test_balanced_orientation_discrepancy(g):
    ledger = CostLedger()
    ori = balanced_orientation(g, ledger)
    out, inn = ori.outdegrees(g), ori.indegrees(g)
    for v in range(g.n):
        assert abs(out[v] - inn[v]) <= 1
        if g.degree(v) % 2 == 0:
            assert out[v] == inn[v]
    assert [e.unit for e in ledger] == [BO]
    assert ledger.entries[0].param == g.max_degree


@given(multigraphs(max_nodes=14, max_edges=40))
def test_outdeg2(g):
    ledger = CostLedger()
    out = outdeg2_orientation(g, ledger).outdegrees(g)
    assert all(out[v] >= 2 for v in range(g.n) if g.degree(v) >= 5)
    assert [e.unit for e in ledger] == [SO]


def test_eps_balanced_param():
    ledger = CostLedger()
    eps_balanced_orientation(gen_structured("cycle", 5), 0.125, ledger)
    assert ledger.entries[0].param == 8.0
    with pytest.raises(ValueError):
        eps_balanced_orientation(gen_structured("cycle", 5), 0.0)


@given(multigraphs(max_nodes=14, max_edges=40))
def test_maximal_matching(g):
    ledger = CostLedger()
    mm = maximal_matching(g, ledger=ledger)
    ends = [x for e in mm for x in g.edges[e][:2]]
    assert len(ends) == len(set(ends))
    matched = set(ends)
    assert all(u in matched or v in matched for u, v, _ in g.edges)
    assert [e.unit for e in ledger] == [MM]


def test_matching_restricted():
    g = gen_structured("path", 4)
    assert maximal_matching(g, edges=[1]) == [1]
    assert maximal_matching(g) == [0, 2]


@given(multigraphs(max_nodes=16, max_edges=30))
def test_ruling_set(g):
    ledger = CostLedger()
    members = ruling_set_32(g, ledger)
    dist_from = {v: bfs_tree(g, [v])[0] for v in members}
    for a in members:
        for b in members:
            if a < b:
                assert dist_from[a].get(b, 99) >= 3
    for v in range(g.n):
        assert any(dist_from[c].get(v, 99) <= 2 for c in members)
    assert [e.unit for e in ledger] == [RS32]


def test_ledger_phases_multiply():
    ledger = CostLedger()
    with ledger.phase("a", 2):
        ledger.record(SO)
        with ledger.phase("b", 3):
            ledger.record(BO, param=4.0)
    ledger.record(MM, count=2)
    assert [(e.phase, e.overhead) for e in ledger] == [("a", 2), ("a/b", 6), ("", 1)]
    assert ledger.count(MM) == 2 and ledger.summary() == {SO: 1, BO: 1, MM: 2}


def test_ledger_rejects_bad_entries():
    ledger = CostLedger()
    with pytest.raises(ValueError):
        ledger.record("FOO")
    with pytest.raises(ValueError):
        ledger.record(SO, count=0)


def test_ledger_jsonl_roundtrip():
    ledger = CostLedger([LedgerEntry("x/y", BO, 1, 4, 2.5), LedgerEntry("", SO)])
    assert CostLedger.from_jsonl(ledger.to_jsonl()).entries == ledger.entries


def test_ledger_concatenation():
    a, b = CostLedger(), CostLedger()
    sinkless_orientation(gen_structured("cycle", 4), a)
    maximal_matching(gen_structured("cycle", 4), ledger=b)
    both = CostLedger(list(a.entries))
    both.extend(b)
    assert [e.unit for e in both] == [SO, MM]


def test_regular_graphs_with_parallel_edges():
    g = TypedMultiGraph(2, [(0, 1, "C")] * 4)
    assert _sinkless_ok(g, sinkless_orientation(g))
    out = balanced_orientation(g).outdegrees(g)
    assert out == [2, 2]
    assert _sinkless_ok(gen_random_regular(50, 3, 1), sinkless_orientation(gen_random_regular(50, 3, 1)))

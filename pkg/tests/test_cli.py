import json

import pytest

from degsplit import graph as gr
from degsplit.cli import main
from degsplit.verify import check_eq1, check_pi


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def regular(tmp_path, capsys):
    path = tmp_path / "g.json"
    assert run(capsys, "gen", "regular", "--n", 40, "--delta", 6, "--seed", 3, "--out", path)[0] == 0
    return path


def test_gen_stdout(capsys):
    code, out, _ = run(capsys, "gen", "cycle", "--n", 5)
    g = gr.read_graph(out)
    assert code == 0 and g.n == 5 and g.m == 5


def test_gen_typed_and_tree(capsys):
    code, out, _ = run(capsys, "gen", "maxdeg", "--n", 30, "--delta", 5, "--typed", "--seed", 1)
    assert code == 0 and gr.read_graph(out).max_degree <= 5
    code, out, _ = run(capsys, "gen", "tree", "--delta", 3, "--depth", 2, "--type", "O")
    g = gr.read_graph(out)
    assert g.n == 10 and all(t == gr.O for _, _, t in g.edges)


def test_gen_parity_error(capsys):
    code, _, err = run(capsys, "gen", "regular", "--n", 5, "--delta", 3)
    assert code == 2 and "error" in err


def test_usage_error_from_argparse():
    with pytest.raises(SystemExit) as info:
        main(["solve", "nonsense", "g.json"])
    assert info.value.code == 2


def test_solve_split_report(tmp_path, capsys):
    gpath = tmp_path / "g.json"
    run(capsys, "gen", "maxdeg", "--n", 60, "--delta", 9, "--typed", "--out", gpath)
    sol, rep, led = tmp_path / "s.json", tmp_path / "r.json", tmp_path / "l.jsonl"
    code, _, _ = run(capsys, "solve", "split", gpath, "--out", sol, "--report", rep, "--ledger", led)
    assert code == 0
    g = gr.read_graph(gpath)
    assert check_eq1(g, gr.read_labeling(sol, g))
    report = json.loads(rep.read_text())
    assert report["verdict"]["eq1"]["passed"] and report["ledger"]["BO"] >= 1
    entries = [json.loads(line) for line in led.read_text().splitlines()]
    totals = {}
    for e in entries:
        totals[e["unit"]] = totals.get(e["unit"], 0) + e["count"]
    assert totals == report["ledger"]


@pytest.mark.parametrize(
    "task,extra",
    [
        ("exact", ["--mode", "round_up"]),
        ("pi", ["--y", "2"]),
        ("orient", ["--rho1", "0.3", "--rho2", "0.3", "--seed", "4"]),
        ("sinkless", []),
        ("balanced", []),
    ],
)
def test_solve_tasks(regular, capsys, task, extra):
    code, out, err = run(capsys, "solve", task, regular, *extra)
    report = json.loads(err)
    assert code == 0 and report["verdict"] and all(v["passed"] for v in report["verdict"].values())
    assert gr.read_json(out) is not None


def test_solve_pi_plan_in_report(regular, capsys):
    code, out, err = run(capsys, "solve", "pi", regular, "--y", 1)
    assert code == 0 and json.loads(err)["plan"][-1][0] == 1
    g = gr.read_graph(regular)
    assert check_pi(g, 6, 1, gr.read_labeling(out, g))


def test_solve_pi_errors(regular, capsys):
    assert run(capsys, "solve", "pi", regular)[0] == 2
    assert run(capsys, "solve", "pi", regular, "--y", 9)[0] == 2


def test_solve_no_verify(regular, capsys):
    code, _, err = run(capsys, "solve", "split", regular, "--no-verify")
    assert code == 0 and json.loads(err)["verdict"] == {}


def test_solve_budget_exhausted(tmp_path, capsys):
    gpath = tmp_path / "g.json"
    run(capsys, "gen", "regular", "--n", 200, "--delta", 16, "--out", gpath)
    code, _, err = run(capsys, "solve", "orient", gpath, "--rho1", ".25", "--rho2", ".25", "--slack", "0", "--seed", "5", "--max-resample", "2")
    assert code == 1 and "resamples" in err


def test_verify_pass_and_fail(regular, tmp_path, capsys):
    sol = tmp_path / "s.json"
    run(capsys, "solve", "exact", regular, "--out", sol)
    code, out, _ = run(capsys, "verify", "--property", "eq2", regular, sol)
    assert code == 0 and json.loads(out.splitlines()[-1])["passed"]

    g = gr.read_graph(regular)
    blue = tmp_path / "blue.json"
    gr.write_json(gr.Labeling.from_edge_colors([gr.B] * g.m), open(blue, "w"))
    code, out, _ = run(capsys, "verify", "--property", "eq1", regular, blue)
    lines = out.splitlines()
    assert code == 1 and len(lines) == g.n + 1 and not json.loads(lines[-1])["passed"]


def test_verify_orientation(regular, tmp_path, capsys):
    sol = tmp_path / "o.json"
    run(capsys, "solve", "balanced", regular, "--out", sol)
    for prop in ("balanced", "sinkless", "unbalanced"):
        assert run(capsys, "verify", "--property", prop, regular, sol)[0] == 0


def test_verify_bad_solution_file(regular, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "verify", "--property", "eq1", regular, bad)[0] == 2


def test_oracle(tmp_path, capsys):
    k5 = tmp_path / "k5.json"
    run(capsys, "gen", "complete", "--n", 5, "--out", k5)
    code, out, _ = run(capsys, "oracle", "orientation", k5, "--rho1", 0, "--rho2", 0)
    assert code == 0 and json.loads(out) == {"sat": False, "witness": None}
    tri = tmp_path / "tri.json"
    run(capsys, "gen", "cycle", "--n", 3, "--out", tri)
    code, out, _ = run(capsys, "oracle", "labeling", tri, "--predicate", "eq2_down", "--count")
    assert json.loads(out)["count"] == 4


def test_oracle_too_large(regular, capsys):
    assert run(capsys, "oracle", "labeling", regular)[0] == 2


@pytest.mark.parametrize("fmt", ["text", "json"])
def test_bench(capsys, fmt):
    code, out, _ = run(capsys, "bench", "pi", "--sizes", 20, "--deltas", 4, "--format", fmt)
    assert code == 0
    if fmt == "json":
        rows = json.loads(out)
        assert [r["task"] for r in rows] == ["pi(0)", "pi(1)", "pi(2)"]
        assert all(r["plan_length"] <= 4 for r in rows)
    else:
        assert out.splitlines()[0].split()[:3] == ["n", "delta", "task"]


def test_bench_other_suites(capsys):
    for suite in ("split", "exact", "orient"):
        code, out, _ = run(capsys, "bench", suite, "--sizes", 30, "--deltas", 4, "--format", "json")
        assert code == 0 and len(json.loads(out)) == 1

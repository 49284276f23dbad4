import csv
import io
import json
import shutil
import subprocess
import sys

import pydot
import pytest

from conftest import FIXTURES, TRIANGLE, build, cycle
from logkdecomp.bench import (
    CSV_HEADER,
    Unknown,
    collect,
    compute_hw,
    join_tree_hd,
    run_benchmark,
    strip_time_columns,
    summarize,
)
from logkdecomp.cli import EXIT_INPUT, EXIT_OK, EXIT_TIMEOUT, main
from logkdecomp.decomposition import check_normal_form, single_node, validate_hd
from logkdecomp.engine import Decision, SearchConfig, decide_hw_le_k
from logkdecomp.export import export_dot, export_json, import_json, to_dict
from logkdecomp.hypergraph import Hypergraph, parse_hyperbench


class TestComputeHw:
    def test_single_edge(self):
        res = compute_hw(build([["a", "b"]]))
        assert res.hw == 1 and res.acyclic and res.status == "solved"

    def test_triangle(self):
        res = compute_hw(build(TRIANGLE))
        assert res.hw == 2
        assert [(k, d) for k, d, _ in res.per_k_outcomes] == [(1, Decision.NO), (2, Decision.YES)]
        assert res.witness.width == 2 and validate_hd(build(TRIANGLE), res.witness, 2).valid

    def test_q5(self, q5):
        res = compute_hw(q5)
        assert res.hw == 2 and res.acyclic is False
        assert check_normal_form(q5, q5.full_part(), res.witness).valid

    def test_join_tree_witness(self):
        H = build([["a", "b", "c"], ["c", "d"], ["d", "e"], ["a", "f"]])
        hd = compute_hw(H).witness
        assert hd == join_tree_hd(H) and validate_hd(H, hd, 1).valid

    def test_unbounded_and_timeout(self, desk_corpus):
        res = compute_hw(cycle(6), kmax=1)
        assert res.status == "unbounded" and res.hw == Unknown(2)
        H = next(h for h in desk_corpus if h.name == "random_26_36_s4")
        res = compute_hw(H, 2, 5, SearchConfig(k=2, timeout=0.3))
        assert res.status == "timeout" and isinstance(res.hw, Unknown)
        assert res.witness is None

    def test_bad_range(self):
        with pytest.raises(ValueError):
            compute_hw(cycle(4), 3, 2)


class TestBenchmark:
    def test_fixture_directory(self):
        text = run_benchmark(FIXTURES / "bench", SearchConfig(k=1))
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == CSV_HEADER
        assert [r[0] for r in rows[1:]] == ["chain_5", "cycle_6", "grid_3x3"]
        assert [r[3] for r in rows[1:]] == ["solved"] * 3
        assert [r[4] for r in rows[1:]] == ["1", "2", "2"]

    def test_error_row(self, tmp_path):
        for p in (FIXTURES / "bench").iterdir():
            shutil.copy(p, tmp_path / p.name)
        (tmp_path / "broken.hg").write_text("r(a,b")
        records = collect(tmp_path, SearchConfig(k=1))
        by_name = {r.instance: r for r in records}
        assert by_name["broken"].status == "error" and by_name["broken"].hw is None
        assert [by_name[n].status for n in ("chain_5", "cycle_6", "grid_3x3")] == ["solved"] * 3
        s = summarize(records)
        assert s["instances"] == 4 and s["solved"] == 3

    def test_hybrid_columns(self, tmp_path):
        from logkdecomp.hybrid import HybridConfig, Metric
        out = tmp_path / "r.csv"
        run_benchmark(FIXTURES / "bench", SearchConfig(k=1, hybrid=HybridConfig(Metric.EDGE_COUNT, 40)), out)
        rows = list(csv.DictReader(out.open()))
        assert {(r["metric"], r["threshold"]) for r in rows} == {("edgecount", "40")}

    def test_rerun_identical(self):
        runs = {strip_time_columns(run_benchmark(FIXTURES / "bench", SearchConfig(k=1))) for _ in range(3)}
        assert len(runs) == 1


class TestExport:
    def test_single_edge_json(self):
        H = parse_hyperbench("e1(a,b).")
        out = decide_hw_le_k(H, SearchConfig(k=1))
        assert export_json(H, out.witness) == '{"width":1,"root":{"bag":["a","b"],"cover":["e1"],"children":[]}}'

    def test_round_trip(self, q5):
        hd = compute_hw(q5).witness
        back = import_json(export_json(q5, hd), q5)
        assert back == hd
        assert to_dict(q5, back) == json.loads(export_json(q5, hd))

    def test_special_cover_round_trip(self):
        from logkdecomp.decomposition import attach, special_leaf
        from logkdecomp.hypergraph import SpecialEdge
        H = build(TRIANGLE)
        s = SpecialEdge(0b110, 1)
        hd = attach(0b011, [0], [], [special_leaf(s)])
        d = to_dict(H, hd)
        assert d["root"]["children"][0]["cover"] == {"special": ["b", "c"]}
        assert to_dict(H, import_json(export_json(H, hd), H)) == d

    def test_dot_parses(self, q5):
        hd = compute_hw(q5).witness
        text = export_dot(q5, hd)
        graphs = pydot.graph_from_dot_data(text)
        assert graphs and len(graphs) == 1
        g = graphs[0]
        assert len(g.get_edges()) == len(hd) - 1
        nodes = [n for n in g.get_nodes() if n.get_name() not in ("node", "edge", "graph")]
        assert len(nodes) == len(hd)
        assert all("λ: {" in n.get("label") and "χ: {" in n.get("label") for n in nodes)

    def test_dot_quotes_names(self):
        H = Hypergraph.from_edges({'r"x': ["a\\b", "c"]})
        text = export_dot(H, single_node(H.edges[0], [0]))
        assert pydot.graph_from_dot_data(text)


class TestCli:
    def test_width(self, tmp_path, capsys):
        g = tmp_path / "tri.hg"
        g.write_text("e1(a,b),\ne2(b,c),\ne3(c,a).\n")
        assert main(["--graph", str(g), "--width", "1", "--workers", "1"]) == EXIT_OK
        assert "no" in capsys.readouterr().out
        out = tmp_path / "hd.json"
        assert main(["--graph", str(g), "--exact", "--workers", "1", "--out", str(out)]) == EXIT_OK
        assert json.loads(out.read_text())["width"] == 2

    def test_exact_dot(self, capsys):
        assert main(["--graph", str(FIXTURES / "q5.hg"), "--exact", "--format", "dot", "--workers", "1"]) == EXIT_OK
        text = capsys.readouterr().out
        assert "hw = 2" in text and "digraph HD {" in text

    def test_timeout_exit(self):
        from conftest import DESK
        g = DESK / "random_26_36_s4.hg"
        assert main(["--graph", str(g), "--width", "3", "--timeout", "0.2", "--workers", "1"]) == EXIT_TIMEOUT

    def test_input_errors(self, tmp_path):
        assert main(["--graph", str(tmp_path / "missing.hg"), "--exact"]) == EXIT_INPUT
        bad = tmp_path / "bad.hg"
        bad.write_text("r(a,b")
        assert main(["--graph", str(bad), "--exact"]) == EXIT_INPUT
        for argv in ([], ["--graph", str(bad)], ["--bench", str(tmp_path / "nope")],
                     ["--graph", str(bad), "--width", "2", "--hybrid", "bogus"]):
            with pytest.raises(SystemExit) as exc:
                main(argv)
            assert exc.value.code == EXIT_INPUT

    def test_bench_mode(self, tmp_path):
        out = tmp_path / "r.csv"
        proc = subprocess.run([sys.executable, "-m", "logkdecomp", "--bench", str(FIXTURES / "bench"),
                               "--out", str(out), "--workers", "1", "--hybrid", "off"],
                              capture_output=True, text=True)
        assert proc.returncode == EXIT_OK
        assert "solved 3/3" in proc.stderr
        assert out.read_text().splitlines()[0] == ",".join(CSV_HEADER)

"""Document round-trips, generators, rendering, and the CLI surface."""

import json
import subprocess
import sys
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from reebflow.cli import main
from reebflow.errors import DocumentError, InvalidParams
from reebflow.generators import (
    gen_cycle,
    gen_ladder,
    gen_random,
    gen_zigzag,
    generate,
    random_graph_with_stats,
)
from reebflow.graphio import parse, serialize
from reebflow.graphs import EMPTY_GRAPH, components, segment, validate
from reebflow.render import render
from strategies import reeb_graphs


class TestDocuments:
    @given(reeb_graphs())
    @settings(max_examples=50)
    def test_round_trip_identity(self, g):
        assert parse(serialize(g)) == g

    def test_canonical_fixed_point(self):
        doc = serialize(segment("1/3", 2))
        assert serialize(parse(doc)) == doc

    def test_exact_rational_heights(self):
        g = parse(
            json.dumps(
                {
                    "format": "reebflow-graph/1",
                    "vertices": [
                        {"id": "a", "height": "3/2"},
                        {"id": "b", "height": "-7"},
                    ],
                    "edges": [{"id": "e", "ends": ["a", "b"]}],
                }
            )
        )
        assert g.height["a"] == F(3, 2)
        assert g.height["b"] == F(-7)

    def test_syntax_error_reported(self):
        with pytest.raises(DocumentError, match="line"):
            parse(b"{ not json")

    def test_bad_rational_rejected(self):
        doc = {
            "format": "reebflow-graph/1",
            "vertices": [{"id": "a", "height": "one half"}],
            "edges": [],
        }
        with pytest.raises(DocumentError, match="rational"):
            parse(json.dumps(doc))

    def test_unknown_vertex_fails_validation(self):
        from reebflow.errors import GraphInvalid

        doc = {
            "format": "reebflow-graph/1",
            "vertices": [{"id": "a", "height": "0"}],
            "edges": [{"id": "e", "ends": ["a", "ghost"]}],
        }
        with pytest.raises(GraphInvalid):
            parse(json.dumps(doc))

    def test_empty_graph_round_trip(self):
        assert parse(serialize(EMPTY_GRAPH)) == EMPTY_GRAPH


class TestGenerators:
    def test_families(self):
        assert len(gen_cycle(0, 3).edge_rows) == 2
        assert len(gen_zigzag([0, 2, 1, 3]).vertex_rows) == 4
        assert len(gen_ladder(4).edge_rows) == 8
        for fam, params in [
            ("segment", (0, 1)),
            ("cycle", (0, 2)),
            ("zigzag", ([0, 2, 1],)),
            ("ladder", (3,)),
            ("random", (6, 8)),
        ]:
            if fam == "zigzag":
                g = generate(fam, params[0], seed=1)
            else:
                g = generate(fam, params, seed=1)
            assert validate(g) == ()

    def test_random_deterministic(self):
        assert gen_random(12, 18, seed=42) == gen_random(12, 18, seed=42)
        assert gen_random(12, 18, seed=42) != gen_random(12, 18, seed=43)

    def test_random_connected_and_valid(self):
        for seed in range(12):
            g, retries = random_graph_with_stats(9, 14, seed=seed)
            assert validate(g) == ()
            assert len(components(g)) == 1
            assert retries >= 0

    def test_invalid_params(self):
        with pytest.raises(InvalidParams):
            generate("segment", (1, 0))
        with pytest.raises(InvalidParams):
            generate("nosuch", ())
        with pytest.raises(InvalidParams):
            gen_zigzag([0, 0])


class TestRender:
    def test_dot_deterministic(self):
        g = gen_cycle(0, 3)
        assert render(g, "dot") == render(g, "dot")
        text = render(g, "dot").decode()
        assert '"bot" -- "top"' in text and "0" in text

    def test_svg_contains_exact_labels(self):
        g = segment("1/3", 2)
        svg = render(g, "svg").decode()
        assert "1/3" in svg and "<svg" in svg

    def test_empty_graph_renders(self):
        assert render(EMPTY_GRAPH, "dot")
        assert render(EMPTY_GRAPH, "svg")

    def test_vertical_positions_follow_height(self):
        g = segment(0, 5)
        svg = render(g, "svg").decode()
        # the higher vertex is drawn with the smaller y pixel value
        import re

        ys = [float(m) for m in re.findall(r'cy="([0-9.]+)"', svg)]
        assert ys[0] > ys[1]  # rows are sorted bot, top


class TestCli:
    def _write(self, tmp_path, name, graph):
        path = tmp_path / name
        path.write_bytes(serialize(graph))
        return str(path)

    def test_validate_ok(self, tmp_path, capsys):
        path = self._write(tmp_path, "g.json", segment(0, 1))
        assert main(["validate", path]) == 0
        assert "ok" in capsys.readouterr().out

    def test_validate_bad_exit_code(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(
            json.dumps(
                {
                    "format": "reebflow-graph/1",
                    "vertices": [
                        {"id": "a", "height": "0"},
                        {"id": "b", "height": "0"},
                    ],
                    "edges": [{"id": "e", "ends": ["a", "b"]}],
                }
            )
        )
        assert main(["validate", str(path)]) == 1

    def test_smooth_matches_library(self, tmp_path, capsys):
        path = self._write(tmp_path, "g.json", segment(0, 1))
        assert main(["smooth", "--eps", "1/2", path]) == 0
        out = capsys.readouterr().out
        from reebflow.smoothing import smooth

        assert out.encode() == serialize(smooth(segment(0, 1), F(1, 2)).graph)

    def test_flow_and_truncate(self, tmp_path, capsys):
        path = self._write(tmp_path, "g.json", segment(0, 4))
        assert main(["truncate", "--tau", "1", path]) == 0
        assert main(["flow", "--eps", "1", "--m", "1/2", path]) == 0

    def test_check_json(self, tmp_path, capsys):
        path = self._write(tmp_path, "g.json", gen_cycle(0, 3))
        assert main(["check", path, "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["components"] == 1
        assert payload["max_tailed"] == "0"

    def test_iso_exit_codes(self, tmp_path, capsys):
        a = self._write(tmp_path, "a.json", gen_cycle(0, 3))
        b = self._write(tmp_path, "b.json", segment(0, 3))
        assert main(["iso", a, a]) == 0
        assert main(["iso", a, b]) == 0
        out = capsys.readouterr().out
        assert "not isomorphic" in out

    def test_dist_reports_bracket(self, tmp_path, capsys):
        a = self._write(tmp_path, "a.json", segment(-1, 1))
        b = self._write(tmp_path, "b.json", segment(-2, 2))
        assert main(["dist", "--m", "1/2", "--tol", "1/100", a, b, "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["lo"] == "2" and payload["hi"] == "2"
        assert payload["certificate"] == "image-gap"

    def test_gen_and_render(self, tmp_path, capsys):
        out = tmp_path / "g.json"
        assert main(["gen", "cycle", "0", "3", "-o", str(out)]) == 0
        assert parse(out.read_bytes()) == gen_cycle(0, 3)
        assert main(["gen", "random", "6", "8", "--seed", "3", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert "retries" in payload
        assert main(["render", str(out), "--format", "svg"]) == 0

    def test_missing_file_is_io_error(self, capsys):
        assert main(["validate", "/nonexistent/file.json"]) == 3

    def test_threads_flag_and_env(self, tmp_path, capsys, monkeypatch):
        from reebflow.graphs import disjoint_union

        g = disjoint_union(segment(0, 2), gen_cycle(0, 3))
        path = self._write(tmp_path, "g.json", g)
        assert main(["smooth", "--eps", "1/2", path, "--threads", "2"]) == 0
        threaded = capsys.readouterr().out
        monkeypatch.setenv("REEBFLOW_THREADS", "3")
        assert main(["smooth", "--eps", "1/2", path]) == 0
        via_env = capsys.readouterr().out
        assert threaded == via_env
        from reebflow.iso import are_isomorphic
        from reebflow.smoothing import smooth

        assert are_isomorphic(parse(threaded), smooth(g, F(1, 2)).graph).isomorphic

    def test_entry_point_runs(self):
        proc = subprocess.run(
            [sys.executable, "-m", "reebflow.cli", "gen", "segment", "0", "1"],
            capture_output=True,
        )
        assert proc.returncode == 0
        assert b"reebflow-graph/1" in proc.stdout


class TestExitCodes:
    def test_iso_exhausted_is_exit_two(self, tmp_path):
        from reebflow.smoothing import smooth

        g = smooth(gen_cycle(0, 3), 1).graph
        path = tmp_path / "g.json"
        path.write_bytes(serialize(g))
        assert main(["iso", str(path), str(path), "--budget", "1"]) == 2

    def test_dist_exhausted_is_exit_two(self, tmp_path, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        a.write_bytes(serialize(gen_cycle(0, 3)))
        b.write_bytes(serialize(gen_cycle(0, 3)))
        code = main(["dist", "--m", "0", "--tol", "1/10", "--budget", "1", str(a), str(b)])
        assert code == 2
        assert "exhausted" in capsys.readouterr().out

    def test_domain_error_is_exit_one(self, tmp_path):
        path = tmp_path / "g.json"
        path.write_bytes(serialize(segment(0, 1)))
        assert main(["smooth", "--eps", "-1", str(path)]) == 1


class TestParallelHelpers:
    def test_component_split_and_merge(self):
        from reebflow.graphs import disjoint_union
        from reebflow.parallel import component_map, merge_graphs, split_components
        from reebflow.smoothing import smooth
        from reebflow.iso import are_isomorphic

        g = disjoint_union(segment(0, 2), gen_cycle(0, 3))
        parts = split_components(g)
        assert len(parts) == 2
        merged = merge_graphs([p for p in parts], prefix_ids=False)
        assert merged == g
        out = merge_graphs(component_map(lambda p: smooth(p, 1).graph, g, threads=2))
        assert are_isomorphic(out, smooth(g, 1).graph).isomorphic

    def test_single_component_passthrough(self):
        from reebflow.parallel import component_map, merge_graphs
        from reebflow.smoothing import smooth

        g = segment(0, 2)
        out = merge_graphs(component_map(lambda p: smooth(p, 1).graph, g, threads=4))
        assert out == smooth(g, 1).graph

    def test_thread_count_resolution(self, monkeypatch):
        from reebflow.parallel import thread_count

        monkeypatch.delenv("REEBFLOW_THREADS", raising=False)
        assert thread_count() == 1
        assert thread_count(3) == 3
        monkeypatch.setenv("REEBFLOW_THREADS", "5")
        assert thread_count() == 5
        monkeypatch.setenv("REEBFLOW_THREADS", "junk")
        assert thread_count() == 1

"""Core data model: validation, connectivity, refinement, path budgets."""

from fractions import Fraction as F

import pytest
from hypothesis import given

from oracles import brute_forks, brute_longest_up_down
from reebflow.errors import GraphInvalid
from reebflow.graphs import (
    EMPTY_GRAPH,
    Interval,
    ReebGraph,
    as_height,
    component_images,
    components,
    forks,
    image,
    longest_up_down,
    normalize_regular,
    reeb_graph,
    segment,
    subdivide_at,
    validate,
)
from strategies import reeb_graphs

ZIGZAG = reeb_graph(
    {"v0": 0, "v1": 2, "v2": 1, "v3": 3},
    [("a", "v0", "v1"), ("b", "v1", "v2"), ("c", "v2", "v3")],
)


def cycle(a, b):
    return reeb_graph({"bot": a, "top": b}, [("p", "bot", "top"), ("q", "bot", "top")])


class TestHeights:
    def test_exact_parsing(self):
        assert as_height("3/2") == F(3, 2)
        assert as_height(4) == F(4)
        assert as_height(F(1, 3)) == F(1, 3)

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            as_height(0.5)

    def test_bools_rejected(self):
        with pytest.raises(TypeError):
            as_height(True)


class TestValidate:
    def test_single_edge_ok(self):
        assert validate(segment(0, 1)) == ()

    def test_empty_graph_ok(self):
        assert validate(EMPTY_GRAPH) == ()

    def test_equal_heights_rejected(self):
        g = reeb_graph({"a": 0, "b": 0}, [("e", "a", "b")])
        kinds = {v.kind for v in validate(g)}
        assert kinds == {"AdjacentEqualHeights"}

    def test_dangling_endpoint(self):
        g = ReebGraph((("a", F(0)),), (("e", "a", "ghost"),))
        kinds = {v.kind for v in validate(g)}
        assert kinds == {"DanglingEndpoint"}

    def test_duplicate_vertex_id(self):
        g = ReebGraph((("a", F(0)), ("a", F(1))), ())
        kinds = {v.kind for v in validate(g)}
        assert kinds == {"DuplicateVertexId"}

    def test_operations_require_validity(self):
        g = reeb_graph({"a": 0, "b": 0}, [("e", "a", "b")])
        with pytest.raises(GraphInvalid):
            components(g)


class TestComponentsAndImage:
    def test_segment_one_component(self):
        assert len(components(segment(0, 1))) == 1

    def test_two_disjoint_edges(self):
        g = reeb_graph({"a": 0, "b": 1, "c": 0, "d": 1}, [("e", "a", "b"), ("f", "c", "d")])
        assert len(components(g)) == 2

    def test_cycle_one_component(self):
        assert len(components(cycle(0, 3))) == 1

    def test_segment_image(self):
        assert image(segment("-1/2", "7/3")) == Interval.of("-1/2", "7/3")

    def test_empty_image(self):
        assert image(EMPTY_GRAPH).is_empty

    def test_cycle_image(self):
        assert image(cycle(0, 3)) == Interval.of(0, 3)

    def test_component_images_align(self):
        g = reeb_graph({"a": 0, "b": 1, "c": 5, "d": 9}, [("e", "a", "b"), ("f", "c", "d")])
        assert component_images(g) == (Interval.of(0, 1), Interval.of(5, 9))


class TestSubdivide:
    def test_midpoint(self):
        g, corr = subdivide_at(segment(0, 2), [1])
        assert len(g.vertex_rows) == 3
        assert corr["e0"] == ("e0#0", "e0#1")
        assert g.height["e0@1"] == 1

    def test_level_outside_span_is_identity(self):
        g, corr = subdivide_at(segment(0, 2), [5])
        assert g == segment(0, 2)
        assert corr["e0"] == ("e0",)

    @given(reeb_graphs(), reeb_graphs(max_vertices=3))
    def test_preserves_components_and_image(self, g, levels_src):
        levels = [h for _, h in levels_src.vertex_rows]
        out, _ = subdivide_at(g, levels)
        assert validate(out) == ()
        assert len(components(out)) == len(components(g))
        assert image(out) == image(g)

    @given(reeb_graphs())
    def test_normalization_inverts_subdivision(self, g):
        levels = [h + F(1, 7) for _, h in g.vertex_rows]
        out, corr = subdivide_at(g, levels)
        back = normalize_regular(out)
        # each original edge is recovered as a contiguous run of one chain
        for e in g.edge_ids:
            lo, hi = g.edge_span(e)
            merged = {back.merged_of[piece] for piece in corr[e]}
            assert len(merged) == 1
            pieces = back.merged_paths[merged.pop()]
            run = [p for p in pieces if lo <= p[1] and p[2] <= hi]
            assert tuple(p[0] for p in run) == corr[e]
            assert run[0][1] == lo and run[-1][2] == hi


class TestLongestUpDown:
    def test_segment(self):
        budgets = longest_up_down(segment(0, 3))
        assert budgets["bot"] == (F(3), F(0))
        assert budgets["top"] == (F(0), F(3))

    def test_zigzag_frozen_values(self):
        budgets = longest_up_down(ZIGZAG)
        assert budgets == {
            "v0": (F(2), F(0)),
            "v1": (F(0), F(2)),
            "v2": (F(2), F(0)),
            "v3": (F(0), F(2)),
        }

    def test_cycle(self):
        budgets = longest_up_down(cycle(0, 5))
        assert budgets["bot"] == (F(5), F(0))
        assert budgets["top"] == (F(0), F(5))

    @given(reeb_graphs(max_vertices=6, max_extra_edges=4))
    def test_matches_brute_force(self, g):
        assert longest_up_down(g) == brute_longest_up_down(g)


class TestForks:
    def test_wye(self):
        g = reeb_graph({"a": 0, "b": 2, "c": 3}, [("e", "a", "b"), ("f", "a", "c")])
        ups, downs = forks(g)
        assert ups == {"a"} and downs == frozenset()

    def test_segment_no_forks(self):
        assert forks(segment(0, 1)) == (frozenset(), frozenset())

    def test_cycle_forks(self):
        ups, downs = forks(cycle(0, 1))
        assert ups == {"bot"} and downs == {"top"}

    @given(reeb_graphs(max_vertices=6))
    def test_matches_brute_force(self, g):
        ups, downs = forks(g)
        bups, bdowns = brute_forks(g)
        assert set(ups) == bups and set(downs) == bdowns


class TestNormalize:
    def test_plain_graph_unchanged(self):
        g = cycle(0, 3)
        assert normalize_regular(g).graph == g

    def test_chain_collapses(self):
        g, _ = subdivide_at(segment(0, 4), [1, 2, 3])
        norm = normalize_regular(g)
        assert len(norm.graph.edge_rows) == 1
        assert len(norm.graph.vertex_rows) == 2

    def test_isolated_vertex_survives(self):
        g = ReebGraph((("a", F(1)),), ())
        assert normalize_regular(g).graph == g


class TestSubdivisionPathMultisets:
    @given(reeb_graphs(max_vertices=5, max_extra_edges=3))
    def test_monotone_path_heights_preserved(self, g):
        """Subdividing never changes the multiset of monotone-path heights
        between surviving original vertices."""
        from oracles import brute_monotone_paths

        levels = [h + F(1, 7) for _, h in g.vertex_rows]
        sub, _ = subdivide_at(g, levels)
        originals = set(g.vertex_ids)

        def profile(graph, keep):
            out = []
            for v in keep:
                for path in brute_monotone_paths(graph, v):
                    if path[-1] in keep:
                        out.append(
                            (v, path[-1], graph.height[path[-1]] - graph.height[v])
                        )
            return sorted(out)

        assert profile(g, originals) == profile(sub, originals)

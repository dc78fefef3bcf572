"""Smoothing: golden fixtures, the image law, and the window oracle."""

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from conftest import fixture_zoo, random_connected, random_fraction
from oracles import points_at_height, window_components
from reebflow.errors import NegativeEpsilon
from reebflow.graphs import (
    EMPTY_GRAPH,
    Interval,
    ReebGraph,
    components,
    forks,
    image,
    reeb_graph,
    segment,
    validate,
)
from reebflow.iso import are_isomorphic
from reebflow.maps import verify_morphism
from reebflow.smoothing import smooth
from strategies import reeb_graphs, small_eps


def cycle(a, b):
    return reeb_graph({"bot": a, "top": b}, [("p", "bot", "top"), ("q", "bot", "top")])


class TestGoldenFixtures:
    def test_segment_stretches(self):
        out = smooth(segment("1/3", "5/2"), F(1, 4)).graph
        assert out == smooth(segment("1/3", "5/2"), F(1, 4)).graph  # deterministic
        assert image(out) == Interval.of("1/12", "11/4")
        assert len(out.vertex_rows) == 2 and len(out.edge_rows) == 1

    def test_zero_smoothing_is_identity(self):
        g = cycle(0, 3)
        res = smooth(g, 0)
        assert res.graph is g
        assert verify_morphism(res.eta) == ()
        assert res.eta.vertex_map["bot"].vertex == "bot"

    def test_small_cycle_survives(self):
        # 2 eps < height: min, up-fork, down-fork, max; loop of height H - 2 eps
        out = smooth(cycle(0, 3), 1).graph
        heights = sorted(h for _, h in out.vertex_rows)
        assert heights == [F(-1), F(1), F(2), F(4)]
        ups, downs = forks(out)
        assert {out.height[v] for v in ups} == {F(1)}
        assert {out.height[v] for v in downs} == {F(2)}
        assert len(out.edge_rows) == 4

    def test_large_cycle_collapses(self):
        out = smooth(cycle(0, 3), F(3, 2)).graph
        assert are_isomorphic(out, segment(F(-3, 2), F(9, 2))).isomorphic

    def test_isolated_vertex_becomes_segment(self):
        g = ReebGraph((("a", F(2)),), ())
        out = smooth(g, F(1, 2)).graph
        assert are_isomorphic(out, segment(F(3, 2), F(5, 2))).isomorphic

    def test_empty_graph(self):
        assert smooth(EMPTY_GRAPH, 1).graph.is_empty

    def test_negative_eps_rejected(self):
        with pytest.raises(NegativeEpsilon):
            smooth(segment(0, 1), -1)


class TestEta:
    @given(reeb_graphs(), small_eps)
    @settings(max_examples=60)
    def test_eta_verifies(self, g, eps):
        res = smooth(g, eps)
        assert verify_morphism(res.eta) == ()

    def test_eta_hits_every_output_point(self):
        g = cycle(0, 3)
        res = smooth(g, F(1, 2))
        # bottom vertex of the input lands at the fork, not the new minimum
        p = res.eta.vertex_map["bot"]
        assert res.graph.point_height(p) == 0


class TestLaws:
    def test_image_law_random_corpus(self, rng):
        for _ in range(120):
            g = random_connected(rng, max_vertices=9)
            eps = random_fraction(rng, 0, 5)
            a, b = image(g).lo, image(g).hi
            assert image(smooth(g, eps).graph) == Interval(a - eps, b + eps)

    def test_component_count_preserved(self, rng):
        for _ in range(40):
            parts = [random_connected(rng, 5) for _ in range(rng.randint(1, 3))]
            from reebflow.parallel import merge_graphs

            g = merge_graphs(parts)
            eps = random_fraction(rng, 0, 3)
            assert len(components(smooth(g, eps).graph)) == len(components(g))

    @given(reeb_graphs(max_vertices=6, max_extra_edges=4), small_eps)
    @settings(max_examples=60, deadline=None)
    def test_window_component_oracle(self, g, eps):
        """The number of points of the smoothed graph at any height equals
        the number of window components of the input there."""
        out = smooth(g, eps).graph
        assert validate(out) == ()
        levels = sorted({h for _, h in g.vertex_rows for h in (h - eps, h, h + eps)})
        probes = set(levels)
        probes.update((a + b) / 2 for a, b in zip(levels, levels[1:]))
        probes.update((a + 2 * b) / 3 for a, b in zip(levels, levels[1:]))
        for h in probes:
            assert points_at_height(out, h) == window_components(g, h - eps, h + eps)

    def test_window_oracle_on_fixtures(self):
        rng = random.Random(7)
        for g in fixture_zoo():
            for eps in (F(1, 3), F(1), F(7, 2)):
                out = smooth(g, eps).graph
                lo, hi = image(g).lo - eps, image(g).hi + eps
                for _ in range(12):
                    h = lo + (hi - lo) * F(rng.randint(0, 24), 24)
                    assert points_at_height(out, h) == window_components(g, h - eps, h + eps)

    def test_composition_law(self, rng):
        for _ in range(25):
            g = random_connected(rng, 6)
            a = random_fraction(rng, 0, 2)
            b = random_fraction(rng, 0, 2)
            lhs = smooth(smooth(g, a).graph, b).graph
            rhs = smooth(g, a + b).graph
            assert are_isomorphic(lhs, rhs).isomorphic


class TestFibers:
    @given(reeb_graphs(max_vertices=6, max_extra_edges=3), small_eps)
    @settings(max_examples=40)
    def test_fibers_partition_the_window(self, g, eps):
        """At any level, the fibers of the distinct output points cover the
        window's vertices and crossing edges exactly once."""
        from reebflow.graphs import EdgeRef, VertexRef

        res = smooth(g, eps)
        out = res.graph
        if out.is_empty:
            return
        levels = sorted({h for _, h in out.vertex_rows})
        probes = set(levels)
        probes.update((a + b) / 2 for a, b in zip(levels, levels[1:]))
        for c in probes:
            points = [VertexRef(v) for v, h in out.vertex_rows if h == c]
            for e in out.edge_ids:
                lo, hi = out.edge_span(e)
                if lo < c < hi:
                    points.append(EdgeRef(e, c))
            fibers = [res.fiber_elements(p, c) for p in points]
            window = set()
            for v, h in g.vertex_rows:
                if abs(h - c) <= eps:
                    window.add(("v", v))
            for e in g.edge_ids:
                lo, hi = g.edge_span(e)
                if lo - eps <= c <= hi + eps:
                    window.add(("e", e))
            assert sorted(x for f in fibers for x in f) == sorted(window)

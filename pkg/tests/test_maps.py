"""Morphism algebra: verification, composition, equality, evaluation."""

from fractions import Fraction as F

import pytest

from reebflow.errors import DomainMismatch, MorphismError
from reebflow.graphs import EdgeRef, VertexRef, reeb_graph, segment, subdivide_at
from reebflow.maps import (
    check_morphism,
    clip_path,
    compose,
    equal_maps,
    eval_path,
    identity_morphism,
    make_morphism,
    merge_pieces,
    trace_path,
    verify_morphism,
)

SEG = segment(0, 4)
CYCLE = reeb_graph({"bot": 0, "top": 3}, [("p", "bot", "top"), ("q", "bot", "top")])


def seg_into_cycle(edge: str):
    """L_[0,3] -> cycle through the chosen parallel edge."""
    g = segment(0, 3)
    return make_morphism(
        g,
        CYCLE,
        {"bot": VertexRef("bot"), "top": VertexRef("top")},
        {"e0": ((edge, F(0), F(3)),)},
    )


class TestVerify:
    def test_identity_ok(self):
        assert verify_morphism(identity_morphism(CYCLE)) == ()

    def test_identity_on_empty(self):
        from reebflow.graphs import EMPTY_GRAPH

        assert verify_morphism(identity_morphism(EMPTY_GRAPH)) == ()

    def test_height_violation(self):
        g = segment(0, 3)
        m = make_morphism(
            g,
            SEG,
            {"bot": EdgeRef("e0", F(1)), "top": EdgeRef("e0", F(3))},
            {"e0": (("e0", F(1), F(3)),)},
        )
        kinds = {v.kind for v in verify_morphism(m)}
        assert "NotFunctionPreserving" in kinds

    def test_non_monotone_path(self):
        g = segment(0, 3)
        m = make_morphism(
            g,
            CYCLE,
            {"bot": VertexRef("bot"), "top": VertexRef("top")},
            {"e0": (("p", F(0), F(3)), ("q", F(3), F(0)))},
        )
        kinds = {v.kind for v in verify_morphism(m)}
        assert "NonMonotonePath" in kinds

    def test_discontinuous_path(self):
        g = segment(0, 6)
        h = reeb_graph(
            {"a": 0, "b": 3, "c": 3, "d": 6},
            [("e1", "a", "b"), ("e2", "c", "d")],
        )
        m = make_morphism(
            g,
            h,
            {"bot": VertexRef("a"), "top": VertexRef("d")},
            {"e0": (("e1", F(0), F(3)), ("e2", F(3), F(6)))},
        )
        kinds = {v.kind for v in verify_morphism(m)}
        assert "Discontinuous" in kinds

    def test_check_raises(self):
        g = segment(0, 3)
        m = make_morphism(g, SEG, {"bot": VertexRef("bot")}, {})
        with pytest.raises(MorphismError):
            check_morphism(m)


class TestPaths:
    def test_merge_pieces_fuses_runs(self):
        assert merge_pieces([("e", F(0), F(1)), ("e", F(1), F(2))]) == (("e", F(0), F(2)),)

    def test_merge_drops_degenerate(self):
        assert merge_pieces([("e", F(1), F(1))]) == ()

    def test_clip(self):
        path = (("a", F(0), F(2)), ("b", F(2), F(5)))
        assert clip_path(path, F(1), F(3)) == (("a", F(1), F(2)), ("b", F(2), F(3)))
        assert clip_path(path, F(2), F(2)) == ()

    def test_eval_normalizes_endpoints(self):
        m = seg_into_cycle("p")
        assert m(EdgeRef("e0", F(1))) == EdgeRef("p", F(1))
        path = m.edge_map["e0"]
        assert eval_path(CYCLE, path, F(0)) == VertexRef("bot")

    def test_trace_path_reconstruction(self):
        sub, _ = subdivide_at(segment(0, 4), [1, 3])
        ident = identity_morphism(sub)
        path = trace_path(sub, F(0), F(4), lambda h: ident(EdgeRef("e0#0", h)) if h < 1 else sub.point_on_edge("e0#1" if h < 3 else "e0#2", h))
        assert path == (("e0#0", F(0), F(1)), ("e0#1", F(1), F(3)), ("e0#2", F(3), F(4)))


class TestComposeAndEquality:
    def test_identity_neutral(self):
        m = seg_into_cycle("p")
        assert equal_maps(compose(identity_morphism(m.domain), m), m)
        assert equal_maps(compose(m, identity_morphism(CYCLE)), m)

    def test_parallel_routings_differ(self):
        assert not equal_maps(seg_into_cycle("p"), seg_into_cycle("q"))

    def test_equality_is_piecewise(self):
        g = segment(0, 3)
        split = make_morphism(
            g,
            CYCLE,
            {"bot": VertexRef("bot"), "top": VertexRef("top")},
            {"e0": (("p", F(0), F(1)), ("p", F(1), F(3)))},
        )
        assert equal_maps(split, seg_into_cycle("p"))

    def test_domain_mismatch(self):
        with pytest.raises(DomainMismatch):
            equal_maps(seg_into_cycle("p"), identity_morphism(CYCLE))

    def test_compose_through_subdivision(self):
        sub, corr = subdivide_at(segment(0, 3), [1])
        into_sub = make_morphism(
            segment(0, 3),
            sub,
            {"bot": VertexRef("bot"), "top": VertexRef("top")},
            {"e0": (("e0#0", F(0), F(1)), ("e0#1", F(1), F(3)))},
        )
        back = make_morphism(
            sub,
            segment(0, 3),
            {"bot": VertexRef("bot"), "top": VertexRef("top"), "e0@1": EdgeRef("e0", F(1))},
            {"e0#0": (("e0", F(0), F(1)),), "e0#1": (("e0", F(1), F(3)),)},
        )
        assert equal_maps(compose(into_sub, back), identity_morphism(segment(0, 3)))

"""Maps between truncated smoothings, and the subgraph oracles.

All four map families (inclusion of a deeper truncation, the smoothing
map, their diagonal composite, and the up-right restriction map) share one
construction: include the source truncation into its smoothing, carry each
window component into the larger smoothing it nests inside, and pull the
result back through the target truncation.  Only the admissible parameter
ranges differ.

The functor action on a morphism is computed the same way, going through
the fibers of the codomain's smoothing, and always lands in a single-pass
smoothing of the underlying graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (
    BandOutOfRange,
    DomainMismatch,
    EmptyTruncatedDomain,
    ParamsOutOfRange,
    TauExceedsEpsilon,
)
from .graphs import (
    EdgeRef,
    HeightLike,
    PointRef,
    ReebGraph,
    VertexRef,
    as_height,
    require_valid,
)
from .maps import (
    ReebMorphism,
    check_morphism,
    clip_path,
    make_morphism,
    trace_path,
)
from .smoothing import (
    FlowParams,
    SmoothResult,
    TruncationResult,
    smooth,
    truncate,
)

NU, ETA, OMEGA, RHO = "nu", "eta", "omega", "rho"


@dataclass(frozen=True)
class FlowSpace:
    """A truncated smoothing of a base graph, with its embedding data."""

    base: ReebGraph
    params: FlowParams
    smoothing: SmoothResult
    truncation: TruncationResult

    @property
    def graph(self) -> ReebGraph:
        return self.truncation.graph

    def include_point(self, p: PointRef) -> PointRef:
        """Carry a point of the truncated graph into the smoothed graph."""
        if isinstance(p, VertexRef):
            if p.vertex in self.truncation.kept_vertices:
                return p
            edge, h = p.vertex.rsplit("@", 1)
            return self.smoothing.graph.point_on_edge(edge, Fraction(h))
        return self.smoothing.graph.point_on_edge(p.edge, p.height)

    def pull_point(self, p: PointRef) -> PointRef:
        return self.truncation.pull(p)


@lru_cache(maxsize=256)
def _flow_space(g: ReebGraph, eps: Fraction, tau: Fraction) -> FlowSpace:
    sm = smooth(g, eps)
    tr = truncate(sm.graph, tau)
    return FlowSpace(g, FlowParams(eps, tau), sm, tr)


def flow_space(g: ReebGraph, params: FlowParams) -> FlowSpace:
    """The truncated smoothing of ``g`` at the given parameters, cached."""
    require_valid(g)
    return _flow_space(g, params.eps, params.tau)


# ---------------------------------------------------------------------------
# The shared point-level construction


def _carry_element(
    src: SmoothResult, dst: SmoothResult, p: PointRef, h: Fraction
) -> PointRef:
    """Map a point of ``src.graph`` to the point of ``dst.graph`` whose
    window component contains it (both smoothings of the same base)."""
    kind, ident = src.element_name(src.element_at(p, h))
    return dst.locate(dst.element_of(kind, ident), h)


def _flow_point(dsp: FlowSpace, csp: FlowSpace, p: PointRef, h: Fraction) -> PointRef:
    p1 = dsp.include_point(p)
    p2 = _carry_element(dsp.smoothing, csp.smoothing, p1, h)
    return csp.pull_point(p2)


def _assemble(
    dom: ReebGraph, cod: ReebGraph, point_at_vertex, point_on_edge_at
) -> ReebMorphism:
    vmap = {v: point_at_vertex(v) for v in dom.vertex_ids}
    emap = {}
    for e in dom.edge_ids:
        lo, hi = dom.edge_span(e)
        emap[e] = trace_path(cod, lo, hi, lambda h, _e=e: point_on_edge_at(_e, h))
    return check_morphism(make_morphism(dom, cod, vmap, emap))


def _check_flow_params(kind: str, src: FlowParams, dst: FlowParams) -> None:
    if kind == NU:
        ok = src.eps == dst.eps and src.tau >= dst.tau
        rule = "eps equal and tau nonincreasing"
    elif kind == ETA:
        ok = src.eps <= dst.eps and src.tau == dst.tau
        rule = "eps nondecreasing and tau equal"
    elif kind == OMEGA:
        ok = src.eps <= dst.eps and src.tau >= dst.tau
        rule = "eps nondecreasing and tau nonincreasing"
    elif kind == RHO:
        ok = (
            src.tau <= src.eps
            and dst.tau <= dst.eps
            and 0 <= dst.tau - src.tau <= dst.eps - src.eps
        )
        rule = "tau <= eps on both ends and slope between 0 and 1"
    else:
        raise ParamsOutOfRange(f"unknown flow map kind {kind!r}")
    if not ok:
        raise ParamsOutOfRange(
            f"{kind} from (eps={src.eps}, tau={src.tau}) to (eps={dst.eps}, tau={dst.tau}) needs {rule}"
        )


def make_flow_map(
    g: ReebGraph, kind: str, src: FlowParams, dst: FlowParams
) -> ReebMorphism:
    """A verified map between two truncated smoothings of the same graph.

    ``kind`` is one of "nu" (inclusion of a deeper truncation), "eta" (the
    smoothing map), "omega" (their diagonal composite), or "rho" (the
    up-right map that exists for slopes in [0, 1]).
    """
    require_valid(g)
    _check_flow_params(kind, src, dst)
    dsp = flow_space(g, src)
    csp = flow_space(g, dst)
    return _assemble(
        dsp.graph,
        csp.graph,
        lambda v: _flow_point(dsp, csp, VertexRef(v), dsp.graph.height[v]),
        lambda e, h: _flow_point(dsp, csp, EdgeRef(e, h), h),
    )


# ---------------------------------------------------------------------------
# Functor actions


def apply_flow_functor(
    phi: ReebMorphism, level: FlowParams, cod0: FlowSpace
) -> ReebMorphism:
    """Apply the truncated-smoothing functor at ``level`` to a morphism.

    ``phi`` must map into ``cod0.graph``, a truncated smoothing of some
    graph B.  The result maps the level-smoothing of phi's domain into the
    single-pass truncated smoothing of B at the summed parameters, hiding
    the rebracketing isomorphism between iterated and single smoothings.
    """
    if phi.codomain != cod0.graph:
        raise DomainMismatch("phi must map into the given flow space")
    dsp = flow_space(phi.domain, level)
    csp = flow_space(
        cod0.base,
        FlowParams(level.eps + cod0.params.eps, level.tau + cod0.params.tau),
    )

    def image_point(p: PointRef, h: Fraction) -> PointRef:
        p1 = dsp.include_point(p)
        x = dsp.smoothing.rep_point(p1, h)
        q = phi(x)
        hx = phi.domain.point_height(x)
        q1 = cod0.include_point(q)
        kind, ident = cod0.smoothing.element_name(cod0.smoothing.element_at(q1, hx))
        p3 = csp.smoothing.locate(csp.smoothing.element_of(kind, ident), h)
        return csp.pull_point(p3)

    return _assemble(
        dsp.graph,
        csp.graph,
        lambda v: image_point(VertexRef(v), dsp.graph.height[v]),
        lambda e, h: image_point(EdgeRef(e, h), h),
    )


def restrict_to_truncation(m: ReebMorphism, tau: HeightLike) -> ReebMorphism:
    """Restrict a morphism to the tau-truncations of its two graphs.

    Well-defined because a morphism carries every monotone path to one of
    equal height, so surviving points map to surviving points.
    """
    tau = as_height(tau)
    dt = truncate(m.domain, tau)
    if dt.graph.is_empty:
        raise EmptyTruncatedDomain(f"tau={tau} empties the domain")
    ct = truncate(m.codomain, tau)
    inc = dt.include()
    vmap = {v: ct.pull(m(p)) for v, p in inc.vertex_map.items()}
    emap = {}
    for e in dt.graph.edge_ids:
        a, b = dt.graph.edge_span(e)
        # surviving edges keep their ids, so the clipped path reads directly
        # as a path in the truncated codomain
        emap[e] = clip_path(m.edge_map[e], a, b)
    return check_morphism(make_morphism(dt.graph, ct.graph, vmap, emap))


# ---------------------------------------------------------------------------
# Subgraph selections (supports the two independent oracles)


@dataclass(frozen=True)
class SubgraphSelection:
    """A closed subgraph of a base graph: kept vertices plus, per edge, a
    union of disjoint closed height intervals."""

    base: ReebGraph
    vertices: frozenset[str]
    intervals: tuple[tuple[str, tuple[tuple[Fraction, Fraction], ...]], ...]

    @property
    def interval_map(self) -> dict[str, tuple[tuple[Fraction, Fraction], ...]]:
        store = self.__dict__
        if "_imap" not in store:
            store["_imap"] = dict(self.intervals)
        return store["_imap"]

    def materialize(self) -> ReebGraph:
        """Realize the selection as a Reeb graph of its own."""
        heights: dict[str, Fraction] = {v: self.base.height[v] for v in self.vertices}
        erows: list[tuple[str, str, str]] = []
        for e, ivs in self.intervals:
            lo, hi = self.base.edge_span(e)
            full = len(ivs) == 1 and ivs[0] == (lo, hi)
            for k, (a, b) in enumerate(ivs):
                if a == lo:
                    bottom = self.base.lo(e)
                    if bottom not in heights:
                        raise AssertionError(f"selection not closed at {e} bottom")
                else:
                    bottom = f"{e}@{a}"
                    heights[bottom] = a
                if a == b:
                    continue
                if b == hi:
                    top = self.base.hi(e)
                    if top not in heights:
                        raise AssertionError(f"selection not closed at {e} top")
                else:
                    top = f"{e}@{b}"
                    heights[top] = b
                erows.append((e if full else f"{e}#{k}", bottom, top))
        return ReebGraph(tuple(heights.items()), tuple(erows))


def _merge_intervals(ivs) -> tuple[tuple[Fraction, Fraction], ...]:
    out: list[list[Fraction]] = []
    for a, b in sorted(ivs):
        if out and a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return tuple((a, b) for a, b in out)


def _make_selection(base, vertices, raw_intervals) -> SubgraphSelection:
    vertices = set(vertices)
    rows = []
    for e in sorted(raw_intervals):
        lo, hi = base.edge_span(e)
        clipped = [
            (max(a, lo), min(b, hi)) for a, b in raw_intervals[e] if max(a, lo) <= min(b, hi)
        ]
        merged = []
        for a, b in _merge_intervals(clipped):
            # closed intervals meeting an edge end contain that vertex; a
            # degenerate end interval IS the vertex
            if a == lo:
                vertices.add(base.lo(e))
            if b == hi:
                vertices.add(base.hi(e))
            if a == b and (a == lo or a == hi):
                continue
            merged.append((a, b))
        if merged:
            rows.append((e, tuple(merged)))
    return SubgraphSelection(base, frozenset(vertices), tuple(rows))


def intersect_selections(x: SubgraphSelection, y: SubgraphSelection) -> SubgraphSelection:
    if x.base != y.base:
        raise DomainMismatch("selections live on different graphs")
    vertices = x.vertices & y.vertices
    raw: dict[str, list] = {}
    ymap = y.interval_map
    for e, ivs in x.intervals:
        if e not in ymap:
            continue
        pieces = []
        for a, b in ivs:
            for c, d in ymap[e]:
                lo, hi = max(a, c), min(b, d)
                if lo <= hi:
                    pieces.append((lo, hi))
        if pieces:
            raw[e] = pieces
    return _make_selection(x.base, vertices, raw)


def full_selection(base: ReebGraph) -> SubgraphSelection:
    return _make_selection(
        base,
        set(base.vertex_ids),
        {e: [base.edge_span(e)] for e in base.edge_ids},
    )


# ---------------------------------------------------------------------------
# Band images and the backward view


def band_image(
    g: ReebGraph, eps: HeightLike, band_lo: HeightLike, band_hi: HeightLike
) -> SubgraphSelection:
    """The part of the smoothed graph swept by thickening offsets in
    [band_lo, band_hi].

    A point of the smoothing at height c belongs to the image exactly when
    its window component meets the preimage of [c - band_hi, c - band_lo];
    per component that membership is a union of closed height intervals.
    """
    require_valid(g)
    eps, band_lo, band_hi = as_height(eps), as_height(band_lo), as_height(band_hi)
    if not -eps <= band_lo <= band_hi <= eps:
        raise BandOutOfRange(
            f"band [{band_lo}, {band_hi}] must sit inside [-{eps}, {eps}]"
        )
    sm = smooth(g, eps)
    if eps == 0:
        return full_selection(sm.graph)

    def hit_interval(el) -> tuple[Fraction, Fraction]:
        kind, ident = sm.element_name(el)
        if kind == "v":
            h = g.height[ident]
            return h + band_lo, h + band_hi
        lo, hi = g.edge_span(ident)
        return lo + band_lo, hi + band_hi

    vertices: set[str] = set()
    raw: dict[str, list] = {}
    crits = sm.criticals
    # critical-level components: vertices of the output (or interior points
    # of a merged edge, which the gap pass already covers)
    for i in range(len(crits)):
        c = crits[i]
        part = sm._parts[2 * i]
        comp_hit: dict[int, bool] = {}
        for el, rep in part.items():
            if comp_hit.get(rep):
                continue
            a, b = hit_interval(el)
            if a <= c <= b:
                comp_hit[rep] = True
            else:
                comp_hit.setdefault(rep, False)
        for rep, hit in comp_hit.items():
            if not hit:
                continue
            kind, ident = sm._crit_out[i][rep]
            if kind == "v":
                vertices.add(ident)
            else:
                raw.setdefault(ident, []).append((c, c))
    # gap components: sub-intervals of the output edges
    for gi in range(len(crits) - 1):
        c_lo, c_hi = crits[gi], crits[gi + 1]
        part = sm._parts[2 * gi + 1]
        per_comp: dict[int, list] = {}
        for el, rep in part.items():
            a, b = hit_interval(el)
            a, b = max(a, c_lo), min(b, c_hi)
            if a <= b:
                per_comp.setdefault(rep, []).append((a, b))
        for rep, ivs in per_comp.items():
            raw.setdefault(sm._gap_out[gi][rep], []).extend(ivs)
    return _make_selection(sm.graph, vertices, raw)


def backward_view_selection(g: ReebGraph, params: FlowParams) -> SubgraphSelection:
    """The image of the smoothing map from the (eps - tau)-smoothing into
    the eps-smoothing, as a selection on the latter."""
    require_valid(g)
    eps, tau = params.eps, params.tau
    if tau > eps:
        raise TauExceedsEpsilon(f"backward view needs tau <= eps, got tau={tau} > eps={eps}")
    inner = smooth(g, eps - tau)
    outer = smooth(g, eps)
    if inner.graph.is_empty:
        return _make_selection(outer.graph, set(), {})

    vertices: set[str] = set()
    raw: dict[str, list] = {}

    def record(p: PointRef):
        if isinstance(p, VertexRef):
            vertices.add(p.vertex)
        else:
            raw.setdefault(p.edge, []).append((p.height, p.height))

    for v in inner.graph.vertex_ids:
        record(_carry_element(inner, outer, VertexRef(v), inner.graph.height[v]))
    for e in inner.graph.edge_ids:
        lo, hi = inner.graph.edge_span(e)
        path = trace_path(
            outer.graph,
            lo,
            hi,
            lambda h, _e=e: _carry_element(inner, outer, EdgeRef(_e, h), h),
        )
        for ce, a, b in path:
            raw.setdefault(ce, []).append((a, b))
            # a piece landing on an edge end keeps that endpoint too
            clo, chi = outer.graph.edge_span(ce)
            if a == clo:
                vertices.add(outer.graph.lo(ce))
            if b == chi:
                vertices.add(outer.graph.hi(ce))
        record(_carry_element(inner, outer, inner.graph.point_on_edge(e, lo), lo))
        record(_carry_element(inner, outer, inner.graph.point_on_edge(e, hi), hi))
    return _make_selection(outer.graph, vertices, raw)


def backward_view(g: ReebGraph, params: FlowParams) -> ReebGraph:
    """The truncated smoothing computed backwards: smooth by eps - tau,
    then push forward along the smoothing map into the eps-smoothing and
    take the image.

    Valid for tau <= eps; an oracle for the truncate-after-smoothing route
    that never runs the path-budget machinery.
    """
    return backward_view_selection(g, params).materialize()

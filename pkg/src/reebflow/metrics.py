"""Interleaving verification, search, and distance bracketing.

For a slope m in [0, 1], the flow sends eps to the truncated smoothing at
(eps, m*eps).  An eps-interleaving is a pair of maps into the flowed
graphs whose two triangles against the flow's coherence maps commute; the
distance is the infimum over eps admitting one.  Deciding existence is as
hard as graph isomorphism at eps = 0, so distances are reported as
certified brackets: a lower bound with a certificate and an upper bound
with a verified witness, never a bare number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterator

from .errors import DomainMismatch, InvalidParams, SlopePairOutOfRange
from .flowmaps import (
    ETA,
    NU,
    RHO,
    FlowSpace,
    apply_flow_functor,
    flow_space,
    make_flow_map,
)
from .graphs import (
    EdgeRef,
    HeightLike,
    Interval,
    PointRef,
    ReebGraph,
    VertexRef,
    Violation,
    as_height,
    component_images,
    components,
    require_valid,
)
from .maps import (
    ReebMorphism,
    check_morphism,
    compose,
    equal_maps,
    make_morphism,
    map_differences,
    trace_path,
    verify_morphism,
)
from .smoothing import FlowParams

INFINITE = math.inf

FOUND, NOT_FOUND, EXHAUSTED = "found", "not-found", "exhausted"


@dataclass(frozen=True)
class InterleavingWitness:
    """A pair of maps realizing an interleaving at (eps, slope m)."""

    eps: Fraction
    m: Fraction
    phi: ReebMorphism  # G -> S_eps^{m eps}(H)
    psi: ReebMorphism  # H -> S_eps^{m eps}(G)


@dataclass(frozen=True)
class Certificate:
    kind: str  # "component-count" | "image-gap" | "image-mismatch" | "exhausted" | "witness"
    detail: str = ""


@dataclass(frozen=True)
class LowerBound:
    value: Fraction | float
    certificate: Certificate


@dataclass(frozen=True)
class DistanceBracket:
    lo: Fraction | float
    hi: Fraction | float
    witness: InterleavingWitness | None
    certificate: Certificate

    @property
    def is_infinite(self) -> bool:
        return self.lo == INFINITE


@dataclass(frozen=True)
class SearchResult:
    status: str
    witness: InterleavingWitness | None
    nodes: int


class _Exhausted(Exception):
    pass


class _Budget:
    __slots__ = ("left", "spent")

    def __init__(self, n: int):
        self.left = n
        self.spent = 0

    def spend(self, k: int = 1):
        self.left -= k
        self.spent += k
        if self.left < 0:
            raise _Exhausted


# ---------------------------------------------------------------------------
# Verification


def _coherence(g: ReebGraph, eps: Fraction, m: Fraction) -> ReebMorphism:
    """The flow's structure map from level 0 to level eps along slope m.

    For positive slopes this is the up-right map; at slope zero it is the
    plain smoothing map (the two coincide where both exist).
    """
    kind = ETA if m == 0 else RHO
    return make_flow_map(g, kind, FlowParams(0, 0), FlowParams.slope(eps, m))


def verify_interleaving(
    g: ReebGraph, h: ReebGraph, w: InterleavingWitness
) -> tuple[Violation, ...]:
    """Check both triangle identities of an interleaving witness exactly."""
    require_valid(g)
    require_valid(h)
    if not 0 <= w.m <= 1:
        raise InvalidParams(f"slope must be in [0, 1], got {w.m}")
    if w.eps < 0:
        raise InvalidParams(f"eps must be >= 0, got {w.eps}")
    level = FlowParams.slope(w.eps, w.m)
    fg, fh = flow_space(g, level), flow_space(h, level)
    out: list[Violation] = []
    if w.phi.domain != g or w.phi.codomain != fh.graph:
        out.append(Violation("DomainMismatch", "phi", "expected G -> flowed H"))
    if w.psi.domain != h or w.psi.codomain != fg.graph:
        out.append(Violation("DomainMismatch", "psi", "expected H -> flowed G"))
    if out:
        return tuple(out)
    out.extend(verify_morphism(w.phi))
    out.extend(verify_morphism(w.psi))
    if out:
        return tuple(out)

    psi_flow = apply_flow_functor(w.psi, level, fg)
    phi_flow = apply_flow_functor(w.phi, level, fh)
    tri_g = compose(w.phi, psi_flow)
    tri_h = compose(w.psi, phi_flow)
    coh_g = _coherence(g, 2 * w.eps, w.m)
    coh_h = _coherence(h, 2 * w.eps, w.m)
    if not equal_maps(tri_g, coh_g):
        where = map_differences(tri_g, coh_g)[0]
        out.append(Violation("DiagramFails", "G-side", where))
    if not equal_maps(tri_h, coh_h):
        where = map_differences(tri_h, coh_h)[0]
        out.append(Violation("DiagramFails", "H-side", where))
    return tuple(out)


# ---------------------------------------------------------------------------
# Morphism enumeration


def _point_key(p: PointRef):
    if isinstance(p, VertexRef):
        return (0, p.vertex, Fraction(0))
    return (1, p.edge, p.height)


def _candidate_points(cod: ReebGraph, ht: Fraction) -> list[PointRef]:
    out: list[PointRef] = [VertexRef(v) for v in cod.vertex_ids if cod.height[v] == ht]
    for e in cod.edge_ids:
        lo, hi = cod.edge_span(e)
        if lo < ht < hi:
            out.append(EdgeRef(e, ht))
    return sorted(out, key=_point_key)


def _walks(
    cod: ReebGraph, start: PointRef, end: PointRef, budget: _Budget
) -> list[tuple]:
    """All ascending edge paths from start to end, as piece tuples.

    Heights strictly increase along a walk, so no edge repeats and the
    enumeration terminates; walks are produced in sorted edge-id order.
    """
    he = cod.point_height(end)
    out: list[tuple] = []

    def go(point: PointRef, pieces: list):
        budget.spend()
        if point == end:
            out.append(tuple(pieces))
            return
        if isinstance(point, EdgeRef):
            e = point.edge
            _, hi = cod.edge_span(e)
            if isinstance(end, EdgeRef) and end.edge == e and point.height < end.height:
                out.append(tuple(pieces + [(e, point.height, end.height)]))
                return
            if hi <= he:
                pieces.append((e, point.height, hi))
                go(VertexRef(cod.hi(e)), pieces)
                pieces.pop()
            return
        v = point.vertex
        hv = cod.height[v]
        for e in sorted(cod.up_edges[v]):
            _, hi = cod.edge_span(e)
            if isinstance(end, EdgeRef) and end.edge == e:
                out.append(tuple(pieces + [(e, hv, end.height)]))
                continue
            if hi <= he:
                pieces.append((e, hv, hi))
                go(VertexRef(cod.hi(e)), pieces)
                pieces.pop()

    go(start, [])
    return out


def _enumerate_morphisms(
    dom: ReebGraph, cod: ReebGraph, budget: _Budget
) -> Iterator[ReebMorphism]:
    """All function-preserving maps dom -> cod, in lexicographic order of
    (vertex assignment, edge path choice)."""
    dverts = sorted(dom.vertex_ids)
    dedges = sorted(dom.edge_ids)
    cands = {v: _candidate_points(cod, dom.height[v]) for v in dverts}
    if any(not cands[v] for v in dverts):
        return
    walk_cache: dict[tuple, list] = {}
    vmap: dict[str, PointRef] = {}

    def paths_for(e: str) -> list:
        start = vmap[dom.lo(e)]
        end = vmap[dom.hi(e)]
        key = (start, end)
        if key not in walk_cache:
            walk_cache[key] = _walks(cod, start, end, budget)
        return walk_cache[key]

    def assign(i: int) -> Iterator[ReebMorphism]:
        budget.spend()
        if i == len(dverts):
            yield from edge_choices(0, {})
            return
        v = dverts[i]
        for p in cands[v]:
            vmap[v] = p
            yield from assign(i + 1)
        vmap.pop(v, None)

    def edge_choices(j: int, emap: dict) -> Iterator[ReebMorphism]:
        if j == len(dedges):
            yield make_morphism(dom, cod, dict(vmap), emap)
            return
        e = dedges[j]
        for path in paths_for(e):
            emap[e] = path
            yield from edge_choices(j + 1, emap)
        emap.pop(e, None)

    yield from assign(0)


def search_interleaving(
    g: ReebGraph,
    h: ReebGraph,
    eps: HeightLike,
    m: HeightLike,
    budget: int = 200_000,
) -> SearchResult:
    """Exhaustively search for an interleaving at the given eps and slope.

    ``found`` comes with a verified witness; ``not-found`` means the whole
    finite candidate space was enumerated without success; ``exhausted``
    means the node budget ran out first.
    """
    require_valid(g)
    require_valid(h)
    eps, m = as_height(eps), as_height(m)
    level = FlowParams.slope(eps, m)
    fg, fh = flow_space(g, level), flow_space(h, level)
    tracker = _Budget(budget)
    try:
        coh_g = _coherence(g, 2 * eps, m)
        coh_h = _coherence(h, 2 * eps, m)
        psis = list(_enumerate_morphisms(h, fg.graph, tracker))
        if not psis:
            return SearchResult(NOT_FOUND, None, tracker.spent)
        psi_flows: dict[int, ReebMorphism] = {}
        for phi in _enumerate_morphisms(g, fh.graph, tracker):
            phi_flow = None
            for k, psi in enumerate(psis):
                tracker.spend()
                if k not in psi_flows:
                    psi_flows[k] = apply_flow_functor(psi, level, fg)
                if not equal_maps(compose(phi, psi_flows[k]), coh_g):
                    continue
                if phi_flow is None:
                    phi_flow = apply_flow_functor(phi, level, fh)
                if equal_maps(compose(psi, phi_flow), coh_h):
                    witness = InterleavingWitness(eps, m, phi, psi)
                    assert not verify_interleaving(g, h, witness)
                    return SearchResult(FOUND, witness, tracker.spent)
        return SearchResult(NOT_FOUND, None, tracker.spent)
    except _Exhausted:
        return SearchResult(EXHAUSTED, None, tracker.spent)


# ---------------------------------------------------------------------------
# Lower bounds


def _matching_gap(imgs_g, imgs_h) -> Fraction:
    """Bottleneck image gap over component matchings (exact for small k)."""

    def pair_gap(i: Interval, j: Interval) -> Fraction:
        return max(abs(i.lo - j.lo), abs(i.hi - j.hi), Fraction(0))

    k = len(imgs_g)
    if k <= 6:
        return min(
            max(pair_gap(a, b) for a, b in zip(imgs_g, perm))
            for perm in permutations(imgs_h)
        )
    # safe global fallback: compare overall extremes
    lo_g, hi_g = min(i.lo for i in imgs_g), max(i.hi for i in imgs_g)
    lo_h, hi_h = min(i.lo for i in imgs_h), max(i.hi for i in imgs_h)
    return max(abs(lo_g - lo_h), abs(hi_g - hi_h), Fraction(0))


def lower_bounds(g: ReebGraph, h: ReebGraph, m: HeightLike) -> LowerBound:
    """A certified lower bound for the slope-m interleaving distance.

    Below slope 1 the distance is infinite exactly when the component
    counts differ; otherwise the image gap forces a positive bound because
    flowing enlarges each component's image by only (1-m) eps.  At slope 1
    images never change, so unequal images (of matched components) make the
    distance infinite.
    """
    require_valid(g)
    require_valid(h)
    m = as_height(m)
    if not 0 <= m <= 1:
        raise InvalidParams(f"slope must be in [0, 1], got {m}")
    comps_g, comps_h = components(g), components(h)
    if len(comps_g) != len(comps_h):
        return LowerBound(
            INFINITE,
            Certificate("component-count", f"{len(comps_g)} vs {len(comps_h)} components"),
        )
    if not comps_g:
        return LowerBound(Fraction(0), Certificate("image-gap", "both graphs empty"))
    imgs_g, imgs_h = component_images(g), component_images(h)
    if m == 1:
        if sorted((i.lo, i.hi) for i in imgs_g) != sorted((i.lo, i.hi) for i in imgs_h):
            return LowerBound(
                INFINITE,
                Certificate("image-mismatch", "slope-1 flow preserves component images"),
            )
        return LowerBound(Fraction(0), Certificate("image-gap", "images match exactly"))
    gap = _matching_gap(imgs_g, imgs_h)
    return LowerBound(gap / (1 - m), Certificate("image-gap", f"image gap {gap}"))


# ---------------------------------------------------------------------------
# Coarse upper witnesses


def _graph_components(g: ReebGraph):
    """(vertex sets, per-component images) in canonical order."""
    comps = components(g)
    return comps, component_images(g)


def _comp_index_of_points(space: FlowSpace, comps_base) -> dict[frozenset, int]:
    """Map each component of the flowed graph to the index of the base
    component it came from, via the smoothing fibers."""
    base_comp_of_vertex = {}
    for i, comp in enumerate(comps_base):
        for v in comp:
            base_comp_of_vertex[v] = i
    out = {}
    for comp in components(space.graph):
        y = min(comp)
        p = space.include_point(VertexRef(y))
        ht = space.graph.height[y]
        kind, ident = space.smoothing.element_name(space.smoothing.element_at(p, ht))
        v = ident if kind == "v" else space.base.lo(ident)
        out[comp] = base_comp_of_vertex[v]
    return out


def _unique_point_locator(cod: ReebGraph, comp_vertices: frozenset):
    """Height -> the unique point of one component (asserts uniqueness)."""

    def locate(ht: Fraction) -> PointRef:
        hits = [
            VertexRef(v) for v in comp_vertices if cod.height[v] == ht
        ]
        for e in cod.edge_ids:
            if cod.lo(e) not in comp_vertices:
                continue
            lo, hi = cod.edge_span(e)
            if lo < ht < hi:
                hits.append(EdgeRef(e, ht))
        if len(hits) != 1:
            raise AssertionError(f"expected a unique point at {ht}, found {len(hits)}")
        return hits[0]

    return locate


def _map_into_zones(
    dom: ReebGraph, space: FlowSpace, pairing: dict[int, int], comps_dom, comps_base
) -> ReebMorphism:
    """The height-determined map sending each domain component into the
    single-point-per-height zone of its paired flowed component."""
    comp_of_dom_vertex = {}
    for i, comp in enumerate(comps_dom):
        for v in comp:
            comp_of_dom_vertex[v] = i
    flow_comp_of_base = {}
    for comp, bi in _comp_index_of_points(space, comps_base).items():
        flow_comp_of_base[bi] = comp
    locators = {
        i: _unique_point_locator(space.graph, flow_comp_of_base[pairing[i]])
        for i in set(comp_of_dom_vertex.values())
    }
    vmap = {
        v: locators[comp_of_dom_vertex[v]](dom.height[v]) for v in dom.vertex_ids
    }
    emap = {}
    for e in dom.edge_ids:
        lo, hi = dom.edge_span(e)
        loc = locators[comp_of_dom_vertex[dom.lo(e)]]
        emap[e] = trace_path(space.graph, lo, hi, loc)
    return check_morphism(make_morphism(dom, space.graph, vmap, emap))


def coarse_witness(g: ReebGraph, h: ReebGraph, m: HeightLike) -> InterleavingWitness:
    """A constructive interleaving at a generous eps.

    Smoothing far enough fuses each component into a zone with one point
    per height (truncation trims the residual merge and split trees when
    the slope is positive), after which the maps are forced by heights.
    Requires equal component counts, and equal matched images at slope 1.
    """
    m = as_height(m)
    comps_g, imgs_g = _graph_components(g)
    comps_h, imgs_h = _graph_components(h)
    if len(comps_g) != len(comps_h):
        raise InvalidParams("component counts differ; no finite witness exists")
    if not comps_g:
        empty = make_morphism(g, h, {}, {})
        return InterleavingWitness(Fraction(0), m, empty, empty)

    order_g = sorted(range(len(comps_g)), key=lambda i: (imgs_g[i].lo, imgs_g[i].hi))
    order_h = sorted(range(len(comps_h)), key=lambda i: (imgs_h[i].lo, imgs_h[i].hi))
    pairing = {gi: hi for gi, hi in zip(order_g, order_h)}
    if m == 1 and any(
        (imgs_g[i].lo, imgs_g[i].hi) != (imgs_h[pairing[i]].lo, imgs_h[pairing[i]].hi)
        for i in pairing
    ):
        raise InvalidParams("slope-1 witness needs equal matched images")

    eps = Fraction(0)
    for gi, hi in pairing.items():
        a1, b1 = imgs_g[gi].lo, imgs_g[gi].hi
        a2, b2 = imgs_h[hi].lo, imgs_h[hi].hi
        eps = max(eps, b1 - a2, b2 - a1)
        if 0 < m:
            eps = max(eps, (b1 - a1) / m, (b2 - a2) / m)
        if m < 1:
            gap = max(abs(a1 - a2), abs(b1 - b2), Fraction(0))
            eps = max(eps, gap / (1 - m))
    if eps == 0:
        eps = Fraction(1)

    level = FlowParams.slope(eps, m)
    fg, fh = flow_space(g, level), flow_space(h, level)
    phi = _map_into_zones(g, fh, pairing, comps_g, comps_h)
    psi = _map_into_zones(h, fg, {v: k for k, v in pairing.items()}, comps_h, comps_g)
    w = InterleavingWitness(eps, m, phi, psi)
    bad = verify_interleaving(g, h, w)
    if bad:
        raise AssertionError(f"coarse witness failed verification: {bad[0]}")
    return w


# ---------------------------------------------------------------------------
# Bisection


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with the smallest denominator strictly inside (lo, hi).

    Keeps bisection probes at small denominators so the exact arithmetic
    behind each probe stays cheap.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    floor_lo = lo.numerator // lo.denominator
    if floor_lo + 1 < hi:
        return Fraction(floor_lo + 1)
    lo_frac, hi_frac = lo - floor_lo, hi - floor_lo
    if lo_frac == 0:
        k = hi_frac.denominator // hi_frac.numerator + 1
        return floor_lo + Fraction(1, k)
    return floor_lo + 1 / simplest_between(1 / hi_frac, 1 / lo_frac)


def estimate_distance(
    g: ReebGraph,
    h: ReebGraph,
    m: HeightLike,
    tol: HeightLike,
    search_budget: int = 200_000,
    max_probes: int = 40,
) -> DistanceBracket:
    """Bracket the slope-m interleaving distance to within ``tol``.

    The lower end carries a certificate (component mismatch, image gap, or
    search exhaustion); the upper end always carries a verified witness
    when finite.  Exhausting the search budget stops refinement and returns
    the widest certified bracket.
    """
    m, tol = as_height(m), as_height(tol)
    if tol <= 0:
        raise InvalidParams(f"tol must be positive, got {tol}")
    lb = lower_bounds(g, h, m)
    if lb.value == INFINITE:
        return DistanceBracket(INFINITE, INFINITE, None, lb.certificate)
    lo = lb.value
    certificate = lb.certificate

    probe = search_interleaving(g, h, lo, m, budget=search_budget)
    if probe.status == FOUND:
        return DistanceBracket(lo, lo, probe.witness, certificate)

    witness = coarse_witness(g, h, m)
    hi = witness.eps
    if probe.status == EXHAUSTED:
        return DistanceBracket(
            lo, hi, witness, Certificate("exhausted", f"search exhausted at eps={lo}")
        )

    probes = 1
    while hi - lo > tol and probes < max_probes:
        mid = simplest_between(lo, hi)
        result = search_interleaving(g, h, mid, m, budget=search_budget)
        probes += 1
        if result.status == FOUND:
            hi, witness = mid, result.witness
        elif result.status == NOT_FOUND:
            lo = mid
        else:
            certificate = Certificate("exhausted", f"search exhausted at eps={mid}")
            break
    return DistanceBracket(lo, hi, witness, certificate)


# ---------------------------------------------------------------------------
# Transfer between slopes


def transfer_interleaving(
    w: InterleavingWitness, m_target: HeightLike
) -> InterleavingWitness:
    """Carry a verified interleaving to another slope, constructively.

    Downward transfers post-compose with the deeper-truncation inclusion
    at the same eps.  Upward transfers (target slope above the witness's,
    within the admissible wedge) post-compose with the up-right map and
    rescale eps by (1 - m) / (1 - m_target).
    """
    m_target = as_height(m_target)
    if not 0 <= m_target <= 1:
        raise InvalidParams(f"slope must be in [0, 1], got {m_target}")
    m0, eps = w.m, w.eps
    g, h = w.phi.domain, w.psi.domain
    if m_target == m0:
        return w
    if m_target < m0:
        src, dst = FlowParams.slope(eps, m0), FlowParams.slope(eps, m_target)
        phi = compose(w.phi, make_flow_map(h, NU, src, dst))
        psi = compose(w.psi, make_flow_map(g, NU, src, dst))
        return InterleavingWitness(eps, m_target, phi, psi)
    if not m_target - m0 < 1 - m_target:
        raise SlopePairOutOfRange(
            f"upward transfer needs m' - m < 1 - m', got m={m0}, m'={m_target}"
        )
    delta = (1 - m0) / (1 - m_target)
    src, dst = FlowParams.slope(eps, m0), FlowParams.slope(delta * eps, m_target)
    phi = compose(w.phi, make_flow_map(h, RHO, src, dst))
    psi = compose(w.psi, make_flow_map(g, RHO, src, dst))
    return InterleavingWitness(delta * eps, m_target, phi, psi)


def transfer_chain(
    w: InterleavingWitness, m_target: HeightLike
) -> tuple[InterleavingWitness, tuple[tuple[Fraction, Fraction, Fraction], ...]]:
    """Carry a witness to a distant slope by chaining admissible transfers.

    A single upward transfer only reaches slopes below (1 + m) / 2, so wider
    jumps zigzag through intermediate slopes.  Returns the final witness and
    the hops as (from-slope, to-slope, eps-factor) triples; the product of
    the factors is the constant this particular chain certifies, with no
    claim of optimality.
    """
    m_target = as_height(m_target)
    hops: list[tuple[Fraction, Fraction, Fraction]] = []
    current = w
    while current.m != m_target:
        m0 = current.m
        if m_target < m0:
            step = m_target  # downward hops are unconstrained
        else:
            limit = (1 + m0) / 2  # upward hops must stay strictly below this
            step = m_target if m_target < limit else (m0 + limit) / 2
        nxt = transfer_interleaving(current, step)
        hops.append((m0, step, nxt.eps / current.eps))
        current = nxt
    return current, tuple(hops)

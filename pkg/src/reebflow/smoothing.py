"""Interlevel-set smoothing and monotone-path truncation.

Smoothing by eps replaces the graph with the Reeb graph of its vertical
thickening; we never materialize the product.  The slice of the thickened
space at level c is homeomorphic to the preimage of the height window
[c - eps, c + eps], so a sweep over the finitely many window-boundary
levels {f(v) +- eps}, with union-find on window components, recovers the
smoothed graph exactly.  Window membership of a vertex or edge is constant
between consecutive sweep levels, which is what makes one sample per gap
sufficient.

Truncation by tau keeps the points that still have both an ascending and a
descending path of height tau; per edge that surviving set is a single
closed segment computable from the endpoint path budgets.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import (
    InvalidParams,
    NegativeEpsilon,
    NegativeTau,
    NotInTruncation,
)
from .graphs import (
    EMPTY_GRAPH,
    EdgeRef,
    HeightLike,
    PointRef,
    ReebGraph,
    VertexRef,
    _monotone_budgets,
    as_height,
    require_valid,
)
from .maps import ReebMorphism, identity_morphism, make_morphism, merge_pieces

# Sweep elements are small ints: vertices first, then edges.
Element = int


@dataclass(frozen=True)
class FlowParams:
    """A smoothing amount and a truncation amount, both nonnegative."""

    eps: Fraction
    tau: Fraction

    def __post_init__(self):
        object.__setattr__(self, "eps", as_height(self.eps))
        object.__setattr__(self, "tau", as_height(self.tau))
        if self.eps < 0:
            raise NegativeEpsilon(f"eps must be >= 0, got {self.eps}")
        if self.tau < 0:
            raise NegativeTau(f"tau must be >= 0, got {self.tau}")

    @classmethod
    def slope(cls, eps: HeightLike, m: HeightLike) -> "FlowParams":
        """Parameters on the line tau = m * eps, for slope m in [0, 1]."""
        eps, m = as_height(eps), as_height(m)
        if not 0 <= m <= 1:
            raise InvalidParams(f"slope must be in [0, 1], got {m}")
        return cls(eps, m * eps)


class SmoothResult:
    """The smoothed graph together with the sweep bookkeeping.

    Besides the output ``graph`` and the map ``eta`` from the input into it,
    this object can answer where any input vertex or edge sits inside the
    output (``locate``) and which input pieces an output point represents
    (``fiber_elements``); the flow-map machinery is built on those two
    queries.
    """

    def __init__(self, base: ReebGraph, eps: Fraction):
        self.base = base
        self.eps = eps
        self._vids = base.vertex_ids
        self._eids = base.edge_ids
        self._elem_of_vertex = {v: i for i, v in enumerate(self._vids)}
        n = len(self._vids)
        self._elem_of_edge = {e: n + j for j, e in enumerate(self._eids)}
        self._n = n
        self._build()

    # -- construction -----------------------------------------------------

    def _element_interval(self, el: Element) -> tuple[Fraction, Fraction]:
        if el < self._n:
            h = self.base.height[self._vids[el]]
            return h - self.eps, h + self.eps
        lo, hi = self.base.edge_span(self._eids[el - self._n])
        return lo - self.eps, hi + self.eps

    def _partition(self, active: Iterable[Element]) -> dict[Element, Element]:
        """Window components: vertices join every incident edge."""
        active = set(active)
        parent = {el: el for el in active}

        def find(x):
            root = x
            while parent[root] != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        for el in active:
            if el >= self._n:
                continue
            v = self._vids[el]
            for e in self.base.edges_at[v]:
                ee = self._elem_of_edge[e]
                ra, rb = find(el), find(ee)
                if ra != rb:
                    if rb < ra:
                        ra, rb = rb, ra
                    parent[rb] = ra
        return {el: find(el) for el in active}

    def _build(self):
        base, eps = self.base, self.eps
        if base.is_empty:
            self.criticals: tuple[Fraction, ...] = ()
            self._parts: list[dict[Element, Element]] = []
            self.graph = EMPTY_GRAPH
            self._crit_out: list[dict] = []
            self._gap_out: list[dict] = []
            self._gap_rep: list[dict] = []
            self._edge_crit_rep: list[dict] = []
            self._vertex_origin: dict[str, tuple[int, Element]] = {}
            return

        crit_set = set()
        for _, h in base.vertex_rows:
            crit_set.add(h - eps)
            crit_set.add(h + eps)
        criticals = sorted(crit_set)
        self.criticals = tuple(criticals)
        K = len(criticals)

        starts: dict[Fraction, list[Element]] = defaultdict(list)
        stops: dict[Fraction, list[Element]] = defaultdict(list)
        for el in range(self._n + len(self._eids)):
            lo, hi = self._element_interval(el)
            starts[lo].append(el)
            stops[hi].append(el)

        # Strata: index 2i is the level criticals[i]; 2i+1 the open gap above it.
        parts: list[dict[Element, Element]] = []
        active: set[Element] = set()
        for i, c in enumerate(criticals):
            active.update(starts.get(c, ()))
            parts.append(self._partition(active))
            active.difference_update(stops.get(c, ()))
            if i < K - 1:
                parts.append(self._partition(active))
        self._parts = parts

        # Bands (edges-to-be) and their attachments.  A band at gap i is a
        # component of the gap window; its component at the bounding levels
        # gives its endpoints, because gap membership is a subset of both.
        comp_up: dict[tuple[int, Element], list] = defaultdict(list)
        comp_down: dict[tuple[int, Element], list] = defaultdict(list)
        band_lower: dict[tuple[int, Element], tuple[int, Element]] = {}
        band_upper: dict[tuple[int, Element], tuple[int, Element]] = {}
        for gi in range(K - 1):
            gap_part = parts[2 * gi + 1]
            for r in sorted(set(gap_part.values())):
                lo_comp = (gi, parts[2 * gi][r])
                hi_comp = (gi + 1, parts[2 * gi + 2][r])
                band = (gi, r)
                band_lower[band] = lo_comp
                band_upper[band] = hi_comp
                comp_up[lo_comp].append(band)
                comp_down[hi_comp].append(band)

        crit_comps: list[tuple[int, Element]] = []
        for i in range(K):
            for r in sorted(set(parts[2 * i].values())):
                crit_comps.append((i, r))

        def suppressed(comp) -> bool:
            return len(comp_up[comp]) == 1 and len(comp_down[comp]) == 1

        vrows: list[tuple[str, Fraction]] = []
        crit_out: list[dict[Element, tuple[str, str]]] = [dict() for _ in range(K)]
        vertex_origin: dict[str, tuple[int, Element]] = {}
        for i, r in crit_comps:
            if suppressed((i, r)):
                continue
            vid = f"v{len(vrows)}"
            vrows.append((vid, criticals[i]))
            crit_out[i][r] = ("v", vid)
            vertex_origin[vid] = (i, r)

        erows: list[tuple[str, str, str]] = []
        gap_out: list[dict[Element, str]] = [dict() for _ in range(max(K - 1, 0))]
        gap_rep: list[dict[str, Element]] = [dict() for _ in range(max(K - 1, 0))]
        edge_crit_rep: list[dict[str, Element]] = [dict() for _ in range(K)]
        for start in sorted(band_lower):
            if suppressed(band_lower[start]):
                continue  # interior of a chain; reached by walking
            eid = f"e{len(erows)}"
            chain = [start]
            while suppressed(band_upper[chain[-1]]):
                chain.append(comp_up[band_upper[chain[-1]]][0])
            lo_i, lo_r = band_lower[start]
            hi_i, hi_r = band_upper[chain[-1]]
            erows.append((eid, crit_out[lo_i][lo_r][1], crit_out[hi_i][hi_r][1]))
            for band in chain:
                gi, r = band
                gap_out[gi][r] = eid
                gap_rep[gi][eid] = r
            for band in chain[1:]:
                i, r = band_lower[band]
                crit_out[i][r] = ("e", eid)
                edge_crit_rep[i][eid] = r

        self.graph = ReebGraph(tuple(vrows), tuple(erows))
        self._crit_out = crit_out
        self._gap_out = gap_out
        self._gap_rep = gap_rep
        self._edge_crit_rep = edge_crit_rep
        self._vertex_origin = vertex_origin

    # -- queries ------------------------------------------------------------

    @property
    def levels(self) -> tuple[Fraction, ...]:
        """The sorted sweep levels {f(v) - eps, f(v) + eps}."""
        return self.criticals

    def _stratum_of(self, h: Fraction) -> int:
        crits = self.criticals
        i = bisect_left(crits, h)
        if i < len(crits) and crits[i] == h:
            return 2 * i
        if i == 0 or i == len(crits):
            raise ValueError(f"height {h} outside sweep range")
        return 2 * i - 1

    def element_of(self, kind: str, ident: str) -> Element:
        return (
            self._elem_of_vertex[ident] if kind == "v" else self._elem_of_edge[ident]
        )

    def element_name(self, el: Element) -> tuple[str, str]:
        if el < self._n:
            return ("v", self._vids[el])
        return ("e", self._eids[el - self._n])

    def locate(self, el: Element, h: Fraction) -> PointRef:
        """The output point at height ``h`` whose window component contains
        the given input element."""
        si = self._stratum_of(h)
        rep = self._parts[si][el]
        if si % 2 == 0:
            kind, ident = self._crit_out[si // 2][rep]
            return VertexRef(ident) if kind == "v" else EdgeRef(ident, h)
        return EdgeRef(self._gap_out[si // 2][rep], h)

    def locate_point(self, p: PointRef) -> PointRef:
        """Where a point of the input lands in the output (the map eta)."""
        if isinstance(p, VertexRef):
            el = self._elem_of_vertex[p.vertex]
            return self.locate(el, self.base.height[p.vertex])
        return self.locate(self._elem_of_edge[p.edge], p.height)

    def _rep_at(self, p: PointRef, h: Fraction) -> tuple[int, Element]:
        if isinstance(p, VertexRef):
            i, rep = self._vertex_origin[p.vertex]
            return 2 * i, rep
        si = self._stratum_of(h)
        if si % 2 == 0:
            return si, self._edge_crit_rep[si // 2][p.edge]
        return si, self._gap_rep[si // 2][p.edge]

    def element_at(self, p: PointRef, h: Fraction) -> Element:
        """One input element of the window component behind an output point."""
        return self._rep_at(p, h)[1]

    def fiber_elements(self, p: PointRef, h: Fraction) -> frozenset[tuple[str, str]]:
        """All input vertices and edges meeting the window component behind
        the output point ``p`` at height ``h``."""
        si, rep = self._rep_at(p, h)
        part = self._parts[si]
        return frozenset(self.element_name(el) for el, r in part.items() if r == rep)

    def rep_point(self, p: PointRef, h: Fraction) -> PointRef:
        """A concrete input point inside the window component behind ``p``.

        Prefers a vertex of the component; otherwise picks the point of a
        crossing edge closest to level ``h`` inside the window.
        """
        si, rep = self._rep_at(p, h)
        part = self._parts[si]
        members = sorted(el for el, r in part.items() if r == rep)
        for el in members:
            if el < self._n:
                return VertexRef(self._vids[el])
        e = self._eids[members[0] - self._n]
        lo, hi = self.base.edge_span(e)
        x = min(max(h, max(lo, h - self.eps)), min(hi, h + self.eps))
        return self.base.point_on_edge(e, x)

    def _eta_build(self) -> ReebMorphism:
        base = self.base
        vmap = {v: self.locate(self._elem_of_vertex[v], base.height[v]) for v in base.vertex_ids}
        emap = {}
        crits = self.criticals
        for e in base.edge_ids:
            lo, hi = base.edge_span(e)
            el = self._elem_of_edge[e]
            pieces = []
            gi = max(bisect_right(crits, lo) - 1, 0)
            while gi < len(crits) - 1 and crits[gi] < hi:
                a, b = max(lo, crits[gi]), min(hi, crits[gi + 1])
                if a < b:
                    rep = self._parts[2 * gi + 1][el]
                    pieces.append((self._gap_out[gi][rep], a, b))
                gi += 1
            emap[e] = merge_pieces(pieces)
        return make_morphism(base, self.graph, vmap, emap)

    @property
    def eta(self) -> ReebMorphism:
        if "_eta" not in self.__dict__:
            self.__dict__["_eta"] = self._eta_build()
        return self.__dict__["_eta"]


class _TrivialSmooth(SmoothResult):
    """Smoothing by zero: the graph itself, with identity bookkeeping."""

    def __init__(self, base: ReebGraph):
        self.base = base
        self.eps = Fraction(0)
        self._vids = base.vertex_ids
        self._eids = base.edge_ids
        self._elem_of_vertex = {v: i for i, v in enumerate(self._vids)}
        n = len(self._vids)
        self._elem_of_edge = {e: n + j for j, e in enumerate(self._eids)}
        self._n = n
        self.graph = base
        self.criticals = tuple(sorted({h for _, h in base.vertex_rows}))

    def locate(self, el: Element, h: Fraction) -> PointRef:
        if el < self._n:
            v = self._vids[el]
            if self.base.height[v] != h:
                raise ValueError(f"vertex {v} is not at height {h}")
            return VertexRef(v)
        return self.base.point_on_edge(self._eids[el - self._n], h)

    def locate_point(self, p: PointRef) -> PointRef:
        return p

    def element_at(self, p: PointRef, h: Fraction) -> Element:
        if isinstance(p, VertexRef):
            return self._elem_of_vertex[p.vertex]
        return self._elem_of_edge[p.edge]

    def fiber_elements(self, p: PointRef, h: Fraction) -> frozenset[tuple[str, str]]:
        if isinstance(p, VertexRef):
            # the level-set point at a vertex also meets every incident edge
            return frozenset(
                [("v", p.vertex)] + [("e", e) for e in self.base.edges_at[p.vertex]]
            )
        return frozenset((("e", p.edge),))

    def rep_point(self, p: PointRef, h: Fraction) -> PointRef:
        return p

    @property
    def eta(self) -> ReebMorphism:
        if "_eta" not in self.__dict__:
            self.__dict__["_eta"] = identity_morphism(self.base)
        return self.__dict__["_eta"]


def smooth(g: ReebGraph, eps: HeightLike) -> SmoothResult:
    """Smooth a graph: extend extrema by eps and collapse cycles of height
    at most 2*eps.  Zero smoothing returns the input itself."""
    require_valid(g)
    eps = as_height(eps)
    if eps < 0:
        raise NegativeEpsilon(f"eps must be >= 0, got {eps}")
    if eps == 0:
        return _TrivialSmooth(g)
    return SmoothResult(g, eps)


# ---------------------------------------------------------------------------
# Truncation


@dataclass(frozen=True)
class RemovedSet:
    """An open set of removed points: whole vertices plus, per edge, an open
    sub-segment against one endpoint (described by its interior threshold)."""

    vertices: frozenset[str]
    # removed_up: {edge: t} means points of the edge strictly above t lack an
    # ascending budget; removed_down symmetric (strictly below t).
    edge_cuts: tuple[tuple[str, Fraction], ...]


class TruncationResult:
    """The subgraph surviving a tau-truncation, with its embedding data.

    ``intervals`` records per original edge the closed height range that
    survives (or None).  Surviving edges keep their ids; cut points become
    vertices named ``"<edge>@<height>"``.
    """

    def __init__(self, base: ReebGraph, tau: Fraction):
        self.base = base
        self.tau = tau
        b = _monotone_budgets(base, tau)
        scale = b.scale

        def exact(x) -> Fraction:
            return Fraction(x, scale) if scale is not None else x

        t = tau.numerator * (scale // tau.denominator) if scale is not None else tau
        idx = b.index
        kept = frozenset(
            v for i, v in enumerate(b.vids) if b.up[i] >= t and b.down[i] >= t
        )
        self.kept_vertices = kept
        intervals: dict[str, tuple[Fraction, Fraction] | None] = {}
        height_of = base.height
        vrows = [(v, height_of[v]) for v in kept]
        erows: list[tuple[str, str, str]] = []
        up_cuts: list[tuple[str, Fraction]] = []
        down_cuts: list[tuple[str, Fraction]] = []
        hs, ups, downs = b.heights, b.up, b.down
        for e, u, w in base.edge_rows:
            iu, iw = idx[u], idx[w]
            if hs[iu] > hs[iw]:
                iu, iw = iw, iu
                u, w = w, u
            lo, hi = hs[iu], hs[iw]
            a_raw = lo + t - downs[iu]
            b_raw = hi + ups[iw] - t
            if a_raw > lo:
                down_cuts.append((e, exact(a_raw if a_raw < hi else hi)))
            if b_raw < hi:
                up_cuts.append((e, exact(b_raw if b_raw > lo else lo)))
            a = a_raw if a_raw > lo else lo
            bb = b_raw if b_raw < hi else hi
            if a > bb:
                intervals[e] = None
                continue
            # reuse existing Fraction objects on the fully surviving side
            a_h = height_of[u] if a == lo else exact(a)
            b_h = height_of[w] if bb == hi else exact(bb)
            intervals[e] = (a_h, b_h)
            if a == bb:
                if lo < a < hi:
                    vrows.append((f"{e}@{a_h}", a_h))
                continue
            bottom = u if a == lo else f"{e}@{a_h}"
            top = w if bb == hi else f"{e}@{b_h}"
            if a > lo:
                vrows.append((bottom, a_h))
            if bb < hi:
                vrows.append((top, b_h))
            erows.append((e, bottom, top))
        self.intervals = intervals
        self.graph = ReebGraph(tuple(vrows), tuple(erows))
        self.removed_up = RemovedSet(
            frozenset(v for i, v in enumerate(b.vids) if b.up[i] < t),
            tuple(sorted(up_cuts)),
        )
        self.removed_down = RemovedSet(
            frozenset(v for i, v in enumerate(b.vids) if b.down[i] < t),
            tuple(sorted(down_cuts)),
        )

    def pull(self, p: PointRef) -> PointRef:
        """Carry a point of the original graph into the truncated graph."""
        if isinstance(p, VertexRef):
            if p.vertex not in self.kept_vertices:
                raise NotInTruncation(f"vertex {p.vertex} was removed")
            return p
        span = self.intervals.get(p.edge)
        if span is None or not span[0] <= p.height <= span[1]:
            raise NotInTruncation(f"point {p} was removed")
        a, b = span
        if a == b:
            lo, hi = self.base.edge_span(p.edge)
            if a == lo:
                return VertexRef(self.base.lo(p.edge))
            if a == hi:
                return VertexRef(self.base.hi(p.edge))
            return VertexRef(f"{p.edge}@{a}")
        return self.graph.point_on_edge(p.edge, p.height)

    def include(self) -> ReebMorphism:
        """The inclusion of the truncated graph back into the original."""
        vmap: dict[str, PointRef] = {}
        for v in self.graph.vertex_ids:
            if v in self.kept_vertices:
                vmap[v] = VertexRef(v)
            else:
                edge, h = v.rsplit("@", 1)
                vmap[v] = self.base.point_on_edge(edge, Fraction(h))
        emap = {e: ((e,) + self.intervals[e],) for e in self.graph.edge_ids}
        return make_morphism(self.graph, self.base, vmap, emap)


def truncate(g: ReebGraph, tau: HeightLike) -> TruncationResult:
    """Remove every point lacking an ascending or descending path of height
    tau.  The result is closed: boundary points with exactly tau of budget
    stay."""
    tau = as_height(tau)
    if tau < 0:
        raise NegativeTau(f"tau must be >= 0, got {tau}")
    return TruncationResult(g, tau)


def truncated_smooth(g: ReebGraph, params: FlowParams) -> ReebGraph:
    """Smooth by eps, then truncate by tau."""
    return truncate(smooth(g, params.eps).graph, params.tau).graph

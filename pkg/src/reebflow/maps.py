"""Piecewise-linear function-preserving maps between Reeb graphs.

A morphism is finitely presented: each domain vertex goes to a point of the
codomain at the same height, and each domain edge goes to an ascending chain
of edge segments (the image of the edge walked from its lower endpoint to
its upper endpoint).  Height preservation forces linear interpolation on
each piece, so equality of maps is decidable and exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import DomainMismatch, MorphismError
from .graphs import (
    EdgeRef,
    PointRef,
    ReebGraph,
    VertexRef,
    Violation,
    require_valid,
)

# One ascending run along a codomain edge: (edge id, from-height, to-height).
Piece = tuple[str, Fraction, Fraction]
EdgePath = tuple[Piece, ...]


def merge_pieces(pieces: Iterable[Piece]) -> EdgePath:
    """Drop zero-length pieces and fuse consecutive runs on the same edge."""
    out: list[Piece] = []
    for e, a, b in pieces:
        if a == b:
            continue
        if out and out[-1][0] == e and out[-1][2] == a:
            out[-1] = (e, out[-1][1], b)
        else:
            out.append((e, a, b))
    return tuple(out)


def clip_path(path: EdgePath, a: Fraction, b: Fraction) -> EdgePath:
    """The sub-path covering heights [a, b] (empty when a == b)."""
    out = []
    for e, lo, hi in path:
        x, y = max(lo, a), min(hi, b)
        if x < y:
            out.append((e, x, y))
    return merge_pieces(out)


def eval_path(cod: ReebGraph, path: EdgePath, h: Fraction) -> PointRef:
    """The point of the codomain that the path passes through at height ``h``."""
    if not path:
        raise ValueError("cannot evaluate an empty path")
    if not path[0][1] <= h <= path[-1][2]:
        raise ValueError(f"height {h} outside path span [{path[0][1]}, {path[-1][2]}]")
    for e, lo, hi in path:
        if lo <= h <= hi:
            return cod.point_on_edge(e, h)
    raise AssertionError("non-contiguous path")


def normalize_point(cod: ReebGraph, p: PointRef) -> PointRef:
    if isinstance(p, EdgeRef):
        return cod.point_on_edge(p.edge, p.height)
    return p


@dataclass(frozen=True)
class ReebMorphism:
    domain: ReebGraph
    codomain: ReebGraph
    vertex_rows: tuple[tuple[str, PointRef], ...]
    edge_rows: tuple[tuple[str, EdgePath], ...]

    def _cache(self, name, build):
        store = self.__dict__
        if name not in store:
            store[name] = build()
        return store[name]

    @property
    def vertex_map(self) -> dict[str, PointRef]:
        return self._cache("_vmap", lambda: dict(self.vertex_rows))

    @property
    def edge_map(self) -> dict[str, EdgePath]:
        return self._cache("_emap", lambda: dict(self.edge_rows))

    def __call__(self, p: PointRef) -> PointRef:
        """Evaluate the map at any point of the domain."""
        if isinstance(p, VertexRef):
            return self.vertex_map[p.vertex]
        return eval_path(self.codomain, self.edge_map[p.edge], p.height)


def make_morphism(
    domain: ReebGraph,
    codomain: ReebGraph,
    vertex_map: Mapping[str, PointRef],
    edge_map: Mapping[str, Iterable[Piece]],
) -> ReebMorphism:
    """Assemble a morphism in canonical form (normalized points, fused paths)."""
    vrows = tuple(
        sorted((v, normalize_point(codomain, p)) for v, p in vertex_map.items())
    )
    erows = tuple(sorted((e, merge_pieces(path)) for e, path in edge_map.items()))
    return ReebMorphism(domain, codomain, vrows, erows)


def identity_morphism(g: ReebGraph) -> ReebMorphism:
    return make_morphism(
        g,
        g,
        {v: VertexRef(v) for v in g.vertex_ids},
        {e: ((e,) + g.edge_span(e),) for e in g.edge_ids},
    )


# ---------------------------------------------------------------------------
# Verification


def _point_ok(cod: ReebGraph, p: PointRef) -> str | None:
    if isinstance(p, VertexRef):
        return None if p.vertex in cod.height else f"unknown vertex {p.vertex}"
    if p.edge not in cod.ends:
        return f"unknown edge {p.edge}"
    lo, hi = cod.edge_span(p.edge)
    if not lo < p.height < hi:
        return f"height {p.height} not interior to edge {p.edge}"
    return None


def verify_morphism(m: ReebMorphism) -> tuple[Violation, ...]:
    """Check height preservation, continuity, and monotonicity of the map.

    Returns the (possibly empty) tuple of violations.
    """
    dom, cod = m.domain, m.codomain
    require_valid(dom)
    require_valid(cod)
    out: list[Violation] = []

    vmap = m.vertex_map
    if set(vmap) != set(dom.vertex_ids):
        missing = sorted(set(dom.vertex_ids) - set(vmap))
        extra = sorted(set(vmap) - set(dom.vertex_ids))
        out.append(Violation("VertexMapMismatch", ",".join(missing + extra)))
    for v in sorted(set(vmap) & set(dom.vertex_ids)):
        p = vmap[v]
        bad = _point_ok(cod, p)
        if bad:
            out.append(Violation("BadImagePoint", v, bad))
            continue
        if cod.point_height(p) != dom.height[v]:
            out.append(
                Violation(
                    "NotFunctionPreserving",
                    v,
                    f"height {dom.height[v]} mapped to {cod.point_height(p)}",
                )
            )

    emap = m.edge_map
    if set(emap) != set(dom.edge_ids):
        missing = sorted(set(dom.edge_ids) - set(emap))
        extra = sorted(set(emap) - set(dom.edge_ids))
        out.append(Violation("EdgeMapMismatch", ",".join(missing + extra)))
    for e in sorted(set(emap) & set(dom.edge_ids)):
        path = emap[e]
        lo_h, hi_h = dom.edge_span(e)
        if not path:
            out.append(Violation("NonMonotonePath", e, "empty path"))
            continue
        ok = True
        for ce, a, b in path:
            if ce not in cod.ends:
                out.append(Violation("BadImagePoint", e, f"unknown edge {ce}"))
                ok = False
                break
            clo, chi = cod.edge_span(ce)
            if not (clo <= a < b <= chi):
                out.append(
                    Violation("NonMonotonePath", e, f"piece ({ce},{a},{b}) not ascending within [{clo},{chi}]")
                )
                ok = False
                break
        if not ok:
            continue
        if path[0][1] != lo_h or path[-1][2] != hi_h:
            out.append(
                Violation(
                    "NotFunctionPreserving",
                    e,
                    f"path spans [{path[0][1]}, {path[-1][2]}], edge spans [{lo_h}, {hi_h}]",
                )
            )
            continue
        for i in range(len(path) - 1):
            e1, _, b1 = path[i]
            e2, a2, _ = path[i + 1]
            if b1 != a2:
                out.append(Violation("NonMonotonePath", e, f"gap between pieces {i} and {i+1}"))
                ok = False
                break
            if cod.point_on_edge(e1, b1) != cod.point_on_edge(e2, a2):
                out.append(
                    Violation("Discontinuous", e, f"pieces {i} and {i+1} do not share a point at {b1}")
                )
                ok = False
                break
        if not ok:
            continue
        bottom_image = vmap.get(dom.lo(e))
        if bottom_image is not None and _point_ok(cod, bottom_image) is None:
            start = cod.point_on_edge(path[0][0], path[0][1])
            if start != normalize_point(cod, bottom_image):
                out.append(Violation("Discontinuous", e, "path start disagrees with lower endpoint image"))
        top_image = vmap.get(dom.hi(e))
        if top_image is not None and _point_ok(cod, top_image) is None:
            end = cod.point_on_edge(path[-1][0], path[-1][2])
            if end != normalize_point(cod, top_image):
                out.append(Violation("Discontinuous", e, "path end disagrees with upper endpoint image"))
    return tuple(out)


def check_morphism(m: ReebMorphism) -> ReebMorphism:
    violations = verify_morphism(m)
    if violations:
        raise MorphismError(violations)
    return m


# ---------------------------------------------------------------------------
# Algebra


def compose(first: ReebMorphism, then: ReebMorphism) -> ReebMorphism:
    """Diagrammatic composition: ``compose(f, g)`` applies f, then g."""
    if first.codomain != then.domain:
        raise DomainMismatch("codomain of the first map must equal domain of the second")
    vmap = {v: then(p) for v, p in first.vertex_map.items()}
    emap = {}
    for e, path in first.edge_map.items():
        pieces: list[Piece] = []
        for ce, a, b in path:
            pieces.extend(clip_path(then.edge_map[ce], a, b))
        emap[e] = merge_pieces(pieces)
    return check_morphism(make_morphism(first.domain, then.codomain, vmap, emap))


def equal_maps(a: ReebMorphism, b: ReebMorphism) -> bool:
    """Exact equality of maps (canonical forms compared piecewise)."""
    if a.domain != b.domain or a.codomain != b.codomain:
        raise DomainMismatch("maps must share domain and codomain")
    return a.vertex_rows == b.vertex_rows and a.edge_rows == b.edge_rows


def map_differences(a: ReebMorphism, b: ReebMorphism) -> tuple[str, ...]:
    """Human-readable locations where two maps disagree."""
    if a.domain != b.domain or a.codomain != b.codomain:
        raise DomainMismatch("maps must share domain and codomain")
    out = []
    for v in a.domain.vertex_ids:
        if a.vertex_map[v] != b.vertex_map[v]:
            out.append(f"vertex {v}: {a.vertex_map[v]} vs {b.vertex_map[v]}")
    for e in a.domain.edge_ids:
        if a.edge_map[e] != b.edge_map[e]:
            out.append(f"edge {e}: {a.edge_map[e]} vs {b.edge_map[e]}")
    return tuple(out)


# ---------------------------------------------------------------------------
# Path tracing

PointAt = Callable[[Fraction], PointRef]


def trace_path(
    cod: ReebGraph, lo: Fraction, hi: Fraction, point_at: PointAt
) -> EdgePath:
    """Reconstruct an ascending path from a pointwise description.

    ``point_at(h)`` must give the point of the path at height ``h`` for any
    ``h`` in (lo, hi).  A continuous ascending path can only change edges at
    codomain vertex heights, so sampling one midpoint per stratum between
    those heights pins the path down exactly.
    """
    if lo == hi:
        raise ValueError("a path must span a nonempty height interval")
    cuts = sorted({h for _, h in cod.vertex_rows if lo < h < hi} | {lo, hi})
    pieces: list[Piece] = []
    for a, b in zip(cuts, cuts[1:]):
        mid = (a + b) / 2
        p = point_at(mid)
        if not isinstance(p, EdgeRef) or p.height != mid:
            raise AssertionError(f"path sample at {mid} is not interior: {p}")
        pieces.append((p.edge, a, b))
    return merge_pieces(pieces)

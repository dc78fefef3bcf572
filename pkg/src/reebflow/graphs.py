"""Reeb graph data model with exact rational heights.

A Reeb graph is a finite multigraph together with a height per vertex,
interpolated linearly along each edge; no edge may join two vertices of
equal height.  Every quantity in this package is an exact rational
(`fractions.Fraction`), so all downstream identities can be checked with
equality rather than tolerances.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import gcd
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import GraphInvalid, InvalidParams

Height = Fraction
HeightLike = Union[Fraction, int, str]


def as_height(value: HeightLike) -> Fraction:
    """Coerce an exact value (int, Fraction, or rational string) to a height.

    Floats are rejected on purpose: they would smuggle rounding into a
    kernel whose laws are exact identities.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not heights")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(
        f"unsupported height {value!r}; use int, Fraction, or a 'p/q' string"
    )


# ---------------------------------------------------------------------------
# Intervals


@dataclass(frozen=True)
class Interval:
    """A closed interval [lo, hi] of heights, or the empty interval."""

    lo: Fraction | None = None
    hi: Fraction | None = None

    def __post_init__(self):
        if (self.lo is None) != (self.hi is None):
            raise ValueError("interval needs both endpoints or neither")
        if self.lo is not None and self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: {self.lo} > {self.hi}")

    @staticmethod
    def empty() -> "Interval":
        return Interval(None, None)

    @staticmethod
    def of(lo: HeightLike, hi: HeightLike) -> "Interval":
        return Interval(as_height(lo), as_height(hi))

    @property
    def is_empty(self) -> bool:
        return self.lo is None

    @property
    def span(self) -> Fraction:
        if self.is_empty:
            raise ValueError("empty interval has no span")
        return self.hi - self.lo

    def contains(self, h: Fraction) -> bool:
        return not self.is_empty and self.lo <= h <= self.hi

    def covers(self, other: "Interval") -> bool:
        if other.is_empty:
            return True
        return not self.is_empty and self.lo <= other.lo and other.hi <= self.hi

    def __str__(self) -> str:
        if self.is_empty:
            return "empty"
        return f"[{self.lo}, {self.hi}]"


# ---------------------------------------------------------------------------
# Points of a graph


@dataclass(frozen=True)
class VertexRef:
    """A point sitting on a vertex."""

    vertex: str


@dataclass(frozen=True)
class EdgeRef:
    """A point in the interior of an edge, identified by its height."""

    edge: str
    height: Fraction


PointRef = Union[VertexRef, EdgeRef]


# ---------------------------------------------------------------------------
# The graph itself


@dataclass(frozen=True)
class ReebGraph:
    """An immutable multigraph with a height per vertex.

    Rows are kept sorted so that two graphs with the same content compare
    and hash equal.  Construct via :func:`reeb_graph` rather than directly.
    """

    vertex_rows: tuple[tuple[str, Fraction], ...]
    edge_rows: tuple[tuple[str, str, str], ...]

    def __post_init__(self):
        vrows = tuple(sorted((str(v), as_height(h)) for v, h in self.vertex_rows))
        erows = tuple(
            sorted(
                (str(e), str(u), str(w)) if str(u) <= str(w) else (str(e), str(w), str(u))
                for e, u, w in self.edge_rows
            )
        )
        object.__setattr__(self, "vertex_rows", vrows)
        object.__setattr__(self, "edge_rows", erows)

    # -- basic views (computed lazily, cached on the instance) --

    def _cache(self, name, build):
        store = self.__dict__
        if name not in store:
            store[name] = build()
        return store[name]

    @property
    def height(self) -> dict[str, Fraction]:
        return self._cache("_height", lambda: dict(self.vertex_rows))

    @property
    def ends(self) -> dict[str, tuple[str, str]]:
        return self._cache("_ends", lambda: {e: (u, w) for e, u, w in self.edge_rows})

    @property
    def vertex_ids(self) -> tuple[str, ...]:
        return self._cache("_vids", lambda: tuple(v for v, _ in self.vertex_rows))

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return self._cache("_eids", lambda: tuple(e for e, _, _ in self.edge_rows))

    @property
    def is_empty(self) -> bool:
        return not self.vertex_rows

    @property
    def edges_at(self) -> dict[str, tuple[str, ...]]:
        """Incident edge ids per vertex, in sorted order."""

        def build():
            inc: dict[str, list[str]] = {v: [] for v in self.vertex_ids}
            for e, u, w in self.edge_rows:
                if u in inc:
                    inc[u].append(e)
                if w in inc and w != u:
                    inc[w].append(e)
            return {v: tuple(es) for v, es in inc.items()}

        return self._cache("_edges_at", build)

    # -- orientation helpers; these assume the graph is valid --

    def lo(self, e: str) -> str:
        u, w = self.ends[e]
        return u if self.height[u] < self.height[w] else w

    def hi(self, e: str) -> str:
        u, w = self.ends[e]
        return w if self.height[u] < self.height[w] else u

    def edge_span(self, e: str) -> tuple[Fraction, Fraction]:
        u, w = self.ends[e]
        hu, hw = self.height[u], self.height[w]
        return (hu, hw) if hu < hw else (hw, hu)

    @property
    def up_edges(self) -> dict[str, tuple[str, ...]]:
        """Edges leaving each vertex upward."""

        def build():
            up: dict[str, list[str]] = {v: [] for v in self.vertex_ids}
            for e, u, w in self.edge_rows:
                bottom = u if self.height[u] < self.height[w] else w
                up[bottom].append(e)
            return {v: tuple(es) for v, es in up.items()}

        return self._cache("_up_edges", build)

    @property
    def down_edges(self) -> dict[str, tuple[str, ...]]:
        """Edges leaving each vertex downward."""

        def build():
            down: dict[str, list[str]] = {v: [] for v in self.vertex_ids}
            for e, u, w in self.edge_rows:
                top = w if self.height[u] < self.height[w] else u
                down[top].append(e)
            return {v: tuple(es) for v, es in down.items()}

        return self._cache("_down_edges", build)

    def point_height(self, p: PointRef) -> Fraction:
        if isinstance(p, VertexRef):
            return self.height[p.vertex]
        return p.height

    def point_on_edge(self, e: str, h: Fraction) -> PointRef:
        """The point at height ``h`` on edge ``e``, normalized to a vertex
        when ``h`` hits an endpoint."""
        lo, hi = self.edge_span(e)
        if not lo <= h <= hi:
            raise ValueError(f"height {h} outside edge {e} span [{lo}, {hi}]")
        if h == lo:
            return VertexRef(self.lo(e))
        if h == hi:
            return VertexRef(self.hi(e))
        return EdgeRef(e, h)


EMPTY_GRAPH = ReebGraph((), ())


def reeb_graph(
    vertices: Mapping[object, HeightLike] | Iterable[tuple[object, HeightLike]],
    edges: Iterable[tuple] = (),
) -> ReebGraph:
    """Build a graph from vertex heights and edges.

    ``vertices`` maps ids to heights (or is an iterable of pairs); ``edges``
    is an iterable of either ``(u, w)`` pairs (edge ids are generated) or
    ``(edge_id, u, w)`` triples.  Ids are stringified.
    """
    items = vertices.items() if isinstance(vertices, Mapping) else vertices
    vrows = tuple((str(v), as_height(h)) for v, h in items)
    erows = []
    for i, row in enumerate(edges):
        row = tuple(row)
        if len(row) == 2:
            erows.append((f"e{i}", str(row[0]), str(row[1])))
        elif len(row) == 3:
            erows.append((str(row[0]), str(row[1]), str(row[2])))
        else:
            raise InvalidParams(f"edge row must have 2 or 3 entries, got {row!r}")
    return ReebGraph(vrows, tuple(erows))


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    detail: str = ""

    def __str__(self) -> str:
        msg = f"{self.kind}({self.subject})"
        return f"{msg}: {self.detail}" if self.detail else msg


def validate(g: ReebGraph) -> tuple[Violation, ...]:
    """Check the Reeb graph invariants; an empty result means the graph is ok."""
    out: list[Violation] = []
    seen_v = Counter(v for v, _ in g.vertex_rows)
    for v, n in sorted(seen_v.items()):
        if n > 1:
            out.append(Violation("DuplicateVertexId", v, f"declared {n} times"))
    seen_e = Counter(e for e, _, _ in g.edge_rows)
    for e, n in sorted(seen_e.items()):
        if n > 1:
            out.append(Violation("DuplicateEdgeId", e, f"declared {n} times"))
    heights = g.height
    for e, u, w in g.edge_rows:
        missing = [x for x in (u, w) if x not in heights]
        if missing:
            out.append(Violation("DanglingEndpoint", e, f"unknown vertex {missing[0]}"))
            continue
        if heights[u] == heights[w]:
            out.append(
                Violation("AdjacentEqualHeights", e, f"{u} and {w} both at {heights[u]}")
            )
    return tuple(out)


def require_valid(g: ReebGraph) -> ReebGraph:
    # instances are immutable, so a passed check never needs repeating
    if g.__dict__.get("_validated"):
        return g
    violations = validate(g)
    if violations:
        raise GraphInvalid(violations)
    g.__dict__["_validated"] = True
    return g


# ---------------------------------------------------------------------------
# Connectivity and image


class _DSU:
    __slots__ = ("parent",)

    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller key as the representative, for determinism
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def components(g: ReebGraph) -> tuple[frozenset[str], ...]:
    """Connected components as vertex-id sets, ordered by least member."""
    require_valid(g)
    dsu = _DSU()
    for v in g.vertex_ids:
        dsu.add(v)
    for _, u, w in g.edge_rows:
        dsu.union(u, w)
    groups: dict[str, set[str]] = {}
    for v in g.vertex_ids:
        groups.setdefault(dsu.find(v), set()).add(v)
    return tuple(frozenset(groups[r]) for r in sorted(groups))


def image(g: ReebGraph) -> Interval:
    """The overall height interval covered by the graph (empty for no vertices)."""
    require_valid(g)
    if g.is_empty:
        return Interval.empty()
    hs = [h for _, h in g.vertex_rows]
    return Interval(min(hs), max(hs))


def component_images(g: ReebGraph) -> tuple[Interval, ...]:
    """One height interval per connected component, aligned with components()."""
    out = []
    for comp in components(g):
        hs = [g.height[v] for v in comp]
        out.append(Interval(min(hs), max(hs)))
    return tuple(out)


# ---------------------------------------------------------------------------
# Subdivision


def subdivide_at(
    g: ReebGraph, levels: Iterable[HeightLike]
) -> tuple[ReebGraph, dict[str, tuple[str, ...]]]:
    """Insert a degree-2 vertex wherever an edge crosses one of ``levels``.

    Returns the refined graph and, per original edge, the ascending chain of
    edge ids that replaced it (a 1-chain when nothing crossed).  New vertex
    ids are ``"<edge>@<height>"`` and new edge ids ``"<edge>#<k>"``, so the
    correspondence is invertible by inspection.
    """
    require_valid(g)
    cut_levels = sorted({as_height(h) for h in levels})
    vrows = list(g.vertex_rows)
    erows: list[tuple[str, str, str]] = []
    chains: dict[str, tuple[str, ...]] = {}
    for e in g.edge_ids:
        lo_h, hi_h = g.edge_span(e)
        cuts = [h for h in cut_levels if lo_h < h < hi_h]
        if not cuts:
            erows.append((e,) + g.ends[e])
            chains[e] = (e,)
            continue
        stops = [g.lo(e)]
        for h in cuts:
            vid = f"{e}@{h}"
            vrows.append((vid, h))
            stops.append(vid)
        stops.append(g.hi(e))
        chain = []
        for k in range(len(stops) - 1):
            eid = f"{e}#{k}"
            erows.append((eid, stops[k], stops[k + 1]))
            chain.append(eid)
        chains[e] = tuple(chain)
    return ReebGraph(tuple(vrows), tuple(erows)), chains


# ---------------------------------------------------------------------------
# Monotone path budgets and forks


def height_scale(g: ReebGraph, *extra: Fraction, limit: int = 1 << 48) -> int | None:
    """A common denominator for all heights (and the extras), or None when
    it would grow past ``limit``.  Scaling by it turns every height into an
    integer, which keeps the hot arithmetic exact but cheap."""
    d = 1
    for _, h in g.vertex_rows:
        d = d * h.denominator // gcd(d, h.denominator)
        if d > limit:
            return None
    for q in extra:
        d = d * q.denominator // gcd(d, q.denominator)
        if d > limit:
            return None
    return d


@dataclass
class _Budgets:
    """Longest ascending/descending path heights, in scaled units."""

    vids: tuple[str, ...]
    index: dict[str, int]
    heights: list  # ints when scale is set, Fractions otherwise
    up: list
    down: list
    scale: int | None


def _monotone_budgets(g: ReebGraph, *extra: Fraction) -> _Budgets:
    require_valid(g)
    vids = g.vertex_ids
    index = {v: i for i, v in enumerate(vids)}
    scale = height_scale(g, *extra)
    if scale is None:
        heights = [h for _, h in g.vertex_rows]
    else:
        heights = [
            h.numerator * (scale // h.denominator) for _, h in g.vertex_rows
        ]
    n = len(vids)
    up_adj: list[list[tuple[int, object]]] = [[] for _ in range(n)]
    down_adj: list[list[tuple[int, object]]] = [[] for _ in range(n)]
    for _, u, w in g.edge_rows:
        iu, iw = index[u], index[w]
        if heights[iu] > heights[iw]:
            iu, iw = iw, iu
        span = heights[iw] - heights[iu]
        up_adj[iu].append((iw, span))
        down_adj[iw].append((iu, span))

    # Kahn's algorithm on upward-directed edges; O(n + m) overall.
    indeg = [len(down_adj[i]) for i in range(n)]
    order = [i for i in range(n) if indeg[i] == 0]
    k = 0
    while k < len(order):
        for j, _ in up_adj[order[k]]:
            indeg[j] -= 1
            if indeg[j] == 0:
                order.append(j)
        k += 1

    zero = 0 if scale is not None else Fraction(0)
    up = [zero] * n
    down = [zero] * n
    for i in reversed(order):
        best = zero
        for j, span in up_adj[i]:
            cand = span + up[j]
            if cand > best:
                best = cand
        up[i] = best
    for i in order:
        best = zero
        for j, span in down_adj[i]:
            cand = span + down[j]
            if cand > best:
                best = cand
        down[i] = best
    return _Budgets(vids, index, heights, up, down, scale)


def longest_up_down(g: ReebGraph) -> dict[str, tuple[Fraction, Fraction]]:
    """Per vertex, the heights of the tallest ascending and descending paths.

    Edges ordered by height form a DAG, so a single topological pass in each
    direction suffices; the whole computation is O(n + m).
    """
    b = _monotone_budgets(g)
    if b.scale is None:
        return {v: (b.up[i], b.down[i]) for i, v in enumerate(b.vids)}
    s = b.scale
    return {
        v: (Fraction(b.up[i], s), Fraction(b.down[i], s))
        for i, v in enumerate(b.vids)
    }


def forks(g: ReebGraph) -> tuple[frozenset[str], frozenset[str]]:
    """(up-forks, down-forks): vertices with at least two edges rising
    (resp. falling) from them.  A vertex may be both."""
    require_valid(g)
    ups = frozenset(v for v in g.vertex_ids if len(g.up_edges[v]) >= 2)
    downs = frozenset(v for v in g.vertex_ids if len(g.down_edges[v]) >= 2)
    return ups, downs


# ---------------------------------------------------------------------------
# Regular-vertex normalization (used when comparing graphs up to
# function-preserving homeomorphism)


@dataclass(frozen=True)
class Normalized:
    """A graph with its degree-(1,1) vertices removed.

    ``merged_paths`` expresses each surviving edge as the ascending chain of
    original edge segments it replaced; ``merged_of`` maps each original
    edge, and ``merged_of_vertex`` each removed vertex, to the surviving
    edge that now covers it.
    """

    graph: ReebGraph
    merged_paths: dict[str, tuple[tuple[str, Fraction, Fraction], ...]]
    merged_of: dict[str, str]
    merged_of_vertex: dict[str, str]


def is_regular_vertex(g: ReebGraph, v: str) -> bool:
    return len(g.up_edges[v]) == 1 and len(g.down_edges[v]) == 1


def normalize_regular(g: ReebGraph) -> Normalized:
    """Merge edge chains through degree-(1,1) vertices.

    The merged edge keeps the id of its lowest constituent, so a graph with
    no regular vertices round-trips unchanged.
    """
    require_valid(g)
    keep = [v for v in g.vertex_ids if not is_regular_vertex(g, v)]
    keep_set = set(keep)
    vrows = tuple((v, g.height[v]) for v in keep)
    erows: list[tuple[str, str, str]] = []
    merged_paths: dict[str, tuple[tuple[str, Fraction, Fraction], ...]] = {}
    merged_of: dict[str, str] = {}
    merged_of_vertex: dict[str, str] = {}
    for anchor in keep:
        for start_edge in g.up_edges[anchor]:
            pieces: list[tuple[str, Fraction, Fraction]] = []
            interior: list[str] = []
            e = start_edge
            bottom = anchor
            while True:
                lo_h, hi_h = g.edge_span(e)
                pieces.append((e, lo_h, hi_h))
                top = g.hi(e)
                if top in keep_set:
                    break
                if len(pieces) > len(g.edge_ids):
                    raise AssertionError("regular chain failed to terminate")
                interior.append(top)
                e = g.up_edges[top][0]
            eid = pieces[0][0]
            erows.append((eid, bottom, top))
            merged_paths[eid] = tuple(pieces)
            for piece_edge, _, _ in pieces:
                merged_of[piece_edge] = eid
            for v in interior:
                merged_of_vertex[v] = eid
    return Normalized(
        ReebGraph(vrows, tuple(erows)), merged_paths, merged_of, merged_of_vertex
    )


# ---------------------------------------------------------------------------
# Small constructions used throughout the tests and the CLI


def disjoint_union(a: ReebGraph, b: ReebGraph, prefixes=("a:", "b:")) -> ReebGraph:
    """Place two graphs side by side, with ids kept apart by prefixes."""
    pa, pb = prefixes
    vrows = [(pa + v, h) for v, h in a.vertex_rows] + [(pb + v, h) for v, h in b.vertex_rows]
    erows = [(pa + e, pa + u, pa + w) for e, u, w in a.edge_rows] + [
        (pb + e, pb + u, pb + w) for e, u, w in b.edge_rows
    ]
    return ReebGraph(tuple(vrows), tuple(erows))


def segment(a: HeightLike, b: HeightLike) -> ReebGraph:
    """A single edge spanning [a, b]."""
    a, b = as_height(a), as_height(b)
    if not a < b:
        raise InvalidParams(f"segment needs a < b, got [{a}, {b}]")
    return reeb_graph({"bot": a, "top": b}, [("e0", "bot", "top")])

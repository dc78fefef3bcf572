"""Height-preserving isomorphism of Reeb graphs.

Two Reeb graphs are considered the same space when some multigraph
isomorphism between their regular-vertex normalizations preserves heights.
The search is a backtracking assignment over vertices, pruned hard by
height/degree/neighborhood signatures; when it succeeds, the witness is
lifted back to a pair of mutually inverse morphisms between the original
graphs.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from .graphs import Normalized, ReebGraph, VertexRef, normalize_regular, require_valid
from .maps import (
    ReebMorphism,
    check_morphism,
    clip_path,
    eval_path,
    make_morphism,
)


@dataclass(frozen=True)
class IsoResult:
    isomorphic: bool
    exhausted: bool
    forward: ReebMorphism | None = None
    backward: ReebMorphism | None = None

    def __bool__(self) -> bool:
        return self.isomorphic


def _signatures(g: ReebGraph, rounds: int = 2) -> dict[str, tuple]:
    """Iterated vertex invariants: height, up/down degrees, and the
    multiset of neighbor signatures, refined a fixed number of rounds."""
    sig = {
        v: (g.height[v], len(g.up_edges[v]), len(g.down_edges[v]))
        for v in g.vertex_ids
    }
    pair_count: dict[str, Counter] = {v: Counter() for v in g.vertex_ids}
    for e, u, w in g.edge_rows:
        pair_count[u][w] += 1
        pair_count[w][u] += 1
    for _ in range(rounds):
        sig = {
            v: (
                sig[v],
                tuple(sorted((sig[n], k) for n, k in pair_count[v].items())),
            )
            for v in g.vertex_ids
        }
    return sig


def _search_mapping(
    a: ReebGraph, b: ReebGraph, budget: int
) -> tuple[dict[str, str] | None, bool]:
    """Backtracking vertex assignment; returns (mapping, exhausted)."""
    sig_a = _signatures(a)
    sig_b = _signatures(b)
    if sorted(sig_a.values()) != sorted(sig_b.values()):
        return None, False
    pool: dict[tuple, list[str]] = defaultdict(list)
    for w in b.vertex_ids:
        pool[sig_b[w]].append(w)

    mult_a: Counter = Counter()
    mult_b: Counter = Counter()
    for _, u, w in a.edge_rows:
        mult_a[(u, w)] += 1
        mult_a[(w, u)] += 1
    for _, u, w in b.edge_rows:
        mult_b[(u, w)] += 1
        mult_b[(w, u)] += 1
    neighbors: dict[str, set[str]] = {v: set() for v in a.vertex_ids}
    for _, u, w in a.edge_rows:
        neighbors[u].add(w)
        neighbors[w].add(u)

    order = sorted(a.vertex_ids, key=lambda v: (len(pool[sig_a[v]]), v))
    assign: dict[str, str] = {}
    used: set[str] = set()
    nodes = 0

    def backtrack(i: int) -> bool | None:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            return None
        if i == len(order):
            return True
        v = order[i]
        for w in pool[sig_a[v]]:
            if w in used:
                continue
            ok = True
            for n in neighbors[v]:
                if n in assign and mult_a[(v, n)] != mult_b[(w, assign[n])]:
                    ok = False
                    break
            if not ok:
                continue
            assign[v] = w
            used.add(w)
            hit = backtrack(i + 1)
            if hit:
                return True
            del assign[v]
            used.discard(w)
            if hit is None:
                return None
        return False

    hit = backtrack(0)
    if hit is None:
        return None, True
    return (dict(assign) if hit else None), False


def _match_edges(a: ReebGraph, b: ReebGraph, vmap: dict[str, str]) -> dict[str, str]:
    """Pair parallel edge bundles between matched vertex pairs, in id order."""
    bundles_b: dict[tuple[str, str], list[str]] = defaultdict(list)
    for e, u, w in b.edge_rows:
        bundles_b[(u, w)].append(e)
    out: dict[str, str] = {}
    taken: dict[tuple[str, str], int] = defaultdict(int)
    for e, u, w in a.edge_rows:
        key = tuple(sorted((vmap[u], vmap[w])))
        out[e] = bundles_b[key][taken[key]]
        taken[key] += 1
    return out


def _lift(
    src: ReebGraph,
    dst: ReebGraph,
    nsrc: Normalized,
    ndst: Normalized,
    vmap: dict[str, str],
    emap: dict[str, str],
) -> ReebMorphism:
    """Reinterpret an isomorphism of normalizations as a map between the
    original graphs, routing through the merged-edge chains."""
    vertex_map = {}
    for v in src.vertex_ids:
        if v in vmap:
            vertex_map[v] = VertexRef(vmap[v])
        else:
            merged = nsrc.merged_of_vertex[v]
            path = ndst.merged_paths[emap[merged]]
            vertex_map[v] = eval_path(dst, path, src.height[v])
    edge_map = {}
    for e in src.edge_ids:
        lo, hi = src.edge_span(e)
        merged = nsrc.merged_of[e]
        edge_map[e] = clip_path(ndst.merged_paths[emap[merged]], lo, hi)
    return check_morphism(make_morphism(src, dst, vertex_map, edge_map))


def are_isomorphic(g: ReebGraph, h: ReebGraph, node_budget: int = 500_000) -> IsoResult:
    """Decide height-preserving isomorphism, up to regular vertices.

    Returns a witness pair of mutually inverse morphisms between the
    original graphs when one exists.  ``exhausted`` is set when the node
    budget ran out before the search completed.
    """
    require_valid(g)
    require_valid(h)
    ng, nh = normalize_regular(g), normalize_regular(h)
    a, b = ng.graph, nh.graph
    if len(a.vertex_rows) != len(b.vertex_rows) or len(a.edge_rows) != len(b.edge_rows):
        return IsoResult(False, False)
    vmap, exhausted = _search_mapping(a, b, node_budget)
    if vmap is None:
        return IsoResult(False, exhausted)
    emap = _match_edges(a, b, vmap)
    forward = _lift(g, h, ng, nh, vmap, emap)
    back_v = {w: v for v, w in vmap.items()}
    back_e = {f: e for e, f in emap.items()}
    backward = _lift(h, g, nh, ng, back_v, back_e)
    return IsoResult(True, False, forward, backward)

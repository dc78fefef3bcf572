"""Deterministic graph generators for fixtures and benchmarks."""

from __future__ import annotations

import logging
import random
from fractions import Fraction
from typing import Sequence

from .errors import InvalidParams
from .graphs import HeightLike, ReebGraph, as_height, reeb_graph, require_valid
from .graphs import segment as _segment

log = logging.getLogger("reebflow")

FAMILIES = ("segment", "cycle", "zigzag", "ladder", "random")


def gen_segment(a: HeightLike, b: HeightLike) -> ReebGraph:
    return _segment(a, b)


def gen_cycle(a: HeightLike, b: HeightLike) -> ReebGraph:
    a, b = as_height(a), as_height(b)
    if not a < b:
        raise InvalidParams(f"cycle needs a < b, got [{a}, {b}]")
    return reeb_graph({"bot": a, "top": b}, [("e0", "bot", "top"), ("e1", "bot", "top")])


def gen_zigzag(heights: Sequence[HeightLike]) -> ReebGraph:
    hs = [as_height(h) for h in heights]
    if len(hs) < 2:
        raise InvalidParams("zigzag needs at least two heights")
    if any(a == b for a, b in zip(hs, hs[1:])):
        raise InvalidParams("consecutive zigzag heights must differ")
    vertices = {f"v{i}": h for i, h in enumerate(hs)}
    edges = [(f"e{i}", f"v{i}", f"v{i+1}") for i in range(len(hs) - 1)]
    return reeb_graph(vertices, edges)


def gen_ladder(k: int) -> ReebGraph:
    """A stack of k unit-height cycles sharing their junction vertices."""
    if k < 1:
        raise InvalidParams(f"ladder needs k >= 1, got {k}")
    vertices = {f"v{i}": i for i in range(k + 1)}
    edges = []
    for i in range(k):
        edges.append((f"e{2*i}", f"v{i}", f"v{i+1}"))
        edges.append((f"e{2*i+1}", f"v{i}", f"v{i+1}"))
    return reeb_graph(vertices, edges)


def gen_random(n: int, m: int, seed: int | None = 0) -> ReebGraph:
    graph, retries = random_graph_with_stats(n, m, seed)
    if retries:
        log.debug("random graph (n=%d, m=%d, seed=%r) needed %d retries", n, m, seed, retries)
    return graph


def random_graph_with_stats(
    n: int, m: int, seed: int | None = 0, window: int = 4
) -> tuple[ReebGraph, int]:
    """A connected random graph with height-local edges.

    Vertices get random rational heights; a spanning tree over the
    height-sorted order guarantees connectivity, and the remaining edges
    join vertices at most ``window`` apart in that order.  Samples that
    would connect equal heights are retried (and counted).
    """
    if n < 1:
        raise InvalidParams(f"random graph needs n >= 1, got {n}")
    if m < n - 1:
        raise InvalidParams(f"connectivity needs m >= n - 1, got n={n}, m={m}")
    if n == 1 and m > 0:
        raise InvalidParams("a single vertex admits no edges")
    rng = random.Random(seed)
    retries = 0
    heights: list[Fraction] = []
    for _ in range(n):
        heights.append(Fraction(rng.randint(0, 3 * n), rng.choice((1, 1, 2, 4))))
    heights.sort()
    ids = [f"v{i}" for i in range(n)]
    edges: list[tuple[str, str, str]] = []

    def pick_partner(i: int) -> int | None:
        lo = max(0, i - window)
        for _ in range(32):
            j = rng.randint(lo, i - 1)
            if heights[j] != heights[i]:
                return j
            nonlocal retries
            retries += 1
        for j in range(i - 1, -1, -1):
            if heights[j] != heights[i]:
                return j
        return None

    for i in range(1, n):
        j = pick_partner(i)
        if j is None:
            # all sampled heights equal; nudge this one up
            heights[i] += Fraction(1, 2)
            j = i - 1
        edges.append((f"e{len(edges)}", ids[j], ids[i]))
    while len(edges) < m:
        i = rng.randint(1, n - 1) if n > 1 else 0
        j = pick_partner(i)
        if j is None:
            retries += 1
            continue
        edges.append((f"e{len(edges)}", ids[j], ids[i]))
    graph = reeb_graph(zip(ids, heights), edges)
    require_valid(graph)
    return graph, retries


def generate(family: str, params: Sequence, seed: int | None = 0) -> ReebGraph:
    """Dispatch on the fixture family name; deterministic given the seed."""
    if family == "segment":
        a, b = params
        return gen_segment(a, b)
    if family == "cycle":
        a, b = params
        return gen_cycle(a, b)
    if family == "zigzag":
        return gen_zigzag(list(params))
    if family == "ladder":
        (k,) = params
        return gen_ladder(int(k))
    if family == "random":
        n, m = params
        return gen_random(int(n), int(m), seed)
    raise InvalidParams(f"unknown family {family!r}; choose from {FAMILIES}")

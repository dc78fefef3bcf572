"""Detectors for the tailed / safe hierarchy of a Reeb graph.

A graph is t-tailed when every down-fork still has an ascending path of
height t and every up-fork a descending one; it is weakly s-safe when each
component contains a point with both an ascending and a descending path of
height s, and s-safe when both hold.  The report returns the exact maximal
parameters so propagation laws can be asserted tightly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .graphs import (
    HeightLike,
    ReebGraph,
    as_height,
    components,
    forks,
    longest_up_down,
    require_valid,
)

# Fork-free graphs are t-tailed for every t; saturating arithmetic with
# math.inf keeps the report exact for every finite comparison.
UNBOUNDED = math.inf


@dataclass(frozen=True)
class ForkObstruction:
    """A fork together with the height of its best opposite-direction path."""

    vertex: str
    kind: str  # "up-fork" or "down-fork"
    available: Fraction


@dataclass(frozen=True)
class TailReport:
    max_tailed: Fraction | float  # UNBOUNDED when the graph has no forks
    max_weak_safe: Fraction | None  # None for the empty graph
    max_safe: Fraction | None  # None for the empty graph
    obstructions: tuple[ForkObstruction, ...]


def tail_report(g: ReebGraph) -> TailReport:
    require_valid(g)
    if g.is_empty:
        return TailReport(UNBOUNDED, None, None, ())
    budgets = longest_up_down(g)
    up_forks, down_forks = forks(g)

    obstructions = []
    max_tailed: Fraction | float = UNBOUNDED
    for v in sorted(down_forks):
        obstructions.append(ForkObstruction(v, "down-fork", budgets[v][0]))
        max_tailed = min(max_tailed, budgets[v][0])
    for v in sorted(up_forks):
        obstructions.append(ForkObstruction(v, "up-fork", budgets[v][1]))
        max_tailed = min(max_tailed, budgets[v][1])

    # Per component, maximize min(up, down).  The maximum sits either at a
    # vertex or at the interior balance point of an edge, where the two
    # linear budgets cross; both are exactly computable.
    comp_of: dict[str, int] = {}
    for i, comp in enumerate(components(g)):
        for v in comp:
            comp_of[v] = i
    best: dict[int, Fraction] = {}

    def offer(ci: int, value: Fraction):
        if ci not in best or value > best[ci]:
            best[ci] = value

    for v, (up, down) in budgets.items():
        offer(comp_of[v], min(up, down))
    for e in g.edge_ids:
        lo, hi = g.edge_span(e)
        up_top = budgets[g.hi(e)][0]
        down_bot = budgets[g.lo(e)][1]
        balance = (hi + up_top + lo - down_bot) / 2
        if lo < balance < hi:
            offer(comp_of[g.lo(e)], (hi + up_top - lo + down_bot) / 2)

    max_weak_safe = min(best.values())
    max_safe = min(max_tailed, max_weak_safe)
    return TailReport(max_tailed, max_weak_safe, max_safe, tuple(obstructions))


def is_tailed(g: ReebGraph, t: HeightLike) -> bool:
    t = as_height(t)
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return t <= tail_report(g).max_tailed


def is_weakly_safe(g: ReebGraph, s: HeightLike) -> bool:
    s = as_height(s)
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    limit = tail_report(g).max_weak_safe
    return limit is not None and s <= limit


def is_safe(g: ReebGraph, s: HeightLike) -> bool:
    s = as_height(s)
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    limit = tail_report(g).max_safe
    return limit is not None and s <= limit

"""Shared corpus builders for the theorem-style tests."""

from __future__ import annotations

import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from reebflow.generators import gen_cycle, gen_ladder, gen_zigzag, random_graph_with_stats
from reebflow.graphs import ReebGraph, segment


def random_fraction(rng: random.Random, lo=0, hi=5, denominators=(1, 2, 3, 4)) -> Fraction:
    den = rng.choice(denominators)
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_connected(rng: random.Random, max_vertices: int = 10) -> ReebGraph:
    n = rng.randint(1, max_vertices)
    m = 0 if n == 1 else n - 1 + rng.randint(0, 3)
    return random_graph_with_stats(n, m, seed=rng.randrange(1 << 30))[0]


def fixture_zoo() -> list[ReebGraph]:
    """Small named fixtures exercising each structural feature."""
    return [
        segment(0, 1),
        segment(-2, 3),
        gen_cycle(0, 3),
        gen_zigzag([0, 2, 1, 3]),
        gen_zigzag([0, 3, 1, 4, 2, 5]),
        gen_ladder(3),
        ReebGraph((("a", Fraction(0)),), ()),  # isolated vertex
        ReebGraph(
            (
                ("a", Fraction(0)),
                ("b", Fraction(2)),
                ("c", Fraction(2)),
                ("d", Fraction(4)),
            ),
            (("e0", "a", "b"), ("e1", "a", "c"), ("e2", "b", "d"), ("e3", "c", "d")),
        ),  # diamond
    ]


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240817)

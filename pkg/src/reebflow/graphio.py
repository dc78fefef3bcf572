"""Text format for Reeb graphs.

Documents are JSON with heights as exact rational strings; serialization
is canonical (sorted ids, reduced fractions, fixed layout), so that
serialize(parse(doc)) reproduces a canonical document byte for byte.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import DocumentError
from .graphs import ReebGraph, require_valid

FORMAT = "reebflow-graph/1"


def _height_str(h: Fraction) -> str:
    return str(h.numerator) if h.denominator == 1 else f"{h.numerator}/{h.denominator}"


def serialize(g: ReebGraph) -> bytes:
    """Canonical bytes for a valid graph."""
    require_valid(g)
    doc = {
        "format": FORMAT,
        "vertices": [
            {"id": v, "height": _height_str(h)} for v, h in g.vertex_rows
        ],
        "edges": [{"id": e, "ends": [u, w]} for e, u, w in g.edge_rows],
    }
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()


def parse(data: bytes | str) -> ReebGraph:
    """Parse a graph document; the result is validated."""
    if isinstance(data, bytes):
        data = data.decode()
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as err:
        raise DocumentError(f"syntax error at line {err.lineno}: {err.msg}") from err
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise DocumentError(f"expected a {FORMAT!r} document")
    vrows = []
    for row in doc.get("vertices", ()):
        try:
            vid, height = row["id"], row["height"]
        except (TypeError, KeyError) as err:
            raise DocumentError(f"malformed vertex row {row!r}") from err
        if not isinstance(height, str) and not isinstance(height, int):
            raise DocumentError(f"invalid rational {height!r} for vertex {vid!r}")
        try:
            vrows.append((str(vid), Fraction(height)))
        except (ValueError, ZeroDivisionError) as err:
            raise DocumentError(f"invalid rational {height!r} for vertex {vid!r}") from err
    erows = []
    for row in doc.get("edges", ()):
        try:
            eid, (u, w) = row["id"], row["ends"]
        except (TypeError, KeyError, ValueError) as err:
            raise DocumentError(f"malformed edge row {row!r}") from err
        erows.append((str(eid), str(u), str(w)))
    g = ReebGraph(tuple(vrows), tuple(erows))
    require_valid(g)
    return g

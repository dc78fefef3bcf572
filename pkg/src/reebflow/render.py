"""Deterministic DOT and SVG rendering.

Vertical position is proportional to height (the one coordinate that
carries meaning); horizontal positions come from a few exact averaging
passes, then collision-free spreading per level.  Heights are converted
to decimals only for coordinates; labels keep the exact rationals.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidParams
from .graphs import ReebGraph, require_valid


def _layout(g: ReebGraph) -> dict[str, tuple[Fraction, Fraction]]:
    """(x, y) per vertex, exact; y is the height."""
    order = {v: Fraction(i) for i, v in enumerate(g.vertex_ids)}
    x = dict(order)
    for _ in range(8):
        nxt = {}
        for v in g.vertex_ids:
            around = [x[g.lo(e)] if g.lo(e) != v else x[g.hi(e)] for e in g.edges_at[v]]
            if around:
                nxt[v] = (x[v] + sum(around) / len(around)) / 2
            else:
                nxt[v] = x[v]
        x = nxt
    # spread vertices sharing a height so none coincide
    by_height: dict[Fraction, list[str]] = {}
    for v, h in g.vertex_rows:
        by_height.setdefault(h, []).append(v)
    out = {}
    for h, vs in by_height.items():
        vs.sort(key=lambda v: (x[v], order[v]))
        for k, v in enumerate(vs):
            out[v] = (x[v] + Fraction(k, 100), h)
    return out


def _fmt(q: Fraction) -> str:
    return f"{float(q):.3f}"


def render_dot(g: ReebGraph) -> bytes:
    require_valid(g)
    pos = _layout(g)
    lines = ["graph reeb {", "  node [shape=circle fontsize=10];"]
    for v, h in g.vertex_rows:
        x, y = pos[v]
        lines.append(f'  "{v}" [label="{v}\\n{h}" pos="{_fmt(x)},{_fmt(y)}!"];')
    for e, u, w in g.edge_rows:
        lines.append(f'  "{u}" -- "{w}" [label="{e}"];')
    lines.append("}")
    return ("\n".join(lines) + "\n").encode()


def render_svg(g: ReebGraph) -> bytes:
    require_valid(g)
    pos = _layout(g)
    scale_x, scale_y, pad = 60, 40, 30
    if pos:
        xs = [p[0] for p in pos.values()]
        ys = [p[1] for p in pos.values()]
        x0, y1 = min(xs), max(ys)
    else:
        x0 = y1 = Fraction(0)
    xs_px = {v: float((x - x0) * scale_x) + pad for v, (x, _) in pos.items()}
    ys_px = {v: float((y1 - y) * scale_y) + pad for v, (_, y) in pos.items()}
    width = max([*xs_px.values(), 0]) + pad
    height = max([*ys_px.values(), 0]) + pad
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">'
    ]
    for e, u, w in g.edge_rows:
        parts.append(
            f'<line x1="{xs_px[u]:.1f}" y1="{ys_px[u]:.1f}" x2="{xs_px[w]:.1f}" '
            f'y2="{ys_px[w]:.1f}" stroke="black"/>'
        )
    for v, h in g.vertex_rows:
        parts.append(
            f'<circle cx="{xs_px[v]:.1f}" cy="{ys_px[v]:.1f}" r="4" fill="white" stroke="black"/>'
        )
        parts.append(
            f'<text x="{xs_px[v] + 6:.1f}" y="{ys_px[v] - 6:.1f}" font-size="10">{v} @ {h}</text>'
        )
    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode()


def render(g: ReebGraph, fmt: str = "dot") -> bytes:
    if fmt == "dot":
        return render_dot(g)
    if fmt == "svg":
        return render_svg(g)
    raise InvalidParams(f"unknown render format {fmt!r}; use dot or svg")

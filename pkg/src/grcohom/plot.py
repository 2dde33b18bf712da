"""SVG pictures of two-dimensional sector partitions.

Every lattice point of the display window becomes a unit cell filled
with the colour of its sector; sectors whose space is zero are left as
background.  Colours follow sector order, so output is deterministic.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import PlotDimension

PALETTE = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"]
CELL = 24


def partition_svg(SP, radius: int = 5) -> str:
    Q = SP.Q
    if Q.dim != 2 or Q.rank != 2:
        raise PlotDimension("plots need a two-dimensional semigroup")
    span = 2 * radius + 1
    legend_h = 18 * (len(SP.sectors) + 1)
    width, height = span * CELL + 180, max(span * CELL, legend_h) + 20
    cells: dict = {}
    for x in range(-radius, radius + 1):
        for y in range(-radius, radius + 1):
            try:
                p = Q.to_internal((x, y))
            except ValueError:
                continue
            if not all(Fraction(c).denominator == 1 for c in p):
                continue
            k = SP.sector_at(tuple(int(c) for c in p))
            if SP.sectors[k].space_dim:
                cells.setdefault(k, []).append((x, y))

    def px(x, y):
        return 10 + (x + radius) * CELL, 10 + (radius - y) * CELL

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">']
    out.append(f'<rect x="10" y="10" width="{span * CELL}" height="{span * CELL}" fill="#f7f7f7" stroke="#999"/>')
    ox, oy = px(0, 0)
    out.append(f'<line x1="10" y1="{oy + CELL / 2}" x2="{10 + span * CELL}" y2="{oy + CELL / 2}" stroke="#bbb"/>')
    out.append(f'<line x1="{ox + CELL / 2}" y1="10" x2="{ox + CELL / 2}" y2="{10 + span * CELL}" stroke="#bbb"/>')
    for k in sorted(cells):
        colour = PALETTE[k % len(PALETTE)]
        out.append(f'<g data-sector="{k}" data-dim="{SP.sectors[k].space_dim}" fill="{colour}" fill-opacity="0.75">')
        for x, y in cells[k]:
            cx, cy = px(x, y)
            out.append(f'<polygon points="{cx},{cy} {cx + CELL},{cy} {cx + CELL},{cy + CELL} {cx},{cy + CELL}"/>')
        out.append("</g>")
    lx = span * CELL + 30
    out.append(f'<text x="{lx}" y="24" font-family="sans-serif" font-size="12">sector: dim</text>')
    row = 1
    for k, sec in enumerate(SP.sectors):
        if not sec.space_dim:
            continue
        y = 24 + 18 * row
        out.append(f'<rect x="{lx}" y="{y - 10}" width="12" height="12" fill="{PALETTE[k % len(PALETTE)]}"/>')
        out.append(f'<text x="{lx + 18}" y="{y}" font-family="sans-serif" font-size="12">{k}: {sec.space_dim}</text>')
        row += 1
    out.append("</svg>")
    return "\n".join(out) + "\n"

"""Deterministic SVG rendering of assemblies.

One filled, labelled square per tile; an optional hatched overlay marks the
constrained (diffusion-unreachable) cells. Three-dimensional assemblies render
one z-slice at a time. Identical inputs produce byte-identical output: cells
are emitted in sorted order, colors derive from a stable digest of the tile
label, and all geometry is integer arithmetic.

Each tile rect carries a ``data-cell`` attribute with its lattice coordinates
so rendered output stays machine-checkable.
"""

from __future__ import annotations

import hashlib
from typing import Iterable
from xml.sax.saxutils import escape

from .core import Assembly, Point, TileSet
from .dynamics import constrained_cells

_MARGIN = 2

# Fills chosen for legible dark text; assignment hashes the label so a tile
# type keeps its color from frame to frame as an assembly grows.
_PALETTE = (
    "#93c5fd", "#fca5a5", "#86efac", "#fcd34d", "#c4b5fd",
    "#f9a8d4", "#99f6e4", "#fdba74", "#d9f99d", "#a5b4fc",
    "#f5d0fe", "#bae6fd",
)


class SliceOutOfRange(ValueError):
    """The requested z-slice lies outside the assembly's extent."""

    def __init__(self, slice_z: int, lo: int, hi: int):
        self.slice_z = slice_z
        self.lo = lo
        self.hi = hi
        super().__init__(f"slice z={slice_z} outside assembly range [{lo}, {hi}]")


def _fill_for(label: str) -> str:
    digest = hashlib.md5(label.encode("utf-8")).digest()
    return _PALETTE[digest[0] % len(_PALETTE)]


def render_svg(
    assembly: Assembly,
    tile_set: TileSet | None = None,
    *,
    scale: int = 24,
    slice_z: int | None = None,
    highlight_constrained: bool = False,
) -> str:
    """Render an assembly (or one z-slice of a 3D assembly) as an SVG string.

    Tiles show the tile type's display label when a tile set is given and the
    raw tile id otherwise. With ``highlight_constrained`` the enclosed cells
    of the lattice complement are overlaid with a hatch pattern.
    """
    if scale < 4:
        raise ValueError("scale must be at least 4 pixels per cell")
    if assembly.dimension == 2:
        if slice_z is not None:
            raise ValueError("two-dimensional assemblies have no z-slices")
    else:
        if slice_z is None:
            raise ValueError(
                "three-dimensional assemblies render one z-slice at a time; "
                "pass slice_z"
            )
        if len(assembly):
            zs = [p[2] for p in assembly.placements]
            lo, hi = min(zs), max(zs)
            if not lo <= slice_z <= hi:
                raise SliceOutOfRange(slice_z, lo, hi)

    def in_slice(p: Point) -> bool:
        return assembly.dimension == 2 or p[2] == slice_z

    tiles = sorted(
        ((p[0], p[1]), t) for p, t in assembly.placements.items() if in_slice(p)
    )
    hatched: list[tuple[int, int]] = []
    if highlight_constrained:
        hatched = sorted(
            (p[0], p[1]) for p in constrained_cells(assembly) if in_slice(p)
        )

    cells = [c for c, _ in tiles] + hatched
    if cells:
        min_x = min(c[0] for c in cells)
        max_x = max(c[0] for c in cells)
        min_y = min(c[1] for c in cells)
        max_y = max(c[1] for c in cells)
        width = (max_x - min_x + 1) * scale + 2 * _MARGIN
        height = (max_y - min_y + 1) * scale + 2 * _MARGIN
    else:
        min_x = max_y = 0
        width = height = 2 * _MARGIN

    def corner(cell: tuple[int, int]) -> tuple[int, int]:
        # Lattice north is +y; SVG y grows downward, so flip.
        return (
            _MARGIN + (cell[0] - min_x) * scale,
            _MARGIN + (max_y - cell[1]) * scale,
        )

    font = max(6, scale * 2 // 5)
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        "<defs>",
        '<pattern id="hatch" width="6" height="6" patternUnits="userSpaceOnUse"'
        ' patternTransform="rotate(45)">'
        '<line x1="0" y1="0" x2="0" y2="6" stroke="#b91c1c" stroke-width="2"/>'
        "</pattern>",
        "</defs>",
    ]
    for cell, tile_id in tiles:
        x, y = corner(cell)
        label = tile_id
        if tile_set is not None and tile_id in tile_set:
            label = tile_set.tile(tile_id).label
        parts.append(
            f'<rect class="tile" data-cell="{cell[0]},{cell[1]}" '
            f'x="{x}" y="{y}" width="{scale}" height="{scale}" '
            f'fill="{_fill_for(label)}" stroke="#334155" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x + scale // 2}" y="{y + scale // 2 + font * 2 // 5}" '
            f'font-family="monospace" font-size="{font}" text-anchor="middle" '
            f'fill="#1e293b">{escape(label)}</text>'
        )
    for cell in hatched:
        x, y = corner(cell)
        parts.append(
            f'<rect class="constrained" data-cell="{cell[0]},{cell[1]}" '
            f'x="{x}" y="{y}" width="{scale}" height="{scale}" '
            f'fill="url(#hatch)" stroke="#b91c1c" stroke-width="1"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

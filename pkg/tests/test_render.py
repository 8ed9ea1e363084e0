"""Tests for SVG rendering of assemblies."""

import re

import pytest

from helpers import ab_system, ring_system
from tilebench.core import Assembly
from tilebench.render import SliceOutOfRange, render_svg
from tilebench.systems import chambers_layout, chambers_script, gen_chambers

TILE_RECT = re.compile(r'<rect class="tile" data-cell="(-?\d+),(-?\d+)"')
CONSTRAINED_RECT = re.compile(r'<rect class="constrained" data-cell="(-?\d+),(-?\d+)"')


def tile_cells(svg):
    return {(int(x), int(y)) for x, y in TILE_RECT.findall(svg)}


def constrained_cells_of(svg):
    return {(int(x), int(y)) for x, y in CONSTRAINED_RECT.findall(svg)}


class TestTwoDimensional:
    def test_singleton_assembly_renders_one_square(self):
        svg = render_svg(Assembly(2, {(0, 0): "S"}))
        assert len(TILE_RECT.findall(svg)) == 1
        assert constrained_cells_of(svg) == set()

    def test_rendered_cells_equal_assembly_domain(self):
        system = ring_system()
        svg = render_svg(system.seed, system.tile_set)
        assert tile_cells(svg) == set(system.seed.placements)

    def test_ring_with_highlight_shows_eight_squares_and_one_hatched_cell(self):
        system = ring_system()
        svg = render_svg(system.seed, system.tile_set, highlight_constrained=True)
        assert len(TILE_RECT.findall(svg)) == 8
        assert len(CONSTRAINED_RECT.findall(svg)) == 1
        assert constrained_cells_of(svg) == {(1, 1)}

    def test_output_is_deterministic(self):
        system = ring_system()
        first = render_svg(system.seed, system.tile_set, highlight_constrained=True)
        second = render_svg(system.seed, system.tile_set, highlight_constrained=True)
        assert first == second

    def test_labels_come_from_tile_set_when_given(self):
        system = ab_system()
        seed_only = system.seed
        with_labels = render_svg(seed_only, system.tile_set)
        assert ">S</text>" in with_labels
        bare = render_svg(seed_only)
        assert ">S</text>" in bare  # id falls back when it is its own label

    def test_labels_are_xml_escaped(self):
        svg = render_svg(Assembly(2, {(0, 0): "a<b&c"}))
        assert "a&lt;b&amp;c" in svg
        assert "a<b&c" not in svg.replace("a&lt;b&amp;c", "")

    def test_scale_controls_square_size(self):
        svg = render_svg(Assembly(2, {(0, 0): "S"}), scale=40)
        assert 'width="40" height="40"' in svg
        with pytest.raises(ValueError):
            render_svg(Assembly(2, {(0, 0): "S"}), scale=2)

    def test_empty_assembly_renders_without_rects(self):
        svg = render_svg(Assembly(2, {}))
        assert "<svg" in svg and "</svg>" in svg
        assert TILE_RECT.findall(svg) == []

    def test_slice_option_is_rejected_in_two_dimensions(self):
        with pytest.raises(ValueError):
            render_svg(Assembly(2, {(0, 0): "S"}), slice_z=0)

    def test_north_is_up(self):
        svg = render_svg(
            Assembly(2, {(0, 0): "low", (0, 1): "high"}), scale=10
        )
        low = re.search(r'data-cell="0,0" x="(\d+)" y="(\d+)"', svg)
        high = re.search(r'data-cell="0,1" x="(\d+)" y="(\d+)"', svg)
        assert int(high.group(2)) < int(low.group(2))


class TestThreeDimensional:
    def test_slice_is_required(self):
        with pytest.raises(ValueError):
            render_svg(Assembly(3, {(0, 0, 0): "S"}))

    def test_slice_out_of_range(self):
        with pytest.raises(SliceOutOfRange) as err:
            render_svg(Assembly(3, {(0, 0, 0): "S"}), slice_z=4)
        assert err.value.slice_z == 4

    def test_chambers_slice_matches_shape_cross_section(self):
        height = 3
        system = gen_chambers(height)
        trace = chambers_script(height)
        final = trace.result()
        for z in (0, 2):
            svg = render_svg(final, system.tile_set, slice_z=z, scale=8)
            expected = {(p[0], p[1]) for p in final.placements if p[2] == z}
            assert tile_cells(svg) == expected

    def test_tunnel_slice_shows_hollow_ring(self):
        height = 3
        trace = chambers_script(height)
        final = trace.result()
        layout = chambers_layout(height)
        svg = render_svg(final, slice_z=2, scale=8)
        cells = tile_cells(svg)
        # The hollow channel's central row is open through the tunnel.
        for x in range(9, 14):
            assert (x, 4) not in cells
        ring_xy = {(x, y) for x, y, z in layout.tunnel if z == 2}
        assert ring_xy <= cells

    def test_constrained_highlight_projects_the_slice(self):
        # A 3x3x3 shell with a hollow center: the center cell is constrained.
        cells = {}
        for x in range(3):
            for y in range(3):
                for z in range(3):
                    if (x, y, z) != (1, 1, 1):
                        cells[(x, y, z)] = "w"
        box = Assembly(3, cells)
        svg = render_svg(box, slice_z=1, highlight_constrained=True)
        assert constrained_cells_of(svg) == {(1, 1)}
        top = render_svg(box, slice_z=2, highlight_constrained=True)
        assert constrained_cells_of(top) == set()

"""Tests for the benchmark system generators and their scripted scenarios.

Structural audits recompute each generator's promised geometry from its
output (counter heights, crash rows, wall composition, chamber footprints),
and every scenario's assertions are re-derived here rather than trusted.
"""

from __future__ import annotations

import pytest

from tilebench.core import (
    ATAM,
    ATAM3D,
    PATAM,
    SATAM,
    Assembly,
    ModelVariant,
    is_subassembly,
    validate_tile_system,
)
from tilebench.dynamics import (
    ConstrainedLocation,
    InvalidStep,
    attach,
    check_directed,
    constrained_cells,
    explore_graph,
    frontier,
    random_run,
    run_trace,
)
from tilebench.systems import (
    INNER_PILLAR_BASE,
    OUTER_PILLAR_BASE,
    CounterLayout,
    NoMatchingWindow,
    NotTwoDimensional,
    blocking_counter_layout,
    blocking_counters_script,
    chambers_layout,
    chambers_script,
    embed_2d_in_3d,
    gen_blocking_counters,
    gen_chambers,
    gen_rectangle_arms,
    gen_undirected_ab,
    scenario_plug_chambers,
    scenario_pump_arm,
    scenario_seal_rectangle,
)

from helpers import ring_system

ALL_VARIANTS = (ATAM, PATAM, ATAM3D, SATAM)


def greedy_terminal(system, assembly=None):
    cur = assembly if assembly is not None else system.seed
    while True:
        options = frontier(system, cur)
        if not options:
            return cur
        cur = attach(system, cur, options[0])


# --------------------------------------------------------------------------
# the A/B choice system
# --------------------------------------------------------------------------


class TestUndirectedAB:
    @pytest.mark.parametrize("variant", ALL_VARIANTS, ids=str)
    def test_validates_and_has_two_terminals(self, variant):
        system = gen_undirected_ab(variant)
        assert not validate_tile_system(system)
        graph = explore_graph(system, max_tiles=4)
        assert not graph.truncated
        assert len(graph.terminals) == 2
        tops = sorted(
            graph.nodes[i].placements[max(graph.nodes[i].domain())]
            for i in graph.terminals
        )
        assert tops == ["A", "B"]

    @pytest.mark.parametrize("variant", ALL_VARIANTS, ids=str)
    def test_undirected_verdict(self, variant):
        verdict = check_directed(gen_undirected_ab(variant), max_tiles=4)
        assert verdict.status == "undirected"
        assert verdict.witness is not None


# --------------------------------------------------------------------------
# blocking counters
# --------------------------------------------------------------------------


class TestBlockingCounters:
    def test_layout_spacing(self):
        layouts = blocking_counter_layout(3)
        assert [lay.n for lay in layouts] == [8, 9, 10]
        assert [lay.base_x for lay in layouts] == [8, 20, 32]
        assert [lay.width for lay in layouts] == [4, 4, 4]
        assert layouts[0].crash_column == 4
        assert layouts[0].red_cell == (7, 1)

    def test_rejects_zero_iterations(self):
        with pytest.raises(ValueError):
            gen_blocking_counters(0)

    def test_generator_validates(self):
        for k in (1, 2):
            assert not validate_tile_system(gen_blocking_counters(k))

    def test_full_script_is_terminal_and_directed_evidence(self):
        trace = blocking_counters_script(1)
        system = trace.system
        final = trace.result()
        assert not frontier(system, final)
        assert greedy_terminal(system) == final
        graph = explore_graph(system, max_tiles=12, state_budget=100_000)
        assert all(is_subassembly(node, final) for node in graph.nodes)
        verdict = check_directed(system, max_tiles=12, state_budget=100_000)
        assert verdict.status != "undirected"

    def test_counter_heights_are_exact(self):
        trace = blocking_counters_script(2)
        final = trace.result()
        for lay in blocking_counter_layout(2):
            rows = sorted(
                y
                for (x, y), t in final.placements.items()
                if x == lay.base_x and t.startswith(f"c{lay.n}.")
            )
            assert rows == list(range(1, lay.n + 1))
            assert final.get((lay.base_x, lay.n + 1)) == f"k{lay.n}.0"

    def test_row_labels_count_in_binary(self):
        system = gen_blocking_counters(1)
        lay = blocking_counter_layout(1)[0]
        for j in range(1, lay.n + 1):
            word = "".join(
                system.tile_set.tile(f"c{lay.n}.{j}.{i}").label
                for i in range(lay.width)
            )
            assert word == format(j, f"0{lay.width}b")

    def test_drop_column_crashes_one_above_planter(self):
        trace = blocking_counters_script(2)
        final = trace.result()
        for lay in blocking_counter_layout(2):
            rows = sorted(
                y
                for (x, y), t in final.placements.items()
                if x == lay.crash_column and t == f"d{lay.n}"
            )
            assert rows == list(range(1, lay.n + 1))
            assert str(final.get((lay.crash_column, 0))).startswith("pl")
            assert final.get(lay.red_cell) == "red"

    def test_drop_column_is_one_tile_type(self):
        system = gen_blocking_counters(1)
        drops = [t for t in system.tile_set.tiles if t.id.startswith("d")]
        assert len(drops) == 1
        (drop,) = drops
        north = drop.glue((0, 1))
        south = drop.glue((0, -1))
        assert north == south and north.strength == 2

    def test_script_is_deterministic(self):
        assert blocking_counters_script(2).steps == blocking_counters_script(2).steps


class TestPumpArmScenario:
    def test_pump_reaches_the_direct_crash(self):
        result = scenario_pump_arm(1)
        assert result.all_hold()
        # The pumped assembly and the direct simulation agree exactly.
        assert result.checkpoints["pumped"] == result.checkpoints["direct"]
        # And the trace replays to the pumped checkpoint.
        replay = run_trace(result.trace.system, result.trace.steps)
        assert replay == result.checkpoints["pumped"]

    def test_larger_iterations_also_pump(self):
        for k in (2, 3):
            assert scenario_pump_arm(k).all_hold()

    def test_single_drop_prefix_has_no_matching_window(self):
        with pytest.raises(NoMatchingWindow):
            scenario_pump_arm(1, prefix_drops=1)

    def test_scenario_is_deterministic(self):
        a = scenario_pump_arm(1)
        b = scenario_pump_arm(1)
        assert a.trace.steps == b.trace.steps
        assert a.assertions == b.assertions


# --------------------------------------------------------------------------
# rectangle arms
# --------------------------------------------------------------------------


class TestRectangleArms:
    def test_generator_validates_and_is_undirected(self):
        system = gen_rectangle_arms()
        assert not validate_tile_system(system)
        verdict = check_directed(system, max_tiles=4)
        assert verdict.status == "undirected"

    def test_walls_repeat_one_type_with_single_corners(self):
        system = gen_rectangle_arms()
        graph = explore_graph(system, max_tiles=6, state_budget=100_000)
        for node in graph.nodes:
            tiles = list(node.placements.values())
            for corner in ("ce", "cn", "cw"):
                assert tiles.count(corner) <= 1
            south = {t for (x, y), t in node.placements.items() if y == 0 and x > 0}
            assert south <= {"s", "ce"}

    def test_corner_competes_with_wall_extension(self):
        system = gen_rectangle_arms()
        options = frontier(system, system.seed)
        assert {p.tile for p in options if p.location == (1, 0)} == {"s", "ce"}

    def test_seal_scenario_assertions_hold(self):
        result = scenario_seal_rectangle()
        assert result.all_hold()

    def test_sealed_interior_rejects_replay_step_at_exact_index(self):
        result = scenario_seal_rectangle()
        trace = result.trace
        probe_row = max(
            y
            for (x, y), t in result.checkpoints["sealed"].placements.items()
            if t == "a" and (3, y) not in result.checkpoints["sealed"]
        )
        from tilebench.dynamics import Placement

        steps = trace.steps + (Placement((3, probe_row), "a"),)
        with pytest.raises(InvalidStep) as err:
            run_trace(trace.system, steps)
        assert err.value.index == len(trace.steps)
        assert isinstance(err.value.cause, ConstrainedLocation)

    def test_unrestricted_replay_diverges(self):
        result = scenario_seal_rectangle()
        sealed = result.checkpoints["sealed"]
        replay = result.checkpoints["unrestricted_replay"]
        assert sealed == replay  # same tiles placed...
        patam = result.trace.system
        atam = patam.with_variant(ATAM)
        assert not frontier(patam, sealed)
        assert frontier(atam, replay)  # ...but only one variant is stuck

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            scenario_seal_rectangle(height=10)
        with pytest.raises(ValueError):
            scenario_seal_rectangle(east_length=3)

    def test_scenario_is_deterministic(self):
        assert (
            scenario_seal_rectangle().trace.steps
            == scenario_seal_rectangle().trace.steps
        )


# --------------------------------------------------------------------------
# chambers
# --------------------------------------------------------------------------


class TestChambers:
    def test_layout_footprints(self):
        layout = chambers_layout(4)
        assert len(layout.outer_base) == 81
        assert len(layout.inner_base) == 81
        assert len(layout.inner_ceiling) == 81
        assert len(layout.outer_ceiling) == 80  # the hole
        assert layout.ceiling_hole == (4, 4, 5)
        assert len(layout.tunnel) == 40  # five hollow 3x3 rings
        # Chambers sit five columns apart and the wall openings stay open.
        assert (8, 4, 2) not in layout.shell
        assert (14, 4, 2) not in layout.shell

    def test_generator_validates(self):
        assert not validate_tile_system(gen_chambers(4))

    def test_rejects_too_short_walls(self):
        with pytest.raises(ValueError):
            gen_chambers(2)
        with pytest.raises(ValueError):
            scenario_plug_chambers(3)

    def test_plug_scenario_assertions_hold(self):
        result = scenario_plug_chambers(4, inner_height=2)
        assert result.all_hold()

    def test_plug_seals_both_chambers_and_tunnel(self):
        result = scenario_plug_chambers(4, inner_height=2)
        sealed = constrained_cells(result.checkpoints["plugged"])
        assert (*INNER_PILLAR_BASE, 3) in sealed
        assert (11, 4, 2) in sealed  # tunnel channel centre
        assert (2, 2, 1) in sealed  # outer chamber interior
        pre = constrained_cells(result.checkpoints["pre_plug"])
        assert not pre

    def test_tunnel_central_cross_section_stays_hollow(self):
        system = gen_chambers(4)
        seen = 0
        for seed in range(3):
            trace = random_run(system, max_steps=120, seed=seed)
            assembly = system.seed
            for step in trace.steps:
                assembly = attach(system, assembly, step)
                occupied = [p for p in assembly.domain() if p[0] == 11]
                assert len(occupied) <= 8
                seen = max(seen, len(occupied))
        # The scripted full build also never exceeds the ring.
        full = chambers_script(4).result()
        ring = [p for p in full.domain() if p[0] == 11]
        assert len(ring) == 8
        assert (11, 4, 2) not in full

    def test_script_is_deterministic(self):
        assert chambers_script(4).steps == chambers_script(4).steps


# --------------------------------------------------------------------------
# the 2D-to-3D embedding
# --------------------------------------------------------------------------


class TestEmbed2DIn3D:
    def test_rejects_non_2d_input(self):
        with pytest.raises(NotTwoDimensional):
            embed_2d_in_3d(gen_undirected_ab(ATAM3D))

    def test_rejects_2d_target_variant(self):
        with pytest.raises(ValueError):
            embed_2d_in_3d(gen_undirected_ab(), variant=ATAM)

    def test_embedded_ab_keeps_two_terminals(self):
        system = embed_2d_in_3d(gen_undirected_ab())
        graph = explore_graph(system, max_tiles=4)
        assert not graph.truncated
        assert len(graph.terminals) == 2

    def test_glues_move_to_the_z0_plane(self):
        system = embed_2d_in_3d(gen_undirected_ab())
        seed_tile = system.tile_set.tile("S")
        assert seed_tile.glue((0, 1, 0)).label == "a"
        assert seed_tile.glue((0, 0, 1)).strength == 0
        assert set(system.seed.domain()) == {(0, 0, 0)}

    def test_diffusion_flag_follows_source_or_override(self):
        patam = gen_undirected_ab(PATAM)
        assert embed_2d_in_3d(patam).variant == SATAM
        assert embed_2d_in_3d(patam, variant=ATAM3D).variant == ATAM3D
        assert embed_2d_in_3d(gen_undirected_ab()).variant == ATAM3D

    def test_embedded_plane_cannot_enclose_space(self):
        # The 2D ring constrains its centre; in 3D the same plane does not.
        ring2d = ring_system(variant=PATAM)
        ring3d = embed_2d_in_3d(ring2d)
        assert ring3d.variant == SATAM
        assert (1, 1) in constrained_cells(ring2d.seed)
        assert not constrained_cells(ring3d.seed)
        from tilebench.dynamics import Placement

        with pytest.raises(ConstrainedLocation):
            attach(ring2d, ring2d.seed, Placement((1, 1), "fill_in"))
        grown = attach(ring3d, ring3d.seed, Placement((1, 1, 0), "fill_in"))
        assert grown.get((1, 1, 0)) == "fill_in"

    def test_frontier_cardinality_preserved_within_bound(self):
        flat = gen_undirected_ab()
        tall = embed_2d_in_3d(flat)
        g2 = explore_graph(flat, max_tiles=4)
        g3 = explore_graph(tall, max_tiles=4)
        assert len(g2.nodes) == len(g3.nodes)
        for node2, node3 in zip(g2.nodes, g3.nodes):
            assert len(frontier(flat, node2)) == len(frontier(tall, node3))

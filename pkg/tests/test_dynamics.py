"""Dynamics: frontier, attachment, diffusion restriction, traces, exploration."""

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from oracles import brute_force_frontier, enclosed_empty_cells
from helpers import ab_system, make_system, make_tile, ribbon_system, ring_system
from tilebench.core import (
    ATAM,
    ATAM3D,
    PATAM,
    SATAM,
    Assembly,
    Glue,
    TileSet,
    TileSystem,
    TileType,
    DIRECTIONS_2D,
    directions,
)
from tilebench.dynamics import (
    AssemblyTrace,
    ConstrainedLocation,
    DirectednessVerdict,
    InsufficientStrength,
    InvalidStep,
    OccupiedLocation,
    Placement,
    SplitMix64,
    StateBudgetExceeded,
    UnknownTile,
    attach,
    check_directed,
    constrained_cells,
    explore_graph,
    explore_producibles,
    frontier,
    random_run,
    run_trace,
)

PROPERTY_SETTINGS = settings(
    max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)


class TestFrontier:
    def test_ab_frontier_has_both_options(self):
        system = ab_system()
        options = frontier(system, system.seed)
        assert options == (Placement((0, 1), "A"), Placement((0, 1), "B"))

    def test_canonical_order_location_then_tile(self):
        tiles = [
            make_tile("S", N=("a", 1), E=("a", 1)),
            make_tile("z", S=("a", 1)),
            make_tile("y", S=("a", 1), W=("a", 1)),
        ]
        system = make_system(tiles, {(0, 0): "S"})
        options = frontier(system, system.seed)
        assert options == (
            Placement((0, 1), "y"),
            Placement((0, 1), "z"),
            Placement((1, 0), "y"),
        )

    def test_cooperative_attachment_needs_both_neighbors(self):
        tiles = [
            make_tile("L", E=("x", 1)),
            make_tile("R", W=("y", 1)),
            make_tile("c", W=("x", 1), E=("y", 1)),
        ]
        system = make_system(tiles, {(0, 0): "L", (2, 0): "R"}, temperature=2)
        # Seed is deliberately disconnected for the cooperation geometry.
        options = frontier(system, system.seed)
        assert options == (Placement((1, 0), "c"),)


class TestDiffusionRestriction:
    def test_ring_center_constrained(self):
        system = ring_system()
        assert constrained_cells(system.seed) == frozenset({(1, 1)})
        assert enclosed_empty_cells(system.seed) == frozenset({(1, 1)})

    def test_unrestricted_frontier_includes_center(self):
        system = ring_system(variant=ATAM)
        assert Placement((1, 1), "fill_in") in frontier(system, system.seed)

    def test_restricted_frontier_excludes_center(self):
        system = ring_system(variant=PATAM)
        options = frontier(system, system.seed)
        assert Placement((1, 1), "fill_in") not in options
        assert Placement((1, -1), "fill_out") in options

    def test_restricted_attach_raises(self):
        system = ring_system(variant=PATAM)
        with pytest.raises(ConstrainedLocation):
            attach(system, system.seed, Placement((1, 1), "fill_in"))
        # The same attachment is fine without the restriction.
        grown = attach(ring_system(variant=ATAM), system.seed, Placement((1, 1), "fill_in"))
        assert grown.get((1, 1)) == "fill_in"

    def test_3d_shell_center_constrained(self):
        shell = TileType("s", glues={d: Glue("s", 2) for d in directions(3)})
        filler = make_tile("c", dimension=3, U=("s", 2))
        cells = {
            (x, y, z)
            for x in range(3)
            for y in range(3)
            for z in range(3)
            if (x, y, z) != (1, 1, 1)
        }
        tile_set = TileSet(3, (shell, filler))
        seed = Assembly(3, {c: "s" for c in cells})
        system = TileSystem(tile_set, seed, 2, SATAM)
        assert constrained_cells(seed) == frozenset({(1, 1, 1)})
        assert enclosed_empty_cells(seed) == frozenset({(1, 1, 1)})
        assert all(p.location != (1, 1, 1) for p in frontier(system, seed))
        unrestricted = system.with_variant(ATAM3D)
        assert Placement((1, 1, 1), "c") in frontier(unrestricted, seed)

    def test_open_pocket_not_constrained(self):
        # A U shape: the pocket touches the outside, nothing is constrained.
        tiles = [make_tile("u")]
        seed = {(0, 0): "u", (1, 0): "u", (2, 0): "u", (0, 1): "u", (2, 1): "u"}
        a = Assembly(2, seed)
        assert constrained_cells(a) == frozenset()
        assert enclosed_empty_cells(a) == frozenset()


class TestAttachErrors:
    def test_unknown_tile(self):
        system = ab_system()
        with pytest.raises(UnknownTile):
            attach(system, system.seed, Placement((0, 1), "ghost"))

    def test_occupied(self):
        system = ab_system()
        with pytest.raises(OccupiedLocation):
            attach(system, system.seed, Placement((0, 0), "A"))

    def test_insufficient_strength(self):
        system = ab_system()
        with pytest.raises(InsufficientStrength) as err:
            attach(system, system.seed, Placement((1, 0), "A"))
        assert err.value.strength == 0

    def test_strength_before_constrained(self):
        # A sealed cell where the tile also has no matching glues: the
        # strength failure is reported, not the seal.
        system = ring_system(variant=PATAM)
        with pytest.raises(InsufficientStrength):
            attach(system, system.seed, Placement((1, 1), "fill_out"))


class TestTraces:
    def test_run_trace_replays(self):
        system = ab_system()
        result = run_trace(system, [Placement((0, 1), "A")])
        assert result.get((0, 1)) == "A"

    def test_invalid_step_carries_index_and_cause(self):
        system = ab_system()
        steps = [Placement((0, 1), "A"), Placement((0, 2), "A")]
        with pytest.raises(InvalidStep) as err:
            run_trace(system, steps)
        assert err.value.index == 1
        assert isinstance(err.value.cause, InsufficientStrength)

    def test_trace_result_caches(self):
        system = ab_system()
        trace = AssemblyTrace(system, [Placement((0, 1), "B")])
        assert trace.result() is trace.result()
        assert trace.result().get((0, 1)) == "B"

    def test_prefix_and_extended(self):
        system = ribbon_system()
        trace = AssemblyTrace(system, [Placement((1, 0), "r"), Placement((2, 0), "r")])
        assert len(trace.prefix(1)) == 1
        assert len(trace.extended([Placement((3, 0), "r")])) == 3


class TestRandomRun:
    def test_splitmix64_reference_vector(self):
        rng = SplitMix64(0)
        assert [rng.next_u64() for _ in range(3)] == [
            0xE220A8397B1DCDAF,
            0x6E789E6AA1B965F4,
            0x06C45D188009454F,
        ]

    def test_same_seed_same_trace(self):
        system = ribbon_system()
        t1 = random_run(system, 20, seed=7)
        t2 = random_run(system, 20, seed=7)
        assert t1.steps == t2.steps
        assert len(t1.steps) == 20

    def test_stops_at_empty_frontier(self):
        tiles = [make_tile("S", N=("a", 1)), make_tile("A", S=("a", 1))]
        system = make_system(tiles, {(0, 0): "S"})
        trace = random_run(system, 50, seed=1)
        assert len(trace.steps) == 1
        assert trace.result().get((0, 1)) == "A"


class TestExploration:
    def test_ab_producibles_and_terminals(self):
        system = ab_system()
        result = explore_producibles(system, max_tiles=10)
        assert len(result.producibles) == 3
        assert len(result.terminals) == 2
        assert not result.truncated
        terminal_tiles = sorted(t.get((0, 1)) for t in result.terminals)
        assert terminal_tiles == ["A", "B"]

    def test_truncation_flag(self):
        system = ribbon_system()
        result = explore_producibles(system, max_tiles=5)
        assert result.truncated
        assert max(len(a) for a in result.producibles) == 5

    def test_worker_count_does_not_change_results(self):
        system = ab_system()
        base = explore_producibles(system, max_tiles=10, workers=1)
        for workers in (2, 3, 8):
            other = explore_producibles(system, max_tiles=10, workers=workers)
            assert other.producibles == base.producibles
            assert other.terminals == base.terminals

    def test_state_budget_exceeded(self):
        # One sticky tile type growing in every direction: states explode.
        sticky = TileType("g", glues={d: Glue("g", 1) for d in DIRECTIONS_2D})
        system = TileSystem(TileSet(2, (sticky,)), Assembly(2, {(0, 0): "g"}), 1, ATAM)
        with pytest.raises(StateBudgetExceeded):
            explore_producibles(system, max_tiles=30, state_budget=100)

    def test_graph_edges_consistent(self):
        system = ab_system()
        graph = explore_graph(system, max_tiles=10)
        assert len(graph.nodes) == 3
        assert len(graph.edges) == 2
        for parent, child, placement in graph.edges:
            grown = graph.nodes[parent].with_tile(placement.location, placement.tile)
            assert grown == graph.nodes[child]


class TestCheckDirected:
    def test_ab_undirected_all_variants(self):
        for variant in (ATAM, PATAM, ATAM3D, SATAM):
            verdict = check_directed(ab_system(variant), max_tiles=10)
            assert verdict.status == "undirected"
            assert verdict.witness is not None
            a, b = verdict.witness
            assert a != b

    def test_chain_directed(self):
        tiles = [
            make_tile("S", E=("1", 1)),
            make_tile("m", W=("1", 1), E=("2", 1)),
            make_tile("e", W=("2", 1)),
        ]
        system = make_system(tiles, {(0, 0): "S"})
        verdict = check_directed(system, max_tiles=10)
        assert verdict == DirectednessVerdict("directed", None, False)

    def test_truncated_unknown(self):
        verdict = check_directed(ribbon_system(), max_tiles=5)
        assert verdict.status == "unknown"
        assert verdict.truncated

    def test_equal_domain_conflict_detected(self):
        # A or B in the middle, then a shared cap: conflict appears before any
        # terminal is expanded; the witness is completed to distinct terminals.
        tiles = [
            make_tile("S", E=("a", 1)),
            make_tile("A", W=("a", 1), E=("c", 1)),
            make_tile("B", W=("a", 1), E=("c", 1)),
            make_tile("C", W=("c", 1)),
        ]
        system = make_system(tiles, {(0, 0): "S"})
        verdict = check_directed(system, max_tiles=10)
        assert verdict.status == "undirected"
        a, b = verdict.witness
        assert a.domain() == b.domain()
        assert {a.get((1, 0)), b.get((1, 0))} == {"A", "B"}
        # Greedy completion reached the shared cap on both.
        assert a.get((2, 0)) == "C" and b.get((2, 0)) == "C"


@st.composite
def random_system_state(draw):
    """A random small system plus a connected assembly over its tiles."""
    size = draw(st.integers(min_value=1, max_value=7))
    cells = [(0, 0)]
    while len(cells) < size:
        base = draw(st.sampled_from(cells))
        d = draw(st.sampled_from(DIRECTIONS_2D))
        cell = (base[0] + d[0], base[1] + d[1])
        if cell not in cells:
            cells.append(cell)
    pool = [None, ("g1", 1), ("g1", 2), ("g2", 1)]
    tiles = []
    for i in range(size + 2):
        glues = {}
        for d in DIRECTIONS_2D:
            choice = draw(st.sampled_from(pool))
            if choice is not None:
                glues[d] = Glue(*choice)
        tiles.append(TileType(f"t{i}", glues=glues))
    tau = draw(st.integers(min_value=1, max_value=2))
    restricted = draw(st.booleans())
    variant = PATAM if restricted else ATAM
    tile_set = TileSet(2, tuple(tiles))
    assembly = Assembly(2, {cell: f"t{i % len(tiles)}" for i, cell in enumerate(cells)})
    system = TileSystem(tile_set, assembly, tau, variant)
    return system, assembly


class TestAgainstOracles:
    @PROPERTY_SETTINGS
    @given(random_system_state())
    def test_frontier_matches_brute_force(self, case):
        system, assembly = case
        expected = brute_force_frontier(system, assembly)
        actual = [(p.location, p.tile) for p in frontier(system, assembly)]
        assert actual == expected

    @PROPERTY_SETTINGS
    @given(random_system_state())
    def test_constrained_cells_match_union_find(self, case):
        _, assembly = case
        assert constrained_cells(assembly) == enclosed_empty_cells(assembly)

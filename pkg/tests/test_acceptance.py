"""Acceptance gate: the workbench-level guarantees, one test per criterion.

Running under ``-v`` prints one PASSED/FAILED line per criterion. Every
test enforces its stated wall-clock budget; blowing the budget fails the
criterion even when the property itself holds. Oracles here are written
against first principles (brute-force cut enumeration, independent flood
fills, direct set composition) rather than against the engine's own
helpers.
"""

from __future__ import annotations

import random
from time import perf_counter

import pytest

from helpers import ribbon_system
from tilebench.calibration import (
    broken_fixtures,
    fixture_reports,
    identity_fixtures,
)
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
    directions,
    is_tau_stable,
)
from tilebench.dynamics import (
    AssemblyTrace,
    ConstrainedLocation,
    InvalidStep,
    Placement,
    attach,
    check_directed,
    constrained_cells,
    explore_producibles,
    frontier,
    random_run,
    run_trace,
)
from tilebench.movies import (
    PumpingBoundInput,
    Window,
    bond_forming_submovie,
    chamber_bounds,
    extract_movie,
    movies_equal,
    pumping_bound,
    splice,
)
from tilebench.simcheck import CHECK_NAMES, check_clean_mapping
from tilebench.systems import (
    INNER_PILLAR_BASE,
    blocking_counter_layout,
    chambers_layout,
    chambers_script,
    gen_blocking_counters,
    gen_chambers,
    gen_rectangle_arms,
    gen_undirected_ab,
    scenario_plug_chambers,
    scenario_pump_arm,
    scenario_seal_rectangle,
)


def _add(p, q):
    return tuple(a + b for a, b in zip(p, q))


def _sub(p, q):
    return tuple(a - b for a, b in zip(p, q))


# --------------------------------------------------------------------------
# Criterion 1 — the A/B choice system is undirected with exactly two
# terminal assemblies under every model variant.


def test_criterion_01_undirected_witness_all_variants():
    start = perf_counter()
    for variant in (ATAM, PATAM, ATAM3D, SATAM):
        system = gen_undirected_ab(variant)
        verdict = check_directed(system, max_tiles=6)
        assert verdict.status == "undirected", variant.name
        assert verdict.witness is not None
        result = explore_producibles(system, max_tiles=6)
        assert not result.truncated
        assert len(result.terminals) == 2, variant.name
    assert perf_counter() - start < 1.0


# --------------------------------------------------------------------------
# Criterion 2 — stability agrees with brute-force cut enumeration.


def _random_tile_set(rng, dimension, count):
    labels = ("ga", "gb", "gc")
    tiles = []
    for i in range(count):
        glues = {}
        for d in directions(dimension):
            if rng.random() < 0.75:
                glues[d] = Glue(rng.choice(labels), rng.randint(1, 2))
        tiles.append(TileType(f"t{i}", f"t{i}", glues))
    return TileSet(dimension, tuple(tiles))


def _random_connected_cells(rng, dimension, count):
    cells = {(0,) * dimension}
    dirs = directions(dimension)
    while len(cells) < count:
        base = rng.choice(sorted(cells))
        cells.add(_add(base, rng.choice(dirs)))
    return sorted(cells)


def _brute_force_min_cut(assembly, tile_set):
    """Minimum bond weight over every bipartition of the assembly's cells."""
    cells = sorted(assembly.domain())
    index = {c: i for i, c in enumerate(cells)}
    edges = []
    for p in cells:
        for d in directions(assembly.dimension):
            q = _add(p, d)
            if q in index and p < q:
                gp = tile_set.tile(assembly.get(p)).glue(d)
                gq = tile_set.tile(assembly.get(q)).glue(tuple(-x for x in d))
                if gp == gq and gp.strength > 0:
                    edges.append((index[p], index[q], gp.strength))
    n = len(cells)
    if n < 2:
        return None
    best = None
    for mask in range(1, 1 << (n - 1)):
        weight = 0
        for i, j, s in edges:
            side_i = bool(mask >> (i - 1) & 1) if i else False
            side_j = bool(mask >> (j - 1) & 1) if j else False
            if side_i != side_j:
                weight += s
        if best is None or weight < best:
            best = weight
    return best


def test_criterion_02_stability_matches_brute_force_cuts():
    start = perf_counter()
    rng = random.Random(0xACCE55)
    for case in range(1000):
        dimension = 2
        tile_set = _random_tile_set(rng, dimension, rng.randint(2, 5))
        ids = [t.id for t in tile_set.tiles]
        cells = _random_connected_cells(rng, dimension, rng.randint(2, 10))
        assembly = Assembly(dimension, {c: rng.choice(ids) for c in cells})
        brute = _brute_force_min_cut(assembly, tile_set)
        for tau in (1, 2, 3):
            assert is_tau_stable(assembly, tile_set, tau) == (brute >= tau), (
                case,
                tau,
            )
    assert perf_counter() - start < 30.0


# --------------------------------------------------------------------------
# Criterion 3 — constrained cells agree with an independent flood fill.


def _flood_fill_enclosed(domain, dimension):
    """Empty cells unreachable from outside the inflated bounding box."""
    if not domain:
        return frozenset()
    lo = tuple(min(p[i] for p in domain) - 1 for i in range(dimension))
    hi = tuple(max(p[i] for p in domain) + 1 for i in range(dimension))
    inside = lambda p: all(lo[i] <= p[i] <= hi[i] for i in range(dimension))
    seen = {lo}
    stack = [lo]
    dirs = directions(dimension)
    while stack:
        p = stack.pop()
        for d in dirs:
            q = _add(p, d)
            if q in seen or q in domain or not inside(q):
                continue
            seen.add(q)
            stack.append(q)
    if dimension == 2:
        box = (
            (x, y)
            for x in range(lo[0], hi[0] + 1)
            for y in range(lo[1], hi[1] + 1)
        )
    else:
        box = (
            (x, y, z)
            for x in range(lo[0], hi[0] + 1)
            for y in range(lo[1], hi[1] + 1)
            for z in range(lo[2], hi[2] + 1)
        )
    return frozenset(p for p in box if p not in domain and p not in seen)


def test_criterion_03_constrained_cells_match_flood_fill():
    start = perf_counter()
    rng = random.Random(0xD1FF05E)
    enclosed_seen = 0
    cases = [(2, rng.randint(2, 200)) for _ in range(1000)]
    cases += [(3, rng.randint(2, 200)) for _ in range(200)]
    for case_no, (dimension, size) in enumerate(cases):
        cells = _random_connected_cells(rng, dimension, size)
        assembly = Assembly(dimension, {c: "t" for c in cells})
        expected = _flood_fill_enclosed(assembly.domain(), dimension)
        assert constrained_cells(assembly) == expected, case_no
        enclosed_seen += len(expected)
    # Handcrafted enclosures keep the oracle honest about nonempty answers.
    ring = Assembly(
        2,
        {
            (x, y): "t"
            for x in range(3)
            for y in range(3)
            if (x, y) != (1, 1)
        },
    )
    assert constrained_cells(ring) == frozenset({(1, 1)})
    assert _flood_fill_enclosed(ring.domain(), 2) == frozenset({(1, 1)})
    shell = Assembly(
        3,
        {
            (x, y, z): "t"
            for x in range(3)
            for y in range(3)
            for z in range(3)
            if (x, y, z) != (1, 1, 1)
        },
    )
    assert constrained_cells(shell) == frozenset({(1, 1, 1)})
    assert _flood_fill_enclosed(shell.domain(), 3) == frozenset({(1, 1, 1)})
    assert enclosed_seen > 0  # the random 2D walks really do trap pockets
    assert perf_counter() - start < 60.0


# --------------------------------------------------------------------------
# Criterion 4 — splice across matching window movies composes the two
# assembly halves exactly, in both directions, and the bond-forming
# variant passes whenever the submovies match.


def _side_classifier(window, seed_location):
    """Independent seed-side test: flood fill the window's neighborhood."""
    pts = [p for e in window.edges for p in e]
    dimension = len(pts[0])
    lo = tuple(min(p[i] for p in pts) - 1 for i in range(dimension))
    hi = tuple(max(p[i] for p in pts) + 1 for i in range(dimension))
    inside = lambda p: all(lo[i] <= p[i] <= hi[i] for i in range(dimension))
    cut = {frozenset(e) for e in window.edges}
    comps = []
    unseen = {
        (x, y)
        for x in range(lo[0], hi[0] + 1)
        for y in range(lo[1], hi[1] + 1)
    } if dimension == 2 else {
        (x, y, z)
        for x in range(lo[0], hi[0] + 1)
        for y in range(lo[1], hi[1] + 1)
        for z in range(lo[2], hi[2] + 1)
    }
    dirs = directions(dimension)
    while unseen:
        origin = unseen.pop()
        comp = {origin}
        stack = [origin]
        while stack:
            p = stack.pop()
            for d in dirs:
                q = _add(p, d)
                if q not in unseen or frozenset((p, q)) in cut:
                    continue
                unseen.discard(q)
                comp.add(q)
                stack.append(q)
        comps.append(comp)
    assert len(comps) == 2
    touches = lambda comp: any(
        p[i] == lo[i] or p[i] == hi[i] for p in comp for i in range(dimension)
    )
    finite = comps[0] if not touches(comps[0]) else comps[1]
    assert not touches(finite)
    seed_on_finite = tuple(seed_location) in finite
    return lambda p: (tuple(p) in finite) == seed_on_finite


def _expected_splice_result(trace_a, trace_b, window, translation):
    seed_cell = next(iter(trace_a.system.seed.domain()))
    on_seed_a = _side_classifier(window, seed_cell)
    on_seed_b = _side_classifier(window.translate(translation), seed_cell)
    merged = {}
    for p, t in trace_a.result().placements.items():
        if on_seed_a(p):
            merged[p] = t
    for p, t in trace_b.result().placements.items():
        if not on_seed_b(p):
            merged[_sub(p, translation)] = t
    return merged


def _check_wml_instance(trace_a, trace_b, window, translation):
    gamma = splice(trace_a, trace_b, window, translation)
    # every step validates: replaying the merged trace reproduces its result
    assert run_trace(gamma.system, gamma.steps) == gamma.result()
    assert dict(gamma.result().placements) == _expected_splice_result(
        trace_a, trace_b, window, translation
    )
    # the symmetric splice composes the halves the other way around
    neg = tuple(-x for x in translation)
    delta = splice(trace_b, trace_a, window.translate(translation), neg)
    assert dict(delta.result().placements) == _expected_splice_result(
        trace_b, trace_a, window.translate(translation), neg
    )
    # matching full movies imply matching bond-forming submovies
    gamma_bf = splice(trace_a, trace_b, window, translation, mode="bond_forming")
    assert gamma_bf.result() == gamma.result()


def test_criterion_04_window_movie_splice_suite():
    start = perf_counter()
    rng = random.Random(0x5EED4)
    labels = ("ga", "gb", "gc")
    instances = 0
    nontrivial = 0
    submovie_only = 0

    def random_growth_system():
        count = rng.randint(3, 5)
        tiles = []
        for i in range(count):
            glues = {}
            for d in directions(2):
                if rng.random() < 0.7:
                    glues[d] = Glue(rng.choice(labels), rng.randint(1, 2))
            tiles.append(TileType(f"t{i}", f"t{i}", glues))
        return TileSystem(
            TileSet(2, tuple(tiles)),
            Assembly(2, {(0, 0): "t0"}),
            rng.randint(1, 2),
            ATAM,
        )

    while instances < 600:
        system = random_growth_system()
        trace_a = random_run(system, rng.randint(5, 40), rng.randrange(2**32))
        trace_b = random_run(system, rng.randint(5, 40), rng.randrange(2**32))
        dom = trace_a.result().domain() | trace_b.result().domain()
        xs = [p[0] for p in dom]
        ys = [p[1] for p in dom]
        for _ in range(4):
            lo = (
                rng.randint(min(xs) - 2, max(xs) + 2),
                rng.randint(min(ys) - 2, max(ys) + 2),
            )
            hi = (lo[0] + rng.randint(0, 1), lo[1] + rng.randint(0, 1))
            window = Window.around_box(lo, hi)
            translation = rng.choice(
                [(1, 0), (-1, 0), (0, 1), (0, -1), (2, 0), (0, 2)]
            )
            movie_a = extract_movie(trace_a, window)
            movie_b = extract_movie(trace_b, window.translate(translation))
            if movies_equal(movie_a, movie_b, translation):
                _check_wml_instance(trace_a, trace_b, window, translation)
                instances += 1
                nontrivial += bool(movie_a.entries)
            else:
                sub_a = bond_forming_submovie(
                    movie_a, trace_a.result(), system.tile_set
                )
                sub_b = bond_forming_submovie(
                    movie_b, trace_b.result(), system.tile_set
                )
                if movies_equal(sub_a, sub_b, translation):
                    splice(
                        trace_a, trace_b, window, translation, mode="bond_forming"
                    )
                    submovie_only += 1

    ribbon = ribbon_system()
    for _ in range(200):
        length = rng.randint(6, 14)
        steps = tuple(Placement((x, 0), "r") for x in range(1, length + 1))
        trace = AssemblyTrace(ribbon, steps)
        x1 = rng.randint(2, length - 4)
        k = rng.randint(1, min(3, length - 3 - x1))
        window = Window.around_box((x1, 0), (x1, 0))
        translation = (k, 0)
        movie_a = extract_movie(trace, window)
        movie_b = extract_movie(trace, window.translate(translation))
        assert movies_equal(movie_a, movie_b, translation)
        assert movie_a.entries
        _check_wml_instance(trace, trace, window, translation)
        instances += 1
        nontrivial += 1

    assert instances >= 500
    assert nontrivial >= 150
    assert perf_counter() - start < 120.0


# --------------------------------------------------------------------------
# Criterion 5 — pumping the drop-column window reproduces the directly
# simulated crash row.


@pytest.mark.parametrize("iterations", [8, 9, 10])
def test_criterion_05_pumped_crash_row_matches_direct(iterations):
    start = perf_counter()
    result = scenario_pump_arm(iterations)
    assert result.all_hold(), result.assertions
    layout = blocking_counter_layout(iterations)[-1]
    column, drop = layout.crash_column, f"d{layout.n}"

    def crash_row(assembly):
        return min(
            y
            for (x, y), t in assembly.placements.items()
            if x == column and t == drop
        )

    pumped = result.checkpoints["pumped"]
    direct = result.checkpoints["direct"]
    assert crash_row(pumped) == crash_row(direct) == 1
    assert perf_counter() - start < 60.0


# --------------------------------------------------------------------------
# Criterion 6 — sealing the rectangle freezes the interior only under the
# diffusion restriction, and an appended interior step is rejected at its
# exact index.


def test_criterion_06_sealed_interior_diverges_by_variant():
    start = perf_counter()
    result = scenario_seal_rectangle(8, 12)
    assert result.all_hold(), result.assertions
    assert result.assertions["restricted_interior_frontier_empty"]
    assert result.assertions["unrestricted_interior_frontier_nonempty"]

    sealed = result.checkpoints["sealed"]
    trace = result.trace
    probe_row = next(
        y
        for (x, y), t in sorted(sealed.placements.items())
        if t == "a" and x == 2 and (3, y) not in sealed.placements
    )
    probe = Placement((3, probe_row), "a")
    with pytest.raises(InvalidStep) as excinfo:
        run_trace(trace.system, trace.steps + (probe,))
    assert excinfo.value.index == len(trace.steps)
    assert isinstance(excinfo.value.cause, ConstrainedLocation)
    assert perf_counter() - start < 60.0


# --------------------------------------------------------------------------
# Criterion 7 — plugging the chamber freezes the inner pillar only under
# the diffusion restriction; chamber bases are 81 tiles; the tunnel's
# central cross-section never exceeds its 8-cell hollow ring.


def test_criterion_07_chamber_divergence_and_shape_constants():
    start = perf_counter()
    height = 6
    result = scenario_plug_chambers(height, 3)
    assert result.all_hold(), result.assertions
    assert result.assertions["plugged_inner_frozen_restricted"]
    assert result.assertions["plugged_inner_extendable_unrestricted"]

    layout = chambers_layout(height)
    assert len(layout.outer_base) == 81
    assert len(layout.inner_base) == 81
    plugged = result.checkpoints["plugged"]
    domain = plugged.domain()
    assert len(domain & layout.outer_base) == 81
    assert len(domain & layout.inner_base) == 81

    central = 11  # middle column of the five-column tunnel
    ring = {p for p in layout.tunnel if p[0] == central}
    assert len(ring) == 8

    # every script prefix is a producible; occupancy never exceeds the ring
    trace = result.trace
    seen = 0
    for step in trace.steps:
        if step.location[0] == central:
            seen += 1
            assert step.location in ring
        assert seen <= 8
    assert seen == 8

    # breadth-first exploration from the seed stays within the budget
    explored = explore_producibles(gen_chambers(height), max_tiles=7)
    for assembly in explored.producibles:
        assert sum(1 for p in assembly.domain() if p[0] == central) <= 8

    # focused exploration: re-grow three removed central-ring cells
    missing = sorted(ring)[:3]
    partial = Assembly(
        3, {p: t for p, t in plugged.placements.items() if p not in missing}
    )
    focused_system = TileSystem(
        trace.system.tile_set, partial, trace.system.temperature, ATAM3D
    )
    focused = explore_producibles(
        focused_system, max_tiles=len(partial) + 4
    )
    nonvacuous = 0
    for assembly in focused.producibles:
        occupancy = sum(1 for p in assembly.domain() if p[0] == central)
        assert occupancy <= 8
        nonvacuous += occupancy >= 5
    assert nonvacuous == len(focused.producibles) > 1
    assert perf_counter() - start < 120.0


# --------------------------------------------------------------------------
# Criterion 8 — the closed-form proof constants.


def test_criterion_08_proof_constant_arithmetic():
    start = perf_counter()
    assert pumping_bound(PumpingBoundInput(2, 1, 1)) == 48
    assert pumping_bound(PumpingBoundInput(3, 1, 1)) == 185794560
    assert chamber_bounds(1, 10) == (25, 299)
    assert perf_counter() - start < 1.0


# --------------------------------------------------------------------------
# Criterion 9 — checker calibration: identity setups pass everything;
# each broken fixture fails exactly its targeted check with a witness
# that replays.


def _assert_witness_replays(fixture, report):
    witness = report.witness
    assert isinstance(witness, dict) and witness
    if "trace" in witness:
        trace = witness["trace"]
        assert run_trace(trace.system, trace.steps) == trace.result()
    elif "assembly" in witness:
        violations = check_clean_mapping(fixture.setup, witness["assembly"])
        assert violations
    else:
        sim = witness["simulator_verdict"]
        simulated = witness["simulated_verdict"]
        assert sim.status != simulated.status
        for verdict in (sim, simulated):
            if verdict.status == "undirected":
                left, right = verdict.witness
                assert left != right


def test_criterion_09_simulation_checker_calibration():
    start = perf_counter()
    for fixture in identity_fixtures():
        reports = fixture_reports(fixture)
        assert set(reports) == set(CHECK_NAMES)
        for name, report in reports.items():
            assert report.status == "pass", (fixture.name, name, report.detail)
    for fixture in broken_fixtures():
        reports = fixture_reports(fixture)
        target = reports[fixture.target]
        assert target.failed, (fixture.name, target.detail)
        _assert_witness_replays(fixture, target)
        for name, report in reports.items():
            if name != fixture.target:
                assert not report.failed, (fixture.name, name, report.detail)
    assert perf_counter() - start < 120.0


# --------------------------------------------------------------------------
# Criterion 10 — exploration is deterministic across parallelism settings.


def test_criterion_10_exploration_is_parallelism_invariant():
    fixtures = [
        (gen_undirected_ab(), 6),
        (gen_undirected_ab(SATAM), 6),
        (gen_blocking_counters(1), 10),
        (gen_rectangle_arms(), 8),
        (gen_chambers(4), 8),
    ]
    for system, max_tiles in fixtures:
        baseline = None
        for workers in (1, 2, 3, 4):
            result = explore_producibles(
                system, max_tiles=max_tiles, workers=workers
            )
            canonical = tuple(a.canonical() for a in result.producibles)
            snapshot = (canonical, result.truncated)
            if baseline is None:
                baseline = snapshot
            else:
                assert snapshot == baseline, workers

"""Benchmark tile systems and scripted scenario runs over them.

Four generator families exercise the dynamics and window-movie machinery:

- :func:`gen_undirected_ab` — a seed with one north glue and two tile types
  competing for the same cell: the smallest undirected system, available in
  every model variant.
- :func:`gen_blocking_counters` — a temperature-2 directed system: a planter
  row grows east and seeds ``k`` fixed-width binary counters of heights
  8, 9, ...; each counter tops out with a capping row, hooks four tiles west,
  and drops a single-tile-type column that crashes into the planter one row
  above it, walling off a region with one cooperative red-tile site inside.
- :func:`gen_rectangle_arms` — a temperature-1 diffusion-restricted system
  that frames a rectangle with nondeterministically placed corners; the west
  wall descends in a four-tile cycle spawning eastward arms, and sealing the
  wall into the seed freezes every arm inside.
- :func:`gen_chambers` — a 3D diffusion-restricted system: two hollow
  chambers joined by an elevated tunnel, a pillar in each; the outer pillar
  eventually plugs the only ceiling hole, so the inner pillar can no longer
  recruit tiles through the sealed volume.

:func:`embed_2d_in_3d` lifts any 2D system into the z=0 plane of a 3D
variant. The ``scenario_*`` functions replay deterministic growth scripts
and return a :class:`ScenarioResult` whose named assertions are all
recomputable from the returned trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .core import (
    ATAM,
    PATAM,
    SATAM,
    Assembly,
    Glue,
    ModelVariant,
    Point,
    TileSet,
    TileSystem,
    TileType,
    add,
    directions,
    tile_from_faces as _tile,
)
from .dynamics import (
    AssemblyTrace,
    ConstrainedLocation,
    InvalidStep,
    Placement,
    attach,
    constrained_cells,
    frontier,
    run_trace,
)
from .movies import Window, find_matching_window_pair, pump


class NotTwoDimensional(ValueError):
    """Raised when a 3D embedding is asked of a system that is not 2D."""


class NoMatchingWindow(Exception):
    """Raised when no translated window pair has matching movies."""


@dataclass(frozen=True)
class ScenarioResult:
    """A scripted run: the trace plus named checkpoints and boolean outcomes."""

    trace: AssemblyTrace
    checkpoints: Mapping[str, Assembly]
    assertions: Mapping[str, bool]

    def all_hold(self) -> bool:
        return all(self.assertions.values())


# --------------------------------------------------------------------------
# the A/B choice system
# --------------------------------------------------------------------------


def gen_undirected_ab(variant: ModelVariant = ATAM) -> TileSystem:
    """Seed presenting one north glue; tiles A and B compete for the cell above.

    The smallest undirected system: exactly two terminal assemblies in every
    model variant.
    """
    tiles = [
        _tile("S", N=("a", 1)),
        _tile("A", S=("a", 1)),
        _tile("B", S=("a", 1)),
    ]
    system = TileSystem(
        TileSet(2, tuple(tiles)), Assembly(2, {(0, 0): "S"}), 1, ATAM
    )
    if variant.dimension == 3:
        return embed_2d_in_3d(system, variant)
    return system.with_variant(variant)


# --------------------------------------------------------------------------
# blocking counters
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CounterLayout:
    """Placement data for one counter iteration.

    The counter counting up to ``n`` occupies columns ``base_x`` through
    ``base_x + width - 1``, rows 1 through ``n``, under a capping row at
    ``n + 1``. Its arm hooks west along the capping row and drops a column
    at ``crash_column`` that stops one row above the planter.
    """

    n: int
    base_x: int
    width: int

    @property
    def crash_column(self) -> int:
        return self.base_x - 4

    @property
    def red_cell(self) -> Point:
        return (self.base_x - 1, 1)

    @property
    def arm_row(self) -> int:
        return self.n + 1


FIRST_COUNTER_HEIGHT = 8


def blocking_counter_layout(iterations: int) -> tuple[CounterLayout, ...]:
    """Column layout for ``iterations`` counters: each starts eight columns
    past the previous counter's footprint."""
    if iterations < 1:
        raise ValueError("at least one counter iteration is required")
    layouts = []
    x = FIRST_COUNTER_HEIGHT
    for n in range(FIRST_COUNTER_HEIGHT, FIRST_COUNTER_HEIGHT + iterations):
        layouts.append(CounterLayout(n, x, n.bit_length()))
        x += n.bit_length() + 8
    return tuple(layouts)


def _counter_tiles(layout: CounterLayout) -> list[TileType]:
    n, w = layout.n, layout.width

    def connector(row: int) -> int:
        # Serpentine: even rows hook up at the east end, odd rows at the west.
        return w - 1 if row % 2 == 0 else 0

    tiles = []
    for j in range(1, n + 1):
        for i in range(w):
            faces = {}
            if j == 1:
                faces["S"] = (f"cs{n}.{i}", 2)
                if i == 0:
                    faces["W"] = ("rw", 1)
            else:
                if i == connector(j):
                    faces["S"] = (f"v{n}.{j}", 2)
                if i > 0:
                    faces["W"] = (f"h{n}.{j}.{i - 1}", 2)
                if i < w - 1:
                    faces["E"] = (f"h{n}.{j}.{i}", 2)
            up = connector(j + 1) if j < n else connector(n + 1)
            if i == up:
                faces["N"] = (f"v{n}.{j + 1}", 2)
            bit = (j >> (w - 1 - i)) & 1
            tiles.append(_tile(f"c{n}.{j}.{i}", label=str(bit), **faces))
    for i in range(w):
        faces = {}
        if i == connector(n + 1):
            faces["S"] = (f"v{n}.{n + 1}", 2)
        if i > 0:
            faces["W"] = (f"kh{n}.{i - 1}", 2)
        else:
            faces["W"] = (f"ah{n}.0", 2)
        if i < w - 1:
            faces["E"] = (f"kh{n}.{i}", 2)
        tiles.append(_tile(f"k{n}.{i}", label="cap", **faces))
    for j in range(4):
        faces = {"E": (f"ah{n}.{j}", 2)}
        if j < 3:
            faces["W"] = (f"ah{n}.{j + 1}", 2)
        else:
            faces["S"] = (f"d{n}", 2)
        tiles.append(_tile(f"a{n}.{j}", label="arm", **faces))
    tiles.append(_tile(f"d{n}", label="drop", N=(f"d{n}", 2), S=(f"d{n}", 2)))
    return tiles


def gen_blocking_counters(iterations: int) -> TileSystem:
    """A directed temperature-2 system of ``iterations`` walled-off counters.

    A planter row grows east from the seed; position-specific north glues
    seed each counter's first row. Every counter climbs serpentine rows
    labelled with the binary count, caps, hooks an arm four tiles west, and
    drops a one-tile-type column whose identical north and south glues let it
    descend until the planter blocks it one row above. A single red tile type
    attaches cooperatively between each counter's west wall and the planter.
    """
    layouts = blocking_counter_layout(iterations)
    planter_end = layouts[-1].base_x + layouts[-1].width - 1
    north_glue: dict[int, tuple[str, int]] = {}
    for lay in layouts:
        for i in range(lay.width):
            north_glue[lay.base_x + i] = (f"cs{lay.n}.{i}", 2)
        north_glue[lay.red_cell[0]] = ("rs", 1)
    tiles = [_tile("seed", E=("p1", 2))]
    for x in range(1, planter_end + 1):
        faces = {"W": (f"p{x}", 2)}
        if x < planter_end:
            faces["E"] = (f"p{x + 1}", 2)
        if x in north_glue:
            faces["N"] = north_glue[x]
        tiles.append(_tile(f"pl{x}", label="planter", **faces))
    for lay in layouts:
        tiles.extend(_counter_tiles(lay))
    tiles.append(_tile("red", S=("rs", 1), E=("rw", 1)))
    return TileSystem(
        TileSet(2, tuple(tiles)), Assembly(2, {(0, 0): "seed"}), 2, ATAM
    )


def _counter_steps(layout: CounterLayout, drops: int) -> list[Placement]:
    n, x0, w = layout.n, layout.base_x, layout.width

    def connector(row: int) -> int:
        return w - 1 if row % 2 == 0 else 0

    steps = []
    for i in range(w):
        steps.append(Placement((x0 + i, 1), f"c{n}.1.{i}"))
    steps.append(Placement(layout.red_cell, "red"))
    def sweep(conn: int) -> list[int]:
        # Start at the connector column and fan outward so every placement
        # lands next to an existing tile.
        return [conn] + list(range(conn - 1, -1, -1)) + list(range(conn + 1, w))

    for j in range(2, n + 1):
        for i in sweep(connector(j)):
            steps.append(Placement((x0 + i, j), f"c{n}.{j}.{i}"))
    for i in sweep(connector(n + 1)):
        steps.append(Placement((x0 + i, n + 1), f"k{n}.{i}"))
    for j in range(4):
        steps.append(Placement((x0 - 1 - j, n + 1), f"a{n}.{j}"))
    for y in range(n, n - drops, -1):
        steps.append(Placement((layout.crash_column, y), f"d{n}"))
    return steps


def blocking_counters_script(
    iterations: int, target_drops: int | None = None
) -> AssemblyTrace:
    """A deterministic growth script for the blocking-counters system.

    Grows the full planter, then each counter bottom-up. When
    ``target_drops`` is given, the final counter's drop column is cut to that
    many tiles instead of descending all the way to the crash.
    """
    system = gen_blocking_counters(iterations)
    layouts = blocking_counter_layout(iterations)
    planter_end = layouts[-1].base_x + layouts[-1].width - 1
    steps = [Placement((x, 0), f"pl{x}") for x in range(1, planter_end + 1)]
    for idx, lay in enumerate(layouts):
        drops = lay.n
        if target_drops is not None and idx == len(layouts) - 1:
            drops = target_drops
        steps.extend(_counter_steps(lay, drops))
    return AssemblyTrace(system, steps)


def scenario_pump_arm(iterations: int, prefix_drops: int = 3) -> ScenarioResult:
    """Pump a partially grown drop column until it crashes into the planter.

    Grows everything except the final counter's drop column, which is cut to
    ``prefix_drops`` tiles. A five-row single-column window template over the
    column tip and its one-row translate must then carry identical movies;
    pumping that pair until blocked must reproduce exactly the crash row that
    direct simulation reaches. Raises :class:`NoMatchingWindow` when the
    prefix is too short for any pair to match.
    """
    trace = blocking_counters_script(iterations, target_drops=prefix_drops)
    system = trace.system
    lay = blocking_counter_layout(iterations)[-1]
    n, col = lay.n, lay.crash_column
    template = Window.around_box((col, n - 4), (col, n))
    found = find_matching_window_pair(trace, template, [(0, -1)])
    if found is None:
        raise NoMatchingWindow(
            f"no matching window pair over the {prefix_drops}-tile drop prefix"
        )
    w1, w2, offset = found
    pumped = pump(trace, w1, w2, offset, until_blocked=True)

    drop_id = f"d{n}"
    direct = trace.result()
    while True:
        options = [p for p in frontier(system, direct) if p.tile == drop_id]
        if not options:
            break
        direct = attach(system, direct, options[0])

    def crash_row(assembly: Assembly) -> int:
        return min(
            y for (x, y), t in assembly.placements.items() if x == col and t == drop_id
        )

    pumped_asm = pumped.result()
    replayed = run_trace(pumped.system, pumped.steps)
    assertions = {
        "window_pair_at_consecutive_rows": offset == (0, -1),
        "pumped_trace_replays": replayed == pumped_asm,
        "pumped_crash_equals_direct": crash_row(pumped_asm) == crash_row(direct),
        "crash_lands_one_above_planter": crash_row(pumped_asm) == 1,
    }
    checkpoints = {
        "prefix": trace.result(),
        "pumped": pumped_asm,
        "direct": direct,
    }
    return ScenarioResult(pumped, checkpoints, assertions)


# --------------------------------------------------------------------------
# rectangle arms
# --------------------------------------------------------------------------


def gen_rectangle_arms() -> TileSystem:
    """A diffusion-restricted rectangle whose sealed interior freezes its arms.

    All glues are strength 1 at temperature 1. The south, east, and north
    walls each repeat a single tile type; at every wall position the matching
    corner tile competes with the repeating tile, so wall lengths are chosen
    nondeterministically. The west wall descends from wherever its corner
    lands, cycling four tile types; every fourth one spawns an eastward arm.
    When the west wall meets the south wall or seed, the interior is sealed
    and under the diffusion restriction no arm inside can grow further.
    """
    tiles = [
        _tile("seed", E=("s", 1)),
        _tile("s", W=("s", 1), E=("s", 1)),
        _tile("ce", W=("s", 1), N=("e", 1)),
        _tile("e", S=("e", 1), N=("e", 1)),
        _tile("cn", S=("e", 1), W=("n", 1)),
        _tile("n", E=("n", 1), W=("n", 1)),
        _tile("cw", E=("n", 1), S=("w0", 1)),
        _tile("w0", N=("w0", 1), S=("w1", 1)),
        _tile("w1", N=("w1", 1), S=("w2", 1)),
        _tile("w2", N=("w2", 1), S=("w3", 1)),
        _tile("w3", N=("w3", 1), S=("w0", 1), E=("a", 1)),
        _tile("a", W=("a", 1), E=("a", 1)),
    ]
    return TileSystem(
        TileSet(2, tuple(tiles)), Assembly(2, {(0, 0): "seed"}), 1, PATAM
    )


def rectangle_script(
    east_length: int, height: int, arm_lengths: Mapping[int, int]
) -> AssemblyTrace:
    """One deterministic framing of the rectangle-arms system.

    Builds the south wall out to ``east_length``, climbs to ``height``,
    returns along the north wall, and descends the west wall at x=0, growing
    each spawned arm (keyed by its row) to the length requested before the
    wall continues; the final wall tile at y=1 seals the interior.
    """
    steps = [Placement((x, 0), "s") for x in range(1, east_length)]
    steps.append(Placement((east_length, 0), "ce"))
    steps.extend(Placement((east_length, y), "e") for y in range(1, height))
    steps.append(Placement((east_length, height), "cn"))
    steps.extend(Placement((x, height), "n") for x in range(east_length - 1, 0, -1))
    steps.append(Placement((0, height), "cw"))
    for y in range(height - 1, 0, -1):
        kind = f"w{(height - 1 - y) % 4}"
        steps.append(Placement((0, y), kind))
        if kind == "w3":
            for x in range(1, arm_lengths.get(y, 0) + 1):
                steps.append(Placement((x, y), "a"))
    return AssemblyTrace(gen_rectangle_arms(), steps)


def scenario_seal_rectangle(east_length: int = 8, height: int = 12) -> ScenarioResult:
    """Seal the rectangle with one arm still short and watch the variants split.

    The bottom arm is grown all the way to the east wall, the upper arms to
    two tiles, and then the west wall closes into the seed. Under the
    diffusion restriction the sealed assembly is terminal; replaying the same
    script without the restriction leaves the short arms extendable, and
    appending such an interior extension to the restricted trace is rejected
    at exactly the appended index.
    """
    if height % 4 != 0 or height < 12:
        raise ValueError("height must be a multiple of 4, at least 12")
    if east_length < 5:
        raise ValueError("east_length must be at least 5")
    arm_rows = [y for y in range(height - 1, 0, -1) if (height - 1 - y) % 4 == 3]
    bottom = min(arm_rows)
    arm_lengths = {y: 2 for y in arm_rows}
    arm_lengths[bottom] = east_length - 1
    trace = rectangle_script(east_length, height, arm_lengths)
    system = trace.system
    sealed = trace.result()

    interior = lambda p: 0 < p[0] < east_length and 0 < p[1] < height
    restricted_frontier = frontier(system, sealed)
    unrestricted = system.with_variant(ATAM)
    replay = run_trace(unrestricted, trace.steps)
    open_frontier = frontier(unrestricted, replay)

    probe_row = max(y for y in arm_rows if y != bottom)
    probe = Placement((3, probe_row), "a")
    rejected_at_end = False
    try:
        run_trace(system, trace.steps + (probe,))
    except InvalidStep as err:
        rejected_at_end = err.index == len(trace.steps) and isinstance(
            err.cause, ConstrainedLocation
        )

    assertions = {
        "restricted_interior_frontier_empty": not any(
            interior(p.location) for p in restricted_frontier
        ),
        "restricted_assembly_terminal": not restricted_frontier,
        "unrestricted_interior_frontier_nonempty": any(
            interior(p.location) for p in open_frontier
        ),
        "interior_step_rejected_at_exact_index": rejected_at_end,
    }
    checkpoints = {"sealed": sealed, "unrestricted_replay": replay}
    return ScenarioResult(trace, checkpoints, assertions)


# --------------------------------------------------------------------------
# chambers
# --------------------------------------------------------------------------

_OUTER_X = range(0, 9)
_INNER_X = range(14, 23)
_TUNNEL_X = range(9, 14)
_CHAMBER_Y = range(0, 9)
OUTER_PILLAR_BASE = (4, 4)
INNER_PILLAR_BASE = (18, 4)
_TUNNEL_RING = tuple(
    (y, z)
    for y in (3, 4, 5)
    for z in (1, 2, 3)
    if (y, z) != (4, 2)
)
_WALL_OPENINGS = ((8, 4, 2), (14, 4, 2))


@dataclass(frozen=True)
class ChambersLayout:
    """Cell groups of the two-chamber shell for a given wall height."""

    height: int
    outer_base: frozenset
    inner_base: frozenset
    walls: frozenset
    outer_ceiling: frozenset
    inner_ceiling: frozenset
    tunnel: frozenset

    @property
    def ceiling_hole(self) -> Point:
        return (*OUTER_PILLAR_BASE, self.height + 1)

    @property
    def shell(self) -> frozenset:
        return (
            self.outer_base
            | self.inner_base
            | self.walls
            | self.outer_ceiling
            | self.inner_ceiling
            | self.tunnel
        )


def chambers_layout(height: int) -> ChambersLayout:
    if height < 3:
        raise ValueError("chamber wall height must be at least 3")
    outer_base = frozenset((x, y, 0) for x in _OUTER_X for y in _CHAMBER_Y)
    inner_base = frozenset((x, y, 0) for x in _INNER_X for y in _CHAMBER_Y)
    walls = set()
    for xs in (_OUTER_X, _INNER_X):
        x_lo, x_hi = min(xs), max(xs)
        for x in xs:
            for y in _CHAMBER_Y:
                if x in (x_lo, x_hi) or y in (0, 8):
                    for z in range(1, height + 1):
                        walls.add((x, y, z))
    walls -= set(_WALL_OPENINGS)
    top = height + 1
    outer_ceiling = frozenset(
        (x, y, top) for x in _OUTER_X for y in _CHAMBER_Y
    ) - {(*OUTER_PILLAR_BASE, top)}
    inner_ceiling = frozenset((x, y, top) for x in _INNER_X for y in _CHAMBER_Y)
    tunnel = frozenset((x, y, z) for x in _TUNNEL_X for (y, z) in _TUNNEL_RING)
    return ChambersLayout(
        height,
        outer_base,
        inner_base,
        frozenset(walls),
        outer_ceiling,
        inner_ceiling,
        tunnel,
    )


def _cell_tile_id(cell: Point) -> str:
    return "t{}.{}.{}".format(*cell)


def gen_chambers(height: int) -> TileSystem:
    """Two hollow chambers joined by an elevated tunnel, one pillar in each.

    Every shell cell gets its own tile type, glued strength-1 to each shell
    neighbour, so the shell grows breadth-first from the seed corner into a
    unique shape: 9-by-9 chamber bases five columns apart, hollow walls of
    the given height, ceilings with a single hole over the outer pillar, and
    a tunnel of hollow 3-by-3 rings linking wall openings at (8,4,2) and
    (14,4,2). The pillars repeat one tile type each; the outer one can climb
    through the ceiling hole and beyond, and the moment it fills the hole the
    whole interior volume is sealed off.
    """
    layout = chambers_layout(height)
    shell = layout.shell
    dirs = directions(3)
    tiles = []
    for cell in sorted(shell):
        glues = {}
        for d in dirs:
            nbr = add(cell, d)
            if nbr in shell:
                lo, hi = sorted((cell, nbr))
                glues[d] = Glue("g{}.{}.{}|{}.{}.{}".format(*lo, *hi), 1)
        if cell == (*OUTER_PILLAR_BASE, 0):
            glues[(0, 0, 1)] = Glue("po", 1)
        if cell == (*INNER_PILLAR_BASE, 0):
            glues[(0, 0, 1)] = Glue("pi", 1)
        tiles.append(TileType(_cell_tile_id(cell), "shell", glues))
    tiles.append(
        TileType("po", "pillar", {(0, 0, 1): Glue("po", 1), (0, 0, -1): Glue("po", 1)})
    )
    tiles.append(
        TileType("pi", "pillar", {(0, 0, 1): Glue("pi", 1), (0, 0, -1): Glue("pi", 1)})
    )
    seed_cell = (0, 0, 0)
    return TileSystem(
        TileSet(3, tuple(tiles)),
        Assembly(3, {seed_cell: _cell_tile_id(seed_cell)}),
        1,
        SATAM,
    )


def _shell_order(layout: ChambersLayout) -> list[Point]:
    """Deterministic breadth-first order over the shell from the seed corner."""
    shell = layout.shell
    seed = (0, 0, 0)
    order = []
    seen = {seed}
    layer = [seed]
    dirs = directions(3)
    while layer:
        nxt = set()
        for cell in layer:
            for d in dirs:
                nbr = add(cell, d)
                if nbr in shell and nbr not in seen:
                    nxt.add(nbr)
        layer = sorted(nxt)
        seen.update(layer)
        order.extend(layer)
    return order


def chambers_script(
    height: int, inner_height: int = 0, outer_height: int = 0
) -> AssemblyTrace:
    """Grow the full shell, then the pillars to the requested heights.

    ``outer_height`` may reach ``height + 1`` (filling the ceiling hole) and
    beyond; the inner pillar is capped by its ceiling at ``height``.
    """
    system = gen_chambers(height)
    layout = chambers_layout(height)
    steps = [Placement(cell, _cell_tile_id(cell)) for cell in _shell_order(layout)]
    for z in range(1, inner_height + 1):
        steps.append(Placement((*INNER_PILLAR_BASE, z), "pi"))
    for z in range(1, outer_height + 1):
        steps.append(Placement((*OUTER_PILLAR_BASE, z), "po"))
    return AssemblyTrace(system, steps)


def scenario_plug_chambers(height: int = 6, inner_height: int = 3) -> ScenarioResult:
    """Plug the ceiling hole and watch the inner pillar freeze.

    Grows the shell, the inner pillar to ``inner_height``, and the outer
    pillar up through the ceiling hole. The interior volume seals the moment
    the outer pillar fills the last cell below the hole, since the pillar
    itself blocks the only diffusion channel; the pre-plug checkpoint is
    taken one step earlier. Before the plug, the inner pillar is extendable
    under both 3D variants; after it, the sealed interior makes the inner
    pillar's next cell unreachable under the diffusion restriction while the
    unrestricted variant still allows it.
    """
    if height < 4:
        raise ValueError("plug scenario needs wall height at least 4")
    if not 1 <= inner_height < height:
        raise ValueError("inner pillar must stop strictly below its ceiling")
    trace = chambers_script(height, inner_height=inner_height, outer_height=height + 1)
    system = trace.system
    plugged = trace.result()
    pre_plug = run_trace(system, trace.steps[:-2])
    next_inner = Placement((*INNER_PILLAR_BASE, inner_height + 1), "pi")
    unrestricted = system.with_variant(ModelVariant(3, False))

    def inner_extendable(sys, assembly) -> bool:
        return next_inner in frontier(sys, assembly)

    interior_probe = (*INNER_PILLAR_BASE, inner_height + 1)
    assertions = {
        "pre_plug_inner_extendable_restricted": inner_extendable(system, pre_plug),
        "pre_plug_inner_extendable_unrestricted": inner_extendable(unrestricted, pre_plug),
        "plugged_inner_frozen_restricted": not inner_extendable(system, plugged),
        "plugged_inner_extendable_unrestricted": inner_extendable(unrestricted, plugged),
        "plug_seals_interior": interior_probe in constrained_cells(plugged)
        and interior_probe not in constrained_cells(pre_plug),
    }
    checkpoints = {"pre_plug": pre_plug, "plugged": plugged}
    return ScenarioResult(trace, checkpoints, assertions)


# --------------------------------------------------------------------------
# 2D-to-3D embedding
# --------------------------------------------------------------------------


def embed_2d_in_3d(system: TileSystem, variant: ModelVariant | None = None) -> TileSystem:
    """Embed a 2D system in the z=0 plane of a 3D variant.

    Tile ids, labels, glues, the seed, and the temperature carry over; no
    tile gains glues on the up or down faces. The diffusion flag follows the
    source system unless ``variant`` overrides it.
    """
    if system.variant.dimension != 2:
        raise NotTwoDimensional("only 2D systems can be embedded in 3D")
    if variant is None:
        variant = ModelVariant(3, system.variant.diffusion_restricted)
    if variant.dimension != 3:
        raise ValueError("embedding target must be three-dimensional")
    tiles = tuple(
        TileType(
            t.id,
            t.label,
            {(d[0], d[1], 0): g for d, g in t.glues.items()},
        )
        for t in system.tile_set
    )
    seed = Assembly(
        3, {(x, y, 0): tid for (x, y), tid in system.seed.placements.items()}
    )
    return TileSystem(TileSet(3, tiles), seed, system.temperature, variant)

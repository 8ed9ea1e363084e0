"""Growth dynamics: frontiers, attachment, traces, and bounded exploration.

Growth starts from the seed and adds one tile at a time. A tile type may attach
at an empty location when the strengths of its bonds to already-placed neighbors
sum to at least the temperature. Under diffusion-restricted variants a tile may
additionally never attach inside a region the assembly has sealed off from
infinity.

Everything here is deterministic: frontiers are reported in canonical order
(location, then tile id), random runs use an explicitly specified PRNG, and
exploration visits assemblies in canonical order per size level, so results are
independent of the worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

from .core import (
    Assembly,
    Point,
    TileSystem,
    TileType,
    add,
    directions,
    opposite,
)

DEFAULT_MAX_TILES = 5000
DEFAULT_STATE_BUDGET = 10**6


class Placement(NamedTuple):
    """One growth step: a tile type id placed at a location."""

    location: Point
    tile: str


class AttachError(Exception):
    """An attachment is impossible; subclasses say why."""


class OccupiedLocation(AttachError):
    def __init__(self, location: Point):
        super().__init__(f"location {location} is already occupied")
        self.location = location


class UnknownTile(AttachError):
    def __init__(self, tile: str):
        super().__init__(f"unknown tile type {tile!r}")
        self.tile = tile


class InsufficientStrength(AttachError):
    def __init__(self, location: Point, strength: int, temperature: int):
        super().__init__(
            f"binding strength {strength} at {location} is below temperature {temperature}"
        )
        self.location = location
        self.strength = strength
        self.temperature = temperature


class ConstrainedLocation(AttachError):
    def __init__(self, location: Point):
        super().__init__(f"location {location} is sealed off from infinity")
        self.location = location


class InvalidStep(Exception):
    """A trace step failed to attach; carries the step index and the cause."""

    def __init__(self, index: int, cause: AttachError):
        super().__init__(f"step {index}: {cause}")
        self.index = index
        self.cause = cause


class StateBudgetExceeded(Exception):
    """Exploration met more distinct assemblies than the state budget allows."""

    def __init__(self, budget: int):
        super().__init__(f"exploration exceeded the state budget of {budget} assemblies")
        self.budget = budget


def constrained_cells(assembly: Assembly) -> frozenset[Point]:
    """Empty cells enclosed by the assembly (no lattice path to infinity).

    Computed by flood fill over the bounding box inflated by one cell: every
    empty component touching the inflated boundary reaches infinity, the rest
    are constrained. Memoized per assembly.
    """
    cached = assembly._cache.get("constrained")
    if cached is not None:
        return cached
    if len(assembly) == 0:
        result: frozenset[Point] = frozenset()
        assembly._cache["constrained"] = result
        return result
    lo, hi = assembly.bounding_box()
    lo = tuple(c - 1 for c in lo)
    hi = tuple(c + 1 for c in hi)
    dim = assembly.dimension
    dirs = directions(dim)
    occupied = assembly.placements
    inside_box = lambda p: all(lo[i] <= p[i] <= hi[i] for i in range(dim))
    # The inflated boundary shell is entirely empty and connected, so one
    # corner reaches every outside-connected empty cell in the box.
    start = lo
    reached = {start}
    stack = [start]
    while stack:
        p = stack.pop()
        for d in dirs:
            q = add(p, d)
            if q in reached or not inside_box(q) or q in occupied:
                continue
            reached.add(q)
            stack.append(q)

    constrained = []
    if dim == 2:
        cells = ((x, y) for x in range(lo[0] + 1, hi[0]) for y in range(lo[1] + 1, hi[1]))
    else:
        cells = (
            (x, y, z)
            for x in range(lo[0] + 1, hi[0])
            for y in range(lo[1] + 1, hi[1])
            for z in range(lo[2] + 1, hi[2])
        )
    for c in cells:
        if c not in occupied and c not in reached:
            constrained.append(c)
    result = frozenset(constrained)
    assembly._cache["constrained"] = result
    return result


def _location_escapes(assembly: Assembly, location: Point) -> bool:
    """Whether one empty location has a lattice path to infinity.

    Semantically ``location not in constrained_cells(assembly)``, but flood
    fills outward from the location with an early exit at the inflated
    bounding box, which is much cheaper for the common case of a location
    near open space.
    """
    cached = assembly._cache.get("constrained")
    if cached is not None:
        return location not in cached
    if len(assembly) == 0:
        return True
    lo, hi = assembly.bounding_box()
    lo = tuple(c - 1 for c in lo)
    hi = tuple(c + 1 for c in hi)
    dim = assembly.dimension
    on_shell = lambda p: any(p[i] <= lo[i] or p[i] >= hi[i] for i in range(dim))
    # Every cell of the inflated boundary shell is empty and connected to
    # infinity, so touching the shell means escaping.
    if on_shell(location):
        return True
    dirs = directions(dim)
    occupied = assembly.placements
    seen = {location}
    stack = [location]
    while stack:
        p = stack.pop()
        for d in dirs:
            q = add(p, d)
            if q in seen or q in occupied:
                continue
            if on_shell(q):
                return True
            seen.add(q)
            stack.append(q)
    return False


def attachment_strength(
    system: TileSystem, assembly: Assembly, location: Point, tile: TileType
) -> int:
    """Total bond strength the tile would form at the location."""
    total = 0
    for d in directions(system.variant.dimension):
        nbr_id = assembly.get(add(location, d))
        if nbr_id is None:
            continue
        mine = tile.glue(d)
        theirs = system.tile_set.tile(nbr_id).glue(opposite(d))
        if mine == theirs and mine.strength > 0:
            total += mine.strength
    return total


def attach(system: TileSystem, assembly: Assembly, placement: Placement) -> Assembly:
    """Perform one attachment, or raise an :class:`AttachError`.

    Checks in order: the tile type exists, the location is empty, the bond
    strength reaches the temperature, and (restricted variants only) the
    location is not sealed off. So a sealed location with insufficient strength
    reports InsufficientStrength.
    """
    if placement.tile not in system.tile_set:
        raise UnknownTile(placement.tile)
    location = tuple(placement.location)
    if location in assembly:
        raise OccupiedLocation(location)
    tile = system.tile_set.tile(placement.tile)
    strength = attachment_strength(system, assembly, location, tile)
    if strength < system.temperature:
        raise InsufficientStrength(location, strength, system.temperature)
    if system.variant.diffusion_restricted and not _location_escapes(assembly, location):
        raise ConstrainedLocation(location)
    return assembly.with_tile(location, placement.tile)


def frontier(system: TileSystem, assembly: Assembly) -> tuple[Placement, ...]:
    """All legal attachments, in canonical order (location, then tile id)."""
    tau = system.temperature
    dim = system.variant.dimension
    dirs = directions(dim)
    blocked = (
        constrained_cells(assembly) if system.variant.diffusion_restricted else frozenset()
    )
    candidates: set[Point] = set()
    for p in assembly.placements:
        for d in dirs:
            q = add(p, d)
            if q not in assembly:
                candidates.add(q)
    out: list[Placement] = []
    if tau <= 0:
        for loc in sorted(candidates):
            if loc in blocked:
                continue
            for tile in system.tile_set.tiles:
                if attachment_strength(system, assembly, loc, tile) >= tau:
                    out.append(Placement(loc, tile.id))
        out.sort(key=lambda pl: (pl.location, pl.tile))
        return tuple(out)
    # Positive temperature: a viable tile must match at least one neighbouring
    # glue, so only tiles indexed under some presented (face, glue) pair can
    # possibly bind. This keeps the scan proportional to the surface, not to
    # the full tile-set size.
    tile_set = system.tile_set
    for loc in sorted(candidates):
        if loc in blocked:
            continue
        tried: set[str] = set()
        for d in dirs:
            nbr_id = assembly.get(add(loc, d))
            if nbr_id is None:
                continue
            presented = tile_set.tile(nbr_id).glue(opposite(d))
            if presented.strength <= 0:
                continue
            for tid in tile_set.tiles_matching(d, presented):
                if tid in tried:
                    continue
                tried.add(tid)
                if attachment_strength(system, assembly, loc, tile_set.tile(tid)) >= tau:
                    out.append(Placement(loc, tid))
    out.sort(key=lambda pl: (pl.location, pl.tile))
    return tuple(out)


class AssemblyTrace:
    """A replayable growth history: the system plus an ordered step list."""

    __slots__ = ("system", "steps", "_result")

    def __init__(self, system: TileSystem, steps: Iterable[Placement]):
        self.system = system
        self.steps: tuple[Placement, ...] = tuple(
            Placement(tuple(s[0]), s[1]) for s in steps
        )
        self._result: Assembly | None = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AssemblyTrace):
            return NotImplemented
        return self.system == other.system and self.steps == other.steps

    def __hash__(self) -> int:
        return hash((id(self.system), self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def __repr__(self) -> str:
        return f"AssemblyTrace(steps={len(self.steps)})"

    def result(self) -> Assembly:
        """The assembly after every step; validates the whole trace once."""
        if self._result is None:
            self._result = run_trace(self.system, self.steps)
        return self._result

    def prefix(self, length: int) -> AssemblyTrace:
        return AssemblyTrace(self.system, self.steps[:length])

    def extended(self, steps: Iterable[Placement]) -> AssemblyTrace:
        return AssemblyTrace(self.system, self.steps + tuple(steps))


def run_trace(
    system: TileSystem, steps: Sequence[Placement], start: Assembly | None = None
) -> Assembly:
    """Replay steps from the seed (or ``start``), raising InvalidStep on failure."""
    assembly = system.seed if start is None else start
    for i, step in enumerate(steps):
        try:
            assembly = attach(system, assembly, Placement(tuple(step[0]), step[1]))
        except AttachError as err:
            raise InvalidStep(i, err) from err
    return assembly


class SplitMix64:
    """splitmix64 PRNG.

    The update is ``state = (state + 0x9E3779B97F4A7C15) mod 2^64`` followed by
    the finalizer ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
    z *= 0x94D049BB133111EB; z ^= z >> 31`` (all mod 2^64). Chosen because the
    whole generator fits in a docstring, so runs are reproducible from the seed
    alone in any implementation.
    """

    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform-enough index in [0, bound): next_u64() mod bound."""
        return self.next_u64() % bound


def random_run(system: TileSystem, max_steps: int, seed: int) -> AssemblyTrace:
    """Grow by uniformly random frontier picks from a splitmix64 stream.

    Stops early when the frontier empties. Identical (system, max_steps, seed)
    always yields the identical trace.
    """
    rng = SplitMix64(seed)
    assembly = system.seed
    steps: list[Placement] = []
    for _ in range(max_steps):
        options = frontier(system, assembly)
        if not options:
            break
        pick = options[rng.below(len(options))]
        assembly = assembly.with_tile(pick.location, pick.tile)
        steps.append(pick)
    trace = AssemblyTrace(system, steps)
    trace._result = assembly
    return trace


@dataclass(frozen=True)
class ExplorationResult:
    """Outcome of bounded breadth-first exploration of the producible set."""

    producibles: tuple[Assembly, ...]
    terminals: tuple[Assembly, ...]
    truncated: bool
    states_explored: int


@dataclass(frozen=True)
class ExplorationGraph:
    """Producible assemblies plus the single-attachment edges between them."""

    nodes: tuple[Assembly, ...]
    edges: tuple[tuple[int, int, Placement], ...]
    terminals: tuple[int, ...]
    truncated: bool

    def index_of(self, assembly: Assembly) -> int | None:
        lookup = getattr(self, "_lookup", None)
        if lookup is None:
            lookup = {a: i for i, a in enumerate(self.nodes)}
            object.__setattr__(self, "_lookup", lookup)
        return lookup.get(assembly)


def _level_frontiers(
    system: TileSystem, level: Sequence[Assembly], workers: int
) -> list[tuple[Placement, ...]]:
    if workers <= 1 or len(level) < 4:
        return [frontier(system, a) for a in level]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda a: frontier(system, a), level))


def explore_graph(
    system: TileSystem,
    max_tiles: int = DEFAULT_MAX_TILES,
    state_budget: int = DEFAULT_STATE_BUDGET,
    workers: int = 1,
) -> ExplorationGraph:
    """Bounded BFS over producibles, by size level, recording attachment edges.

    Assemblies are deduplicated by canonical placement order (no translation
    quotienting; the seed pins coordinates). Levels are processed in canonical
    order so the node numbering is deterministic for any worker count. States
    beyond ``max_tiles`` tiles are not expanded and set the truncated flag;
    exceeding ``state_budget`` distinct states raises StateBudgetExceeded.
    """
    seen: dict[tuple, int] = {}
    nodes: list[Assembly] = []
    edges: list[tuple[int, int, Placement]] = []
    terminals: list[int] = []
    truncated = False

    seed = system.seed
    seen[seed.canonical()] = 0
    nodes.append(seed)
    level = [0]
    while level:
        assemblies = [nodes[i] for i in level]
        fronts = _level_frontiers(system, assemblies, workers)
        next_level: list[int] = []
        for idx, options in zip(level, fronts):
            if not options:
                terminals.append(idx)
                continue
            if len(nodes[idx]) >= max_tiles:
                truncated = True
                continue
            for placement in options:
                child = nodes[idx].with_tile(placement.location, placement.tile)
                key = child.canonical()
                child_idx = seen.get(key)
                if child_idx is None:
                    child_idx = len(nodes)
                    if child_idx >= state_budget:
                        raise StateBudgetExceeded(state_budget)
                    seen[key] = child_idx
                    nodes.append(child)
                    next_level.append(child_idx)
                edges.append((idx, child_idx, placement))
        level = next_level
    return ExplorationGraph(
        tuple(nodes), tuple(edges), tuple(terminals), truncated
    )


def explore_producibles(
    system: TileSystem,
    max_tiles: int = DEFAULT_MAX_TILES,
    state_budget: int = DEFAULT_STATE_BUDGET,
    workers: int = 1,
) -> ExplorationResult:
    """All producible assemblies within the bound; see :func:`explore_graph`."""
    graph = explore_graph(system, max_tiles, state_budget, workers)
    producibles = tuple(sorted(graph.nodes, key=lambda a: (len(a), a.canonical())))
    terminals = tuple(
        sorted((graph.nodes[i] for i in graph.terminals), key=lambda a: (len(a), a.canonical()))
    )
    return ExplorationResult(producibles, terminals, graph.truncated, len(graph.nodes))


@dataclass(frozen=True)
class DirectednessVerdict:
    """directed | undirected | unknown, with a witness pair when undirected.

    The witness holds two distinct producible assemblies that cannot share a
    terminal: either two distinct terminals, or two equal-domain producibles
    differing at a point (greedily completed to terminals when the bound
    allows).
    """

    status: str
    witness: tuple[Assembly, Assembly] | None = None
    truncated: bool = False


def _greedy_complete(system: TileSystem, assembly: Assembly, max_tiles: int) -> Assembly | None:
    while len(assembly) < max_tiles:
        options = frontier(system, assembly)
        if not options:
            return assembly
        assembly = assembly.with_tile(options[0].location, options[0].tile)
    return None


def check_directed(
    system: TileSystem,
    max_tiles: int = DEFAULT_MAX_TILES,
    state_budget: int = DEFAULT_STATE_BUDGET,
    workers: int = 1,
) -> DirectednessVerdict:
    """Decide directedness (unique terminal) within exploration bounds.

    Exits early as undirected when two terminals are found or when two
    producibles share a domain but disagree at a point; any producible pair in
    conflict rules out a common terminal. ``directed`` requires complete
    (untruncated) exploration with exactly one terminal; otherwise unknown.
    """
    seen: dict[tuple, Assembly] = {}
    by_domain: dict[frozenset, Assembly] = {}
    terminals: list[Assembly] = []
    truncated = False

    def undirected(a: Assembly, b: Assembly) -> DirectednessVerdict:
        done_a = _greedy_complete(system, a, max_tiles)
        done_b = _greedy_complete(system, b, max_tiles)
        if done_a is not None and done_b is not None and done_a != done_b:
            return DirectednessVerdict("undirected", (done_a, done_b), truncated)
        return DirectednessVerdict("undirected", (a, b), truncated)

    seed = system.seed
    seen[seed.canonical()] = seed
    by_domain[seed.domain()] = seed
    level = [seed]
    while level:
        fronts = _level_frontiers(system, level, workers)
        next_level: list[Assembly] = []
        for assembly, options in zip(level, fronts):
            if not options:
                terminals.append(assembly)
                if len(terminals) >= 2:
                    return DirectednessVerdict(
                        "undirected", (terminals[0], terminals[1]), truncated
                    )
                continue
            if len(assembly) >= max_tiles:
                truncated = True
                continue
            for placement in options:
                child = assembly.with_tile(placement.location, placement.tile)
                key = child.canonical()
                if key in seen:
                    continue
                if len(seen) + 1 > state_budget:
                    raise StateBudgetExceeded(state_budget)
                seen[key] = child
                domain = child.domain()
                other = by_domain.get(domain)
                if other is None:
                    by_domain[domain] = child
                elif other.canonical() != key:
                    return undirected(other, child)
                next_level.append(child)
        level = next_level
    if truncated:
        return DirectednessVerdict("unknown", None, True)
    if len(terminals) == 1:
        return DirectednessVerdict("directed", None, False)
    # Unreachable for well-formed systems: untruncated exploration of a finite
    # producible set always ends in at least one terminal.
    return DirectednessVerdict("unknown", None, False)

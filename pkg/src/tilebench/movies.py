"""Window movies: recording growth across a cut, splicing, and pumping.

A window is a finite set of lattice edges that disconnects the grid into two
regions, one finite and one infinite. As a trace grows, every positive-strength
glue a placed tile presents across a window edge is recorded, in order; that
record is the window movie. Two traces whose movies over translated windows
agree can be spliced: the seed-containing half of one assembly continues with
the far half of the other, and the merged step sequence is replayed to verify
every attachment. Iterating the splice with an accumulating translation pumps a
periodic region until geometry blocks it.

Also here: the exact combinatorial bounds used to argue when a matching window
pair must exist, and the derived chamber height bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterable, Sequence

from .core import (
    Assembly,
    Glue,
    ModelVariant,
    Point,
    TileSet,
    TileSystem,
    add,
    binding_graph,
    directions,
    neg,
    scale,
    sub,
)
from .dynamics import (
    AssemblyTrace,
    AttachError,
    InvalidStep,
    Placement,
    attach,
    run_trace,
)


class InvalidTrace(Exception):
    """A trace failed to replay while being used for movie extraction."""

    def __init__(self, cause: InvalidStep):
        super().__init__(f"trace does not replay: {cause}")
        self.cause = cause


class InvalidWindow(ValueError):
    """An edge set that does not split the lattice into exactly two regions."""


class MovieMismatch(Exception):
    """Two window movies that were required to be equal are not.

    ``index`` is the first differing entry position, or -1 for a length
    mismatch.
    """

    def __init__(self, index: int, detail: str = ""):
        super().__init__(f"window movies differ at entry {index}" + (f": {detail}" if detail else ""))
        self.index = index


class SpliceStepInvalid(Exception):
    """A merged splice step failed attach validation at ``index``."""

    def __init__(self, index: int, cause: AttachError, steps: tuple[Placement, ...]):
        super().__init__(f"spliced step {index} invalid: {cause}")
        self.index = index
        self.cause = cause
        self.steps = steps


def _normalize_edge(p: Point, q: Point) -> tuple[Point, Point]:
    return (p, q) if p <= q else (q, p)


@dataclass(frozen=True)
class Window:
    """A cut: a finite set of unordered adjacent lattice-point pairs.

    ``box`` is set when the window is the boundary of an axis-aligned box
    (inclusive corners); such windows translate cheaply and are the template
    shape used by the matching-pair search.
    """

    edges: frozenset[tuple[Point, Point]]
    box: tuple[Point, Point] | None = None

    @staticmethod
    def from_edges(pairs: Iterable[tuple[Point, Point]]) -> Window:
        return Window(frozenset(_normalize_edge(tuple(p), tuple(q)) for p, q in pairs))

    @staticmethod
    def around_box(lo: Point, hi: Point) -> Window:
        """The window cutting every edge between the box and its outside."""
        lo = tuple(lo)
        hi = tuple(hi)
        dim = len(lo)
        if len(hi) != dim or any(l > h for l, h in zip(lo, hi)):
            raise ValueError(f"bad box corners {lo}..{hi}")
        cells: list[Point]
        if dim == 2:
            cells = [(x, y) for x in range(lo[0], hi[0] + 1) for y in range(lo[1], hi[1] + 1)]
        elif dim == 3:
            cells = [
                (x, y, z)
                for x in range(lo[0], hi[0] + 1)
                for y in range(lo[1], hi[1] + 1)
                for z in range(lo[2], hi[2] + 1)
            ]
        else:
            raise ValueError(f"unsupported dimension {dim}")
        inside = set(cells)
        edges = set()
        for p in cells:
            for d in directions(dim):
                q = add(p, d)
                if q not in inside:
                    edges.add(_normalize_edge(p, q))
        return Window(frozenset(edges), (lo, hi))

    @property
    def dimension(self) -> int:
        some = next(iter(self.edges))
        return len(some[0])

    def anchor(self) -> Point:
        """The minimum window vertex; movies normalize translation against it."""
        return min(min(e) for e in self.edges)

    def translate(self, offset: Point) -> Window:
        edges = frozenset(
            (add(p, offset), add(q, offset)) for p, q in self.edges
        )
        box = None
        if self.box is not None:
            box = (add(self.box[0], offset), add(self.box[1], offset))
        return Window(edges, box)

    def sides(self) -> tuple[frozenset[Point], str]:
        """The finite region the window encloses.

        Returns (finite side cells, "ok"). Raises :class:`InvalidWindow` if
        removing the edges does not split the inflated bounding box of the
        window into exactly two components. The infinite side is everything
        else in the lattice.
        """
        cached = getattr(self, "_sides", None)
        if cached is not None:
            return cached
        if not self.edges:
            raise InvalidWindow("empty edge set")
        dim = self.dimension
        pts = [p for e in self.edges for p in e]
        lo = tuple(min(p[i] for p in pts) - 1 for i in range(dim))
        hi = tuple(max(p[i] for p in pts) + 1 for i in range(dim))
        if dim == 2:
            cells = [(x, y) for x in range(lo[0], hi[0] + 1) for y in range(lo[1], hi[1] + 1)]
        else:
            cells = [
                (x, y, z)
                for x in range(lo[0], hi[0] + 1)
                for y in range(lo[1], hi[1] + 1)
                for z in range(lo[2], hi[2] + 1)
            ]
        cut = self.edges
        unseen = set(cells)
        components: list[set[Point]] = []
        dirs = directions(dim)
        in_box = lambda p: all(lo[i] <= p[i] <= hi[i] for i in range(dim))
        while unseen:
            start = unseen.pop()
            comp = {start}
            stack = [start]
            while stack:
                p = stack.pop()
                for d in dirs:
                    q = add(p, d)
                    if q not in unseen or _normalize_edge(p, q) in cut:
                        continue
                    if not in_box(q):
                        continue
                    unseen.discard(q)
                    comp.add(q)
                    stack.append(q)
            components.append(comp)
        if len(components) != 2:
            raise InvalidWindow(
                f"edge set splits its neighborhood into {len(components)} regions, not 2"
            )
        boundary_touching = [
            any(any(p[i] == lo[i] or p[i] == hi[i] for i in range(dim)) for p in comp)
            for comp in components
        ]
        if all(boundary_touching) or not any(boundary_touching):
            raise InvalidWindow("edge set does not enclose a finite region")
        finite = components[0] if boundary_touching[1] else components[1]
        result = (frozenset(finite), "ok")
        object.__setattr__(self, "_sides", result)
        return result

    def encloses(self, point: Point) -> bool:
        """True when the point lies on the finite side of the cut."""
        finite, _ = self.sides()
        return tuple(point) in finite


class MovieEntry:
    """One recorded glue presentation: from a tile cell across the cut."""

    __slots__ = ("from_", "to", "glue")

    def __init__(self, from_: Point, to: Point, glue: Glue):
        self.from_ = tuple(from_)
        self.to = tuple(to)
        self.glue = glue

    def translate(self, offset: Point) -> MovieEntry:
        return MovieEntry(add(self.from_, offset), add(self.to, offset), self.glue)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MovieEntry):
            return NotImplemented
        return (self.from_, self.to, self.glue) == (other.from_, other.to, other.glue)

    def __hash__(self) -> int:
        return hash((self.from_, self.to, self.glue))

    def __repr__(self) -> str:
        return f"MovieEntry({self.from_}->{self.to}, {self.glue.label}/{self.glue.strength})"


@dataclass(frozen=True)
class WindowMovie:
    """The ordered glue presentations of one trace along one window."""

    entries: tuple[MovieEntry, ...]
    anchor: Point

    def __len__(self) -> int:
        return len(self.entries)


def _edge_neighbors(window: Window) -> dict[Point, list[Point]]:
    nbrs: dict[Point, list[Point]] = {}
    for p, q in window.edges:
        nbrs.setdefault(p, []).append(q)
        nbrs.setdefault(q, []).append(p)
    for lst in nbrs.values():
        lst.sort()
    return nbrs


def extract_movie(trace: AssemblyTrace, window: Window) -> WindowMovie:
    """Record every positive-strength glue the trace presents along the cut.

    Glues presented by seed tiles come first, ordered by (position, direction);
    afterwards one block of entries per trace step, each block ordered by
    direction. Entries record presentations regardless of whether the far cell
    is ever occupied.
    """
    try:
        trace.result()
    except InvalidStep as err:
        raise InvalidTrace(err) from err
    nbrs = _edge_neighbors(window)
    tile_set = trace.system.tile_set
    entries: list[MovieEntry] = []

    def present(position: Point, tile_id: str) -> None:
        for q in nbrs.get(position, ()):
            glue = tile_set.tile(tile_id).glue(sub(q, position))
            if glue.strength > 0:
                entries.append(MovieEntry(position, q, glue))

    for position, tile_id in trace.system.seed.canonical():
        present(position, tile_id)
    for step in trace.steps:
        # Neighbor lists are direction-sorted, so a step's entries land in
        # canonical direction order and stay contiguous.
        present(step.location, step.tile)
    return WindowMovie(tuple(entries), window.anchor())


def movies_equal(m1: WindowMovie, m2: WindowMovie, translation: Point) -> bool:
    """True iff shifting every m2 entry by -translation reproduces m1 exactly."""
    return _first_mismatch(m1, m2, translation) is None


def _first_mismatch(m1: WindowMovie, m2: WindowMovie, translation: Point) -> int | None:
    if len(m1.entries) != len(m2.entries):
        return -1
    back = neg(tuple(translation))
    for i, (e1, e2) in enumerate(zip(m1.entries, m2.entries)):
        if e1 != e2.translate(back):
            return i
    return None


def bond_forming_submovie(
    movie: WindowMovie, final_assembly: Assembly, tile_set: TileSet
) -> WindowMovie:
    """Keep only entries whose edge carries a real bond in the final assembly."""
    bonded = set()
    for e in binding_graph(final_assembly, tile_set).edges:
        bonded.add(_normalize_edge(e.a, e.b))
    kept = tuple(
        e for e in movie.entries if _normalize_edge(e.from_, e.to) in bonded
    )
    return WindowMovie(kept, movie.anchor)


def _unrestricted(system: TileSystem) -> TileSystem:
    if not system.variant.diffusion_restricted:
        return system
    return system.with_variant(ModelVariant(system.variant.dimension, False))


def _seed_side(window: Window, seed: Assembly) -> bool:
    """True when the seed lies on the finite side. Seed must be on one side."""
    finite, _ = window.sides()
    flags = {p in finite for p in seed.placements}
    if len(flags) != 1:
        raise ValueError("seed straddles the window")
    return flags.pop()


def splice(
    trace_a: AssemblyTrace,
    trace_b: AssemblyTrace,
    window: Window,
    translation: Point,
    mode: str = "full",
    strict: bool = False,
) -> AssemblyTrace:
    """Merge two traces whose movies over window and window+translation agree.

    The result grows the seed half of A's assembly (relative to ``window``)
    together with the far half of B's assembly (relative to the translated
    window) shifted back by the translation. The merged step order follows the
    shared movie: two cursors walk the traces, and between matched window
    events each side's pending steps are drained in their original order.

    Every merged step is validated by re-attachment; by default validation uses
    unrestricted dynamics even for diffusion-restricted systems, ``strict=True``
    keeps the variant's diffusion rule and reports violations. The returned
    trace carries the validation system.

    Raises MovieMismatch, SpliceStepInvalid, or ValueError for incompatible
    traces or a window that does not leave the seed whole on one side.
    """
    if mode not in ("full", "bond_forming"):
        raise ValueError(f"unknown splice mode {mode!r}")
    sys_a, sys_b = trace_a.system, trace_b.system
    if sys_a.tile_set != sys_b.tile_set or sys_a.temperature != sys_b.temperature:
        raise ValueError("traces use different tile systems")
    if sys_a.seed != sys_b.seed:
        raise ValueError("traces use different seeds")
    translation = tuple(translation)
    window_b = window.translate(translation)

    movie_a = extract_movie(trace_a, window)
    movie_b = extract_movie(trace_b, window_b)
    if mode == "bond_forming":
        movie_a = bond_forming_submovie(movie_a, trace_a.result(), sys_a.tile_set)
        movie_b = bond_forming_submovie(movie_b, trace_b.result(), sys_b.tile_set)
    mismatch = _first_mismatch(movie_a, movie_b, translation)
    if mismatch is not None:
        raise MovieMismatch(mismatch)

    seed = sys_a.seed
    seed_on_finite_a = _seed_side(window, seed)
    seed_on_finite_b = _seed_side(window_b, seed)
    finite_a, _ = window.sides()
    finite_b, _ = window_b.sides()
    on_seed_side_a = lambda p: (p in finite_a) == seed_on_finite_a
    on_seed_side_b = lambda p: (p in finite_b) == seed_on_finite_b

    steps_a = trace_a.steps
    steps_b = trace_b.steps
    seed_domain = seed.domain()
    merged: list[Placement] = []
    emitted_a: set[Point] = set()
    emitted_b: set[Point] = set()
    i = 0
    j = 0
    for k, entry in enumerate(movie_a.entries):
        pa = entry.from_
        if on_seed_side_a(pa):
            if pa in seed_domain or pa in emitted_a:
                continue
            while i < len(steps_a) and steps_a[i].location != pa:
                s = steps_a[i]
                if on_seed_side_a(s.location):
                    merged.append(s)
                    emitted_a.add(s.location)
                i += 1
            if i == len(steps_a):
                raise MovieMismatch(k, "movie event has no matching step in trace A")
            merged.append(steps_a[i])
            emitted_a.add(pa)
            i += 1
        else:
            pb = add(pa, translation)
            if pb in seed_domain or pb in emitted_b:
                continue
            while j < len(steps_b) and steps_b[j].location != pb:
                s = steps_b[j]
                if not on_seed_side_b(s.location):
                    merged.append(Placement(sub(s.location, translation), s.tile))
                    emitted_b.add(s.location)
                j += 1
            if j == len(steps_b):
                raise MovieMismatch(k, "movie event has no matching step in trace B")
            merged.append(Placement(pa, steps_b[j].tile))
            emitted_b.add(pb)
            j += 1
    while i < len(steps_a):
        s = steps_a[i]
        if on_seed_side_a(s.location) and s.location not in emitted_a:
            merged.append(s)
        i += 1
    while j < len(steps_b):
        s = steps_b[j]
        if not on_seed_side_b(s.location) and s.location not in emitted_b:
            merged.append(Placement(sub(s.location, translation), s.tile))
        j += 1

    validation_system = sys_a if strict else _unrestricted(sys_a)
    try:
        run_trace(validation_system, merged)
    except InvalidStep as err:
        raise SpliceStepInvalid(err.index, err.cause, tuple(merged)) from err
    return AssemblyTrace(validation_system, merged)


def find_matching_window_pair(
    trace: AssemblyTrace,
    template: Window,
    translations: Sequence[Point],
    mode: str = "full",
) -> tuple[Window, Window, Point] | None:
    """First pair of template translates with equal movies, or None.

    Candidates are the template itself followed by the template shifted by each
    given translation; ordered pairs are compared in list order and the first
    equal pair wins, so the search is deterministic.
    """
    offsets: list[Point] = [(0,) * template.dimension] + [tuple(t) for t in translations]
    movies: list[WindowMovie] = []
    windows: list[Window] = []
    result_cache = trace.result() if mode == "bond_forming" else None
    for off in offsets:
        w = template.translate(off)
        m = extract_movie(trace, w)
        if mode == "bond_forming":
            m = bond_forming_submovie(m, result_cache, trace.system.tile_set)
        movies.append(m)
        windows.append(w)
    for a in range(len(offsets)):
        for b in range(a + 1, len(offsets)):
            c = sub(offsets[b], offsets[a])
            if movies_equal(movies[a], movies[b], c):
                return (windows[a], windows[b], c)
    return None


def _new_cells_in_order(later: AssemblyTrace, earlier_domain: frozenset[Point]) -> list[Placement]:
    return [s for s in later.steps if s.location not in earlier_domain]


def pump(
    trace: AssemblyTrace,
    w1: Window,
    w2: Window,
    translation: Point,
    repetitions: int | None = None,
    until_blocked: bool = False,
    mode: str = "full",
    strict: bool = False,
    max_iterations: int = 10000,
) -> AssemblyTrace:
    """Repeat the periodic region between two matching windows.

    Iteration k splices the accumulated trace with the original over the window
    shifted by k*translation, extending growth by one period per round. With
    ``repetitions`` the count is fixed and any failure raises. With
    ``until_blocked`` the pump runs until an iteration fails, then replays the
    last successful period's added placements, shifted period by period,
    truncating at the first placement that no longer attaches (blocked by
    existing tiles); the longest valid trace is returned. Blocking on the very
    first iteration raises, since no pumped period exists to replay.
    """
    if (repetitions is None) == (not until_blocked):
        raise ValueError("specify exactly one of repetitions or until_blocked")
    translation = tuple(translation)
    if w2.edges != w1.translate(translation).edges:
        raise ValueError("w2 is not w1 shifted by the translation")
    base_m1 = extract_movie(trace, w1)
    base_m2 = extract_movie(trace, w2)
    if mode == "bond_forming":
        final = trace.result()
        base_m1 = bond_forming_submovie(base_m1, final, trace.system.tile_set)
        base_m2 = bond_forming_submovie(base_m2, final, trace.system.tile_set)
    mismatch = _first_mismatch(base_m1, base_m2, translation)
    if mismatch is not None:
        raise MovieMismatch(mismatch)

    current = trace
    previous: AssemblyTrace | None = None
    k = 0
    while True:
        if repetitions is not None and k >= repetitions:
            return current
        if until_blocked and k >= max_iterations:
            raise RuntimeError(f"pump did not block within {max_iterations} iterations")
        k += 1
        shift = scale(k, translation)
        try:
            nxt = splice(current, trace, w1.translate(shift), neg(shift), mode=mode, strict=strict)
        except (MovieMismatch, SpliceStepInvalid):
            if not until_blocked:
                raise
            if previous is None:
                raise
            return _replay_period(current, previous, translation, strict, max_iterations)
        previous = current
        current = nxt


def _replay_period(
    current: AssemblyTrace,
    previous: AssemblyTrace,
    translation: Point,
    strict: bool,
    max_rounds: int,
) -> AssemblyTrace:
    """Extend by shifted copies of the last period until a step is blocked."""
    delta = _new_cells_in_order(current, previous.result().domain())
    system = current.system if strict else _unrestricted(current.system)
    assembly = current.result()
    steps = list(current.steps)
    j = 0
    while delta:
        j += 1
        if j > max_rounds:
            raise RuntimeError(f"pump replay did not block within {max_rounds} rounds")
        for s in delta:
            shifted = Placement(add(s.location, scale(j, translation)), s.tile)
            try:
                assembly = attach(system, assembly, shifted)
            except AttachError:
                return AssemblyTrace(system, steps)
            steps.append(shifted)
    return AssemblyTrace(system, steps)


@dataclass(frozen=True)
class PumpingBoundInput:
    """Inputs to the matching-window existence bound."""

    dimension: int
    scale: int
    tile_set_size: int


def pumping_bound(inp: PumpingBoundInput) -> int:
    """How far growth can go before two window movies must repeat.

    Exact integers: (3c)!*(n+1)^(3c) in 2D and (9c^2)!*(n+1)^(9c^2) in 3D,
    where c is the window scale and n the tile set size.
    """
    c, n = inp.scale, inp.tile_set_size
    if c <= 0 or n <= 0:
        raise ValueError("scale and tile set size must be positive")
    if inp.dimension == 2:
        k = 3 * c
    elif inp.dimension == 3:
        k = 9 * c * c
    else:
        raise ValueError(f"unsupported dimension {inp.dimension}")
    return factorial(k) * (n + 1) ** k


def chamber_bounds(c: int, pump_bound: int) -> tuple[int, int]:
    """Chamber cross-section bound b = 25c^2 and height h = (p+1)(b+2)+2."""
    if c <= 0:
        raise ValueError("scale must be positive")
    b = 25 * c * c
    h = (pump_bound + 1) * (b + 2) + 2
    return (b, h)

"""Core model for square/cubic tile self-assembly.

Tiles are unit squares (2D) or cubes (3D) with a glue on each face. A glue is a
(label, strength) pair; two abutting tiles bond only when their facing glues are
equal and have positive strength, contributing that strength to the bond. An
assembly is a partial placement of tile types on the integer lattice. An assembly
is tau-stable when every way of splitting it into two non-empty parts cuts bonds
of total strength at least tau.

Four model variants share this core: standard and diffusion-restricted dynamics,
in two or three dimensions. The variant only changes dynamics (see
:mod:`tilebench.dynamics`); the static notions here are shared.

Determinism is part of the contract: direction order is lexicographic on unit
vectors, canonical assembly order is lexicographic on coordinates, and the
min-cut routine breaks ties by vertex order, so equal inputs always produce
byte-identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple

Point = tuple[int, ...]
Direction = tuple[int, ...]

# Unit vectors in lexicographic order; this is the canonical direction order.
DIRECTIONS_2D: tuple[Direction, ...] = ((-1, 0), (0, -1), (0, 1), (1, 0))
DIRECTIONS_3D: tuple[Direction, ...] = (
    (-1, 0, 0),
    (0, -1, 0),
    (0, 0, -1),
    (0, 0, 1),
    (0, 1, 0),
    (1, 0, 0),
)

# Compass names used by file formats and renderers: x east, y north, z up.
_NAME_2D = {(-1, 0): "W", (0, -1): "S", (0, 1): "N", (1, 0): "E"}
_NAME_3D = {
    (-1, 0, 0): "W",
    (0, -1, 0): "S",
    (0, 0, -1): "D",
    (0, 0, 1): "U",
    (0, 1, 0): "N",
    (1, 0, 0): "E",
}
_DIR_2D = {name: vec for vec, name in _NAME_2D.items()}
_DIR_3D = {name: vec for vec, name in _NAME_3D.items()}


def directions(dimension: int) -> tuple[Direction, ...]:
    """All axis directions for the given dimension, in canonical order."""
    if dimension == 2:
        return DIRECTIONS_2D
    if dimension == 3:
        return DIRECTIONS_3D
    raise ValueError(f"unsupported dimension {dimension}")


def direction_name(direction: Direction) -> str:
    """Compass letter (N/E/S/W and U/D in 3D) for a unit direction vector."""
    table = _NAME_2D if len(direction) == 2 else _NAME_3D
    return table[direction]


def named_direction(name: str, dimension: int) -> Direction:
    """Unit direction vector for a compass letter."""
    table = _DIR_2D if dimension == 2 else _DIR_3D
    if name not in table:
        raise ValueError(f"unknown direction {name!r} in dimension {dimension}")
    return table[name]


def opposite(direction: Direction) -> Direction:
    return tuple(-c for c in direction)


def add(p: Point, q: Point) -> Point:
    return tuple(a + b for a, b in zip(p, q))


def sub(p: Point, q: Point) -> Point:
    return tuple(a - b for a, b in zip(p, q))


def neg(p: Point) -> Point:
    return tuple(-a for a in p)


def scale(k: int, p: Point) -> Point:
    return tuple(k * a for a in p)


class Glue(NamedTuple):
    """A glue: bonds only with an identical glue (same label and strength)."""

    label: str
    strength: int


NULL_GLUE = Glue("", 0)


@dataclass(frozen=True)
class TileType:
    """A tile type: an id, a display label, and one glue per face.

    Faces without an entry in ``glues`` carry the null glue. Tile types may not
    be rotated or reflected; each orientation is a distinct type.
    """

    id: str
    label: str = ""
    glues: Mapping[Direction, Glue] = field(default_factory=dict)

    def glue(self, direction: Direction) -> Glue:
        return self.glues.get(direction, NULL_GLUE)


def tile_from_faces(
    tile_id: str, dimension: int = 2, label: str | None = None, **faces: tuple[str, int]
) -> TileType:
    """Build a tile type from compass-letter keywords, e.g. ``N=("a", 1)``."""
    glues = {}
    for name, (glue_label, strength) in faces.items():
        glues[named_direction(name, dimension)] = Glue(glue_label, strength)
    return TileType(tile_id, label if label is not None else tile_id, glues)


@dataclass(frozen=True)
class TileSet:
    """An ordered collection of tile types for a fixed dimension."""

    dimension: int
    tiles: tuple[TileType, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_by_id", {t.id: t for t in self.tiles})
        index: dict[tuple[Direction, Glue], list[str]] = {}
        for t in self.tiles:
            for d, g in t.glues.items():
                if g.strength > 0:
                    index.setdefault((d, g), []).append(t.id)
        object.__setattr__(
            self, "_by_face_glue", {k: tuple(v) for k, v in index.items()}
        )

    def tile(self, tile_id: str) -> TileType:
        return self._by_id[tile_id]  # type: ignore[attr-defined]

    def tiles_matching(self, direction: Direction, glue: Glue) -> tuple[str, ...]:
        """Ids of tiles presenting exactly this positive glue on the given face."""
        return self._by_face_glue.get((direction, glue), ())  # type: ignore[attr-defined]

    def __contains__(self, tile_id: str) -> bool:
        return tile_id in self._by_id  # type: ignore[attr-defined]

    def __iter__(self) -> Iterator[TileType]:
        return iter(self.tiles)


class Assembly:
    """An immutable placement of tile types on lattice points.

    Equality and hashing use the canonical form: placements sorted by
    coordinate. Assemblies are positioned (not translation classes); ``translate``
    produces a moved copy.
    """

    __slots__ = ("dimension", "_placements", "_canonical", "_hash", "_cache")

    def __init__(self, dimension: int, placements: Mapping[Point, str] | Iterable[tuple[Point, str]] = ()):
        self.dimension = dimension
        items = placements.items() if isinstance(placements, Mapping) else placements
        data = {}
        for point, tile_id in items:
            point = tuple(point)
            if len(point) != dimension:
                raise ValueError(f"point {point} has wrong dimension (want {dimension})")
            if point in data and data[point] != tile_id:
                raise ValueError(f"conflicting tiles at {point}")
            data[point] = tile_id
        self._placements: dict[Point, str] = data
        self._canonical: tuple[tuple[Point, str], ...] | None = None
        self._hash: int | None = None
        self._cache: dict = {}

    @property
    def placements(self) -> Mapping[Point, str]:
        return self._placements

    def canonical(self) -> tuple[tuple[Point, str], ...]:
        """Placements sorted by coordinate; the canonical serialization order."""
        if self._canonical is None:
            self._canonical = tuple(sorted(self._placements.items()))
        return self._canonical

    def domain(self) -> frozenset[Point]:
        return frozenset(self._placements)

    def get(self, point: Point) -> str | None:
        return self._placements.get(point)

    def __contains__(self, point: Point) -> bool:
        return point in self._placements

    def __len__(self) -> int:
        return len(self._placements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Assembly):
            return NotImplemented
        return self.dimension == other.dimension and self.canonical() == other.canonical()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dimension, self.canonical()))
        return self._hash

    def __repr__(self) -> str:
        return f"Assembly(dim={self.dimension}, tiles={len(self)})"

    def with_tile(self, point: Point, tile_id: str) -> Assembly:
        if point in self._placements:
            raise ValueError(f"location {point} already occupied")
        new = Assembly.__new__(Assembly)
        new.dimension = self.dimension
        merged = dict(self._placements)
        merged[tuple(point)] = tile_id
        new._placements = merged
        new._canonical = None
        new._hash = None
        new._cache = {}
        return new

    def translate(self, offset: Point) -> Assembly:
        return Assembly(self.dimension, {add(p, offset): t for p, t in self._placements.items()})

    def restrict(self, points: Iterable[Point]) -> Assembly:
        keep = set(points)
        return Assembly(self.dimension, {p: t for p, t in self._placements.items() if p in keep})

    def bounding_box(self) -> tuple[Point, Point]:
        """Inclusive (lower, upper) corner of the occupied region."""
        if not self._placements:
            raise ValueError("empty assembly has no bounding box")
        pts = list(self._placements)
        lo = tuple(min(p[i] for p in pts) for i in range(self.dimension))
        hi = tuple(max(p[i] for p in pts) for i in range(self.dimension))
        return lo, hi

    def is_connected(self) -> bool:
        """True when the occupied cells form one edge-connected component."""
        if len(self._placements) <= 1:
            return True
        dirs = directions(self.dimension)
        start = next(iter(self._placements))
        seen = {start}
        stack = [start]
        while stack:
            p = stack.pop()
            for d in dirs:
                q = add(p, d)
                if q in self._placements and q not in seen:
                    seen.add(q)
                    stack.append(q)
        return len(seen) == len(self._placements)


def shape(assembly: Assembly) -> frozenset[Point]:
    """The set of occupied locations."""
    return assembly.domain()


def is_subassembly(small: Assembly, large: Assembly) -> bool:
    """True when every placement of ``small`` appears identically in ``large``."""
    if small.dimension != large.dimension:
        return False
    get = large.get
    return all(get(p) == t for p, t in small.placements.items())


@dataclass(frozen=True)
class BondEdge:
    """A bond between two adjacent placements, weighted by glue strength."""

    a: Point
    b: Point
    strength: int


@dataclass(frozen=True)
class BindingGraph:
    """The weighted bond graph of an assembly.

    Nodes are occupied points; an edge joins two adjacent points whose facing
    glues are equal with positive strength, weighted by that strength.
    """

    nodes: tuple[Point, ...]
    edges: tuple[BondEdge, ...]

    def adjacency(self) -> dict[Point, dict[Point, int]]:
        adj: dict[Point, dict[Point, int]] = {p: {} for p in self.nodes}
        for e in self.edges:
            adj[e.a][e.b] = e.strength
            adj[e.b][e.a] = e.strength
        return adj


def binding_graph(assembly: Assembly, tile_set: TileSet) -> BindingGraph:
    """Build the bond graph; see :class:`BindingGraph` for the edge rule."""
    nodes = tuple(p for p, _ in assembly.canonical())
    edges = []
    # Only look at positive directions so each adjacent pair is visited once.
    pos_dirs = [d for d in directions(assembly.dimension) if sum(d) > 0]
    for p in nodes:
        tile_p = tile_set.tile(assembly.get(p))  # type: ignore[arg-type]
        for d in pos_dirs:
            q = add(p, d)
            tid_q = assembly.get(q)
            if tid_q is None:
                continue
            glue_p = tile_p.glue(d)
            glue_q = tile_set.tile(tid_q).glue(opposite(d))
            if glue_p == glue_q and glue_p.strength > 0:
                edges.append(BondEdge(p, q, glue_p.strength))
    return BindingGraph(nodes, tuple(edges))


def _stoer_wagner_min_cut(adj: dict[Point, dict[Point, int]]) -> int:
    """Global min cut by maximum-adjacency search, deterministic tie-breaks.

    Vertices are processed in sorted order; ties in the tightest-vertex choice go
    to the smaller merged representative, so repeated runs are identical.
    """
    # Merged groups are identified by their smallest member.
    weights = {v: dict(nbrs) for v, nbrs in adj.items()}
    vertices = sorted(weights)
    best = None
    while len(vertices) > 1:
        # One phase of maximum-adjacency search.
        start = vertices[0]
        in_a = {start}
        w = dict.fromkeys(vertices, 0)
        for nbr, wt in weights[start].items():
            w[nbr] += wt
        order = [start]
        while len(in_a) < len(vertices):
            tight = max(
                (v for v in vertices if v not in in_a),
                key=lambda v: (w[v], [-c for c in v]),
            )
            in_a.add(tight)
            order.append(tight)
            for nbr, wt in weights[tight].items():
                if nbr not in in_a:
                    w[nbr] += wt
        last = order[-1]
        cut_of_phase = sum(weights[last].values())
        if best is None or cut_of_phase < best:
            best = cut_of_phase
        # Merge the last two added vertices, keeping the smaller name.
        second = order[-2]
        keep, gone = (second, last) if second < last else (last, second)
        for nbr, wt in weights[gone].items():
            if nbr == keep:
                continue
            weights[keep][nbr] = weights[keep].get(nbr, 0) + wt
            weights[nbr][keep] = weights[keep][nbr]
            del weights[nbr][gone]
        weights[keep].pop(gone, None)
        del weights[gone]
        vertices = sorted(weights)
    return best if best is not None else 0


def min_cut_strength(assembly: Assembly, tile_set: TileSet) -> int:
    """Total strength of the weakest bond cut splitting the assembly in two.

    Zero for disconnected binding graphs; for single-tile assemblies there is no
    cut and the assembly counts as unconditionally stable, reported here as a
    very large value.
    """
    if len(assembly) <= 1:
        return 1 << 62
    graph = binding_graph(assembly, tile_set)
    adj = graph.adjacency()
    # A vertex with no bonds is a free cut of weight 0.
    if any(not nbrs for nbrs in adj.values()):
        return 0
    seen = set()
    stack = [graph.nodes[0]]
    seen.add(graph.nodes[0])
    while stack:
        p = stack.pop()
        for q in adj[p]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    if len(seen) != len(graph.nodes):
        return 0
    return _stoer_wagner_min_cut(adj)


def is_tau_stable(assembly: Assembly, tile_set: TileSet, tau: int) -> bool:
    """True when every 2-partition of the assembly cuts bonds of weight >= tau."""
    if tau <= 0 or len(assembly) <= 1:
        return True
    return min_cut_strength(assembly, tile_set) >= tau


@dataclass(frozen=True)
class ModelVariant:
    """A dynamics variant: lattice dimension and the diffusion restriction.

    With ``diffusion_restricted`` set, attachments are forbidden at empty cells
    enclosed by the assembly (no path from infinity), modelling tiles that must
    diffuse in from far away.
    """

    dimension: int
    diffusion_restricted: bool

    @property
    def name(self) -> str:
        if self.dimension == 2:
            return "patam" if self.diffusion_restricted else "atam"
        return "satam" if self.diffusion_restricted else "atam3d"


ATAM = ModelVariant(2, False)
PATAM = ModelVariant(2, True)
ATAM3D = ModelVariant(3, False)
SATAM = ModelVariant(3, True)

_VARIANTS = {v.name: v for v in (ATAM, PATAM, ATAM3D, SATAM)}


def variant_by_name(name: str) -> ModelVariant:
    try:
        return _VARIANTS[name]
    except KeyError:
        raise ValueError(f"unknown model variant {name!r}") from None


@dataclass(frozen=True)
class TileSystem:
    """A tile system: tile set, seed assembly, temperature, and variant."""

    tile_set: TileSet
    seed: Assembly
    temperature: int
    variant: ModelVariant

    def with_variant(self, variant: ModelVariant) -> TileSystem:
        return TileSystem(self.tile_set, self.seed, self.temperature, variant)


@dataclass(frozen=True)
class Violation:
    """A single validation finding for a tile system."""

    kind: str
    detail: str


def validate_tile_system(system: TileSystem) -> list[Violation]:
    """Check a tile system's static well-formedness.

    Findings, in reported order: NegativeTemperature, DuplicateTileId,
    UnknownTileInSeed, SeedDisconnected, SeedUnstable. An empty list means the
    system is valid. Stability of the seed is only judged when every seed tile
    is known.
    """
    out: list[Violation] = []
    if system.temperature < 0:
        out.append(Violation("NegativeTemperature", f"temperature {system.temperature} < 0"))
    seen: set[str] = set()
    for tile in system.tile_set.tiles:
        if tile.id in seen:
            out.append(Violation("DuplicateTileId", f"tile id {tile.id!r} repeated"))
        seen.add(tile.id)
    unknown = sorted({t for _, t in system.seed.canonical() if t not in system.tile_set})
    for tile_id in unknown:
        out.append(Violation("UnknownTileInSeed", f"seed uses unknown tile {tile_id!r}"))
    if system.seed.dimension != system.variant.dimension:
        out.append(
            Violation(
                "SeedDisconnected",
                f"seed dimension {system.seed.dimension} != variant dimension {system.variant.dimension}",
            )
        )
        return out
    if not system.seed.is_connected():
        out.append(Violation("SeedDisconnected", "seed is not edge-connected"))
    elif not unknown and len(system.seed) > 0:
        if not is_tau_stable(system.seed, system.tile_set, system.temperature):
            out.append(
                Violation("SeedUnstable", f"seed is not {system.temperature}-stable")
            )
    return out

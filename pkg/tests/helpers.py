"""Small builders shared by the test suite."""

from __future__ import annotations

from tilebench.core import (
    ATAM,
    Assembly,
    Glue,
    ModelVariant,
    TileSet,
    TileSystem,
    TileType,
    named_direction,
)


def make_tile(tile_id: str, dimension: int = 2, label: str | None = None, **faces) -> TileType:
    """Build a tile type from compass keywords, e.g. N=("a", 1), E=("b", 2)."""
    glues = {}
    for name, (glue_label, strength) in faces.items():
        glues[named_direction(name, dimension)] = Glue(glue_label, strength)
    return TileType(tile_id, label if label is not None else tile_id, glues)


def make_system(
    tiles,
    seed_placements,
    temperature: int = 1,
    variant: ModelVariant = ATAM,
) -> TileSystem:
    tile_set = TileSet(variant.dimension, tuple(tiles))
    seed = Assembly(variant.dimension, seed_placements)
    return TileSystem(tile_set, seed, temperature, variant)


def ab_system(variant: ModelVariant = ATAM) -> TileSystem:
    """Seed with one north glue; two tile types compete for the same cell."""
    tiles = [
        make_tile("S", dimension=variant.dimension, N=("a", 1)),
        make_tile("A", dimension=variant.dimension, S=("a", 1)),
        make_tile("B", dimension=variant.dimension, S=("a", 1)),
    ]
    origin = (0,) * variant.dimension
    return make_system(tiles, {origin: "S"}, temperature=1, variant=variant)


def ribbon_system(variant: ModelVariant = ATAM) -> TileSystem:
    """A single tile type repeating eastward forever."""
    dim = variant.dimension
    tiles = [
        make_tile("seed", dimension=dim, E=("r", 1)),
        make_tile("r", dimension=dim, W=("r", 1), E=("r", 1)),
    ]
    return make_system(tiles, {(0,) * dim: "seed"}, temperature=1, variant=variant)


def ring_system(temperature: int = 2, variant: ModelVariant = ATAM) -> TileSystem:
    """An 8-tile ring seed around the empty center (1, 1).

    The tile at (1, 0) also presents a strength-2 glue up into the center and
    one down below the ring, so exactly one interior and one exterior
    attachment are strength-legal for the filler tiles.
    """
    from tilebench.core import Glue, TileType

    ring = [(0, 0), (1, 0), (2, 0), (2, 1), (2, 2), (1, 2), (0, 2), (0, 1)]
    tiles = []
    for i, pos in enumerate(ring):
        nxt = ring[(i + 1) % len(ring)]
        prv = ring[(i - 1) % len(ring)]
        glues = {
            (nxt[0] - pos[0], nxt[1] - pos[1]): Glue(f"r{i}", 2),
            (prv[0] - pos[0], prv[1] - pos[1]): Glue(f"r{(i - 1) % 8}", 2),
        }
        if pos == (1, 0):
            glues[(0, 1)] = Glue("in", 2)
            glues[(0, -1)] = Glue("out", 2)
        tiles.append(TileType(f"t{i}", glues=glues))
    tiles.append(make_tile("fill_in", S=("in", 2)))
    tiles.append(make_tile("fill_out", N=("out", 2)))
    seed = {pos: f"t{i}" for i, pos in enumerate(ring)}
    return make_system(tiles, seed, temperature=temperature, variant=variant)


def square_block_system(temperature: int = 2) -> TileSystem:
    """A 2x2 block of four distinct tiles, all interior glues strength 1."""
    tiles = [
        make_tile("sw", E=("s_bottom", 1), N=("s_left", 1)),
        make_tile("se", W=("s_bottom", 1), N=("s_right", 1)),
        make_tile("nw", E=("s_top", 1), S=("s_left", 1)),
        make_tile("ne", W=("s_top", 1), S=("s_right", 1)),
    ]
    seed = {(0, 0): "sw", (1, 0): "se", (0, 1): "nw", (1, 1): "ne"}
    return make_system(tiles, seed, temperature=temperature)

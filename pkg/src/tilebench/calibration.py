"""Curated simulation-checker fixtures with calibrated per-check bounds.

Two identity fixtures demonstrate that all six checks pass on honest
self-simulations. Five broken fixtures each violate exactly one property:

- ``diagonal-fuzz`` — a designated assembly places stray tiles diagonally
  off the resolved region, violating the fuzz placement rule;
- ``non-monotone-resolver`` — a later attachment re-resolves a block,
  violating representation monotonicity;
- ``missing-terminal-image`` — the resolver can never resolve one branch,
  so a simulator terminal maps to a non-terminal simulated assembly;
- ``extra-production`` — the simulator grows an image the simulated system
  cannot produce;
- ``directedness-breaking`` — a directed simulator claims to simulate an
  undirected system.

Each broken fixture carries per-check exploration bounds chosen so the
targeted check fails definitively while every other check either passes or
honestly reports unknown — never a spurious failure. The bounds encode how
much exploration each check needs before its evidence becomes definite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .core import Assembly, tile_from_faces
from .simcheck import (
    Resolver,
    Rule,
    SimCheckReport,
    SimulationSetup,
    identity_setup,
    run_all_checks,
)
from .systems import gen_undirected_ab
from .core import TileSet, TileSystem, ATAM


def _system(tiles, seed):
    return TileSystem(TileSet(2, tuple(tiles)), Assembly(2, seed), 1, ATAM)


def _scale1_rules(pairs):
    return Resolver(1, tuple(Rule(((((0, 0)), src),), out) for src, out in pairs))


@dataclass(frozen=True)
class CalibrationFixture:
    """One calibrated checker fixture.

    ``target`` names the check expected to fail, or is None for identity
    fixtures expected to pass everything. ``bounds`` overrides the default
    exploration bound per check; ``clean_assembly`` designates the assembly
    the clean-mapping check should inspect instead of exploring.
    """

    name: str
    setup: SimulationSetup
    target: str | None
    default_bound: int
    bounds: Mapping[str, int] = field(default_factory=dict)
    clean_assembly: Assembly | None = None


def fixture_reports(fixture: CalibrationFixture) -> dict[str, SimCheckReport]:
    """Run all six checks on a fixture with its calibrated bounds."""
    return run_all_checks(
        fixture.setup,
        bound=fixture.default_bound,
        bounds=fixture.bounds,
        clean_assembly=fixture.clean_assembly,
    )


def _directed_chain(length: int = 5) -> TileSystem:
    tiles = [tile_from_faces("c0", E=("g0", 1))]
    for i in range(1, length):
        faces = {"W": (f"g{i - 1}", 1)}
        if i < length - 1:
            faces["E"] = (f"g{i}", 1)
        tiles.append(tile_from_faces(f"c{i}", **faces))
    return _system(tiles, {(0, 0): "c0"})


def identity_fixtures() -> tuple[CalibrationFixture, ...]:
    """Self-simulations of the A/B choice system and a directed 5-tile chain."""
    return (
        CalibrationFixture(
            "identity-ab", identity_setup(gen_undirected_ab()), None, 4
        ),
        CalibrationFixture(
            "identity-chain", identity_setup(_directed_chain()), None, 8
        ),
    )


def _fuzz_fixture() -> CalibrationFixture:
    simulated = _system([tile_from_faces("T0")], {(0, 0): "T0"})
    simulator = _system(
        [
            tile_from_faces("s00", E=("sx", 1), N=("sy", 1)),
            tile_from_faces("s10", W=("sx", 1), N=("sz", 1)),
            tile_from_faces("s01", S=("sy", 1)),
            tile_from_faces("s11", S=("sz", 1)),
        ],
        {(0, 0): "s00", (1, 0): "s10", (0, 1): "s01", (1, 1): "s11"},
    )
    setup = SimulationSetup(
        simulator, simulated, 2, Resolver(2, (Rule((((0, 0), "s00"),), "T0"),))
    )
    stray = Assembly(2, dict(simulator.seed.placements)).with_tile((2, 2), "s01")
    return CalibrationFixture(
        "diagonal-fuzz", setup, "clean", 4, clean_assembly=stray
    )


def _non_monotone_fixture() -> CalibrationFixture:
    simulated = _system(
        [
            tile_from_faces("T0", E=("t", 1)),
            tile_from_faces("TA", W=("t", 1)),
            tile_from_faces("TB", W=("t", 1)),
        ],
        {(0, 0): "T0"},
    )
    simulator = _system(
        [
            tile_from_faces("s00", E=("sx", 1), N=("sy", 1)),
            tile_from_faces("s10", W=("sx", 1), N=("sz", 1), E=("gx", 1)),
            tile_from_faces("s01", S=("sy", 1)),
            tile_from_faces("s11", S=("sz", 1)),
            tile_from_faces("x", W=("gx", 1), E=("gy", 1)),
            tile_from_faces("y", W=("gy", 1)),
        ],
        {(0, 0): "s00", (1, 0): "s10", (0, 1): "s01", (1, 1): "s11"},
    )
    resolver = Resolver(
        2,
        (
            Rule((((0, 0), "x"), ((1, 0), "y")), "TB"),
            Rule((((0, 0), "x"),), "TA"),
            Rule((((0, 0), "s00"),), "T0"),
        ),
    )
    setup = SimulationSetup(simulator, simulated, 2, resolver)
    # The re-resolution needs the 6-tile assembly; the remaining checks stay
    # one level shy of it so their verdicts are honest unknowns.
    bounds = {"follows": 5, "productions": 5, "models": 5, "directedness": 5}
    return CalibrationFixture(
        "non-monotone-resolver", setup, "monotonic", 6, bounds=bounds
    )


def _missing_terminal_image_fixture() -> CalibrationFixture:
    simulator = _system(
        [
            tile_from_faces("S0", N=("a1", 1)),
            tile_from_faces("A1", S=("a1", 1)),
            tile_from_faces("B1", S=("a1", 1)),
        ],
        {(0, 0): "S0"},
    )
    # No rule ever resolves B1, so the terminal holding it maps to the bare
    # seed image, which is not terminal in the simulated system.
    setup = SimulationSetup(
        simulator,
        gen_undirected_ab(),
        1,
        _scale1_rules([("S0", "S"), ("A1", "A")]),
    )
    return CalibrationFixture(
        "missing-terminal-image", setup, "productions", 3, bounds={"models": 1}
    )


def _extra_production_fixture() -> CalibrationFixture:
    simulator = _system(
        [
            tile_from_faces("S0", N=("a1", 1)),
            tile_from_faces("A1", S=("a1", 1), N=("b1", 1)),
            tile_from_faces("B1", S=("a1", 1)),
            tile_from_faces("C1", S=("b1", 1)),
        ],
        {(0, 0): "S0"},
    )
    # C1's image stacks B on top of A, an assembly the simulated system can
    # never produce.
    setup = SimulationSetup(
        simulator,
        gen_undirected_ab(),
        1,
        _scale1_rules([("S0", "S"), ("A1", "A"), ("B1", "B"), ("C1", "B")]),
    )
    return CalibrationFixture(
        "extra-production", setup, "productions", 3, bounds={"follows": 2, "models": 2}
    )


def _directedness_breaking_fixture() -> CalibrationFixture:
    simulator = _system(
        [
            tile_from_faces("S0", N=("a1", 1)),
            tile_from_faces("A1", S=("a1", 1)),
        ],
        {(0, 0): "S0"},
    )
    # The simulator is directed; the simulated A/B system is not.
    setup = SimulationSetup(
        simulator,
        gen_undirected_ab(),
        1,
        _scale1_rules([("S0", "S"), ("A1", "A")]),
    )
    return CalibrationFixture(
        "directedness-breaking",
        setup,
        "directedness",
        3,
        bounds={"productions": 1, "models": 1},
    )


def broken_fixtures() -> tuple[CalibrationFixture, ...]:
    """The five fixtures that each break exactly one check."""
    return (
        _fuzz_fixture(),
        _non_monotone_fixture(),
        _missing_terminal_image_fixture(),
        _extra_production_fixture(),
        _directedness_breaking_fixture(),
    )


def all_fixtures() -> tuple[CalibrationFixture, ...]:
    return identity_fixtures() + broken_fixtures()

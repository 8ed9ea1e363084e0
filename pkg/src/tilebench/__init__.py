"""tilebench: a multi-model tile self-assembly engine and verification workbench.

The package is organised in layers, re-exported here for convenience:

- :mod:`tilebench.core` — glues, tiles, assemblies, model variants, stability;
- :mod:`tilebench.dynamics` — attachment, frontiers, traces, seeded runs,
  bounded exploration, and directedness checking;
- :mod:`tilebench.movies` — windows, window movies, splice, matching-window
  search, pumping, and the closed-form proof bounds;
- :mod:`tilebench.simcheck` — bounded macrotile-simulation checking;
- :mod:`tilebench.systems` — built-in study systems and scripted scenarios;
- :mod:`tilebench.calibration` — fixtures that keep the checker honest;
- :mod:`tilebench.documents` — versioned JSON document formats;
- :mod:`tilebench.render` — deterministic SVG rendering;
- :mod:`tilebench.api` — the HTTP session service;
- :mod:`tilebench.cli` — the ``tilebench`` command-line entry point.
"""

from .core import (
    ATAM,
    ATAM3D,
    NULL_GLUE,
    PATAM,
    SATAM,
    Assembly,
    BindingGraph,
    BondEdge,
    Glue,
    ModelVariant,
    TileSet,
    TileSystem,
    TileType,
    Violation,
    binding_graph,
    direction_name,
    directions,
    is_subassembly,
    is_tau_stable,
    min_cut_strength,
    named_direction,
    opposite,
    shape,
    tile_from_faces,
    validate_tile_system,
    variant_by_name,
)
from .dynamics import (
    AssemblyTrace,
    AttachError,
    ConstrainedLocation,
    DirectednessVerdict,
    ExplorationGraph,
    ExplorationResult,
    InsufficientStrength,
    InvalidStep,
    OccupiedLocation,
    Placement,
    StateBudgetExceeded,
    UnknownTile,
    attach,
    attachment_strength,
    check_directed,
    constrained_cells,
    explore_graph,
    explore_producibles,
    frontier,
    random_run,
    run_trace,
)
from .movies import (
    InvalidTrace,
    InvalidWindow,
    MovieEntry,
    MovieMismatch,
    PumpingBoundInput,
    SpliceStepInvalid,
    Window,
    WindowMovie,
    bond_forming_submovie,
    chamber_bounds,
    extract_movie,
    find_matching_window_pair,
    movies_equal,
    pump,
    pumping_bound,
    splice,
)
from .simcheck import (
    CHECK_NAMES,
    DEFAULT_BOUND,
    MBlock,
    Resolver,
    Rule,
    SimCheckReport,
    SimulationSetup,
    check_clean_mapping,
    check_clean_mapping_report,
    check_directedness_preservation,
    check_equivalent_productions,
    check_follows,
    check_models,
    check_representation_monotonic,
    identity_setup,
    r_star,
    run_all_checks,
)
from .systems import (
    NoMatchingWindow,
    NotTwoDimensional,
    ScenarioResult,
    embed_2d_in_3d,
    gen_blocking_counters,
    gen_chambers,
    gen_rectangle_arms,
    gen_undirected_ab,
    scenario_plug_chambers,
    scenario_pump_arm,
    scenario_seal_rectangle,
)
from .documents import (
    ParseError,
    RngMetadata,
    SchemaVersionUnsupported,
    SetupDocument,
    SystemDocument,
    TraceDocument,
    parse_setup,
    parse_system,
    parse_trace,
    serialize_setup,
    serialize_system,
    serialize_trace,
    setup_document,
    trace_document,
)
from .render import SliceOutOfRange, render_svg

__version__ = "1.0.0"

__all__ = [
    "ATAM",
    "ATAM3D",
    "NULL_GLUE",
    "PATAM",
    "SATAM",
    "Assembly",
    "AssemblyTrace",
    "AttachError",
    "BindingGraph",
    "BondEdge",
    "CHECK_NAMES",
    "ConstrainedLocation",
    "DEFAULT_BOUND",
    "DirectednessVerdict",
    "ExplorationGraph",
    "ExplorationResult",
    "Glue",
    "InsufficientStrength",
    "InvalidStep",
    "InvalidTrace",
    "InvalidWindow",
    "MBlock",
    "ModelVariant",
    "MovieEntry",
    "MovieMismatch",
    "NoMatchingWindow",
    "NotTwoDimensional",
    "OccupiedLocation",
    "ParseError",
    "Placement",
    "PumpingBoundInput",
    "Resolver",
    "RngMetadata",
    "Rule",
    "ScenarioResult",
    "SchemaVersionUnsupported",
    "SetupDocument",
    "SimCheckReport",
    "SimulationSetup",
    "SliceOutOfRange",
    "SpliceStepInvalid",
    "StateBudgetExceeded",
    "SystemDocument",
    "TileSet",
    "TileSystem",
    "TileType",
    "TraceDocument",
    "UnknownTile",
    "Violation",
    "Window",
    "WindowMovie",
    "attach",
    "attachment_strength",
    "binding_graph",
    "bond_forming_submovie",
    "chamber_bounds",
    "check_clean_mapping",
    "check_clean_mapping_report",
    "check_directed",
    "check_directedness_preservation",
    "check_equivalent_productions",
    "check_follows",
    "check_models",
    "check_representation_monotonic",
    "constrained_cells",
    "direction_name",
    "directions",
    "embed_2d_in_3d",
    "extract_movie",
    "find_matching_window_pair",
    "frontier",
    "gen_blocking_counters",
    "gen_chambers",
    "gen_rectangle_arms",
    "gen_undirected_ab",
    "identity_setup",
    "is_subassembly",
    "is_tau_stable",
    "min_cut_strength",
    "movies_equal",
    "named_direction",
    "opposite",
    "parse_setup",
    "parse_system",
    "parse_trace",
    "pump",
    "pumping_bound",
    "r_star",
    "random_run",
    "render_svg",
    "run_all_checks",
    "run_trace",
    "scenario_plug_chambers",
    "scenario_pump_arm",
    "scenario_seal_rectangle",
    "serialize_setup",
    "serialize_system",
    "serialize_trace",
    "setup_document",
    "shape",
    "splice",
    "tile_from_faces",
    "trace_document",
    "validate_tile_system",
    "variant_by_name",
    "explore_graph",
    "explore_producibles",
]

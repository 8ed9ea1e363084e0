"""Versioned JSON text formats for tile systems, traces, and simulation setups.

Three document families, each carrying a ``format`` tag of ``family/version``:

- ``tilesystem/1`` — a complete tile system: name, dimension, temperature,
  diffusion flag, tile types with glues keyed by compass letters
  (N/S/E/W plus U/D in 3D), and seed placements;
- ``trace/1`` — an ordered placement list with its system inline or referenced
  by path, plus optional RNG provenance so random runs stay reproducible;
- ``setup/1`` — a simulator system, a simulated system, a scale, and the
  ordered resolver rules of a macrotile simulation.

Parsing is strict: unknown fields, duplicate keys, wrong types, and dangling
references are all rejected with :class:`ParseError` carrying a line number.
A recognized family at an unsupported version raises
:class:`SchemaVersionUnsupported` instead, so callers can distinguish "not
ours" from "newer than us". Serialization is canonical — fixed key order,
seed placements sorted by position, glue keys in face order — so
``serialize(parse(text))`` is the canonical form of ``text`` and documents
diff cleanly under version control. Tile declaration order and trace step
order are data, not presentation, and are preserved exactly.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Mapping, NamedTuple, Sequence

from .core import (
    Assembly,
    Glue,
    Point,
    TileSet,
    TileSystem,
    TileType,
    ModelVariant,
    direction_name,
    directions,
    named_direction,
)
from .dynamics import AssemblyTrace, Placement
from .movies import Window
from .simcheck import Resolver, Rule, SimulationSetup

SYSTEM_FORMAT = "tilesystem/1"
TRACE_FORMAT = "trace/1"
SETUP_FORMAT = "setup/1"

_FAMILY_OF = {
    SYSTEM_FORMAT: "tilesystem",
    TRACE_FORMAT: "trace",
    SETUP_FORMAT: "setup",
}


class ParseError(Exception):
    """A document was rejected; ``line`` locates the offending construct."""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class SchemaVersionUnsupported(Exception):
    """The document belongs to a known family but an unsupported version."""

    def __init__(self, format_tag: str):
        self.format_tag = format_tag
        super().__init__(f"unsupported document format {format_tag!r}")


@dataclass(frozen=True)
class SystemDocument:
    """A named tile system as read from or written to a ``tilesystem/1`` file."""

    name: str
    system: TileSystem


class RngMetadata(NamedTuple):
    """Provenance of a randomly generated trace: generator seed and step cap."""

    seed: int
    max_steps: int


@dataclass(frozen=True)
class TraceDocument:
    """An ordered placement list plus its system, inline or referenced by path.

    Exactly one of ``system`` and ``system_path`` is set. A path reference
    keeps trace files small next to a shared system file; resolving the path
    is the caller's concern (the command-line tools resolve it relative to the
    trace file's directory).
    """

    placements: tuple[Placement, ...]
    system: SystemDocument | None = None
    system_path: str | None = None
    rng: RngMetadata | None = None

    def __post_init__(self) -> None:
        if (self.system is None) == (self.system_path is None):
            raise ValueError(
                "exactly one of system and system_path must be provided"
            )
        object.__setattr__(
            self,
            "placements",
            tuple(Placement(tuple(p[0]), p[1]) for p in self.placements),
        )

    def trace(self, system: TileSystem | None = None) -> AssemblyTrace:
        """The replayable trace, against an explicit or the inline system."""
        if system is None:
            if self.system is None:
                raise ValueError(
                    "trace references an external system file; pass the "
                    "resolved system explicitly"
                )
            system = self.system.system
        return AssemblyTrace(system, self.placements)


@dataclass(frozen=True)
class SetupDocument:
    """A macrotile simulation setup plus display names for both systems."""

    simulator: SystemDocument
    simulated: SystemDocument
    setup: SimulationSetup


def trace_document(
    trace: AssemblyTrace, name: str = "system", rng: RngMetadata | None = None
) -> TraceDocument:
    """Wrap a trace with its system inlined under the given name."""
    return TraceDocument(
        trace.steps, system=SystemDocument(name, trace.system), rng=rng
    )


def setup_document(
    setup: SimulationSetup,
    simulator_name: str = "simulator",
    simulated_name: str = "simulated",
) -> SetupDocument:
    return SetupDocument(
        SystemDocument(simulator_name, setup.simulator),
        SystemDocument(simulated_name, setup.simulated),
        setup,
    )


# --------------------------------------------------------------------------
# Canonical printing: standard JSON, but leaf arrays (positions, glue pairs)
# and flat objects (placements, glue maps) stay on one line so seeds and
# traces diff as one line per entry.


def _scalar(value: Any) -> bool:
    return value is None or isinstance(value, (str, int, float, bool))


def _flat(value: Any) -> bool:
    if _scalar(value):
        return True
    if isinstance(value, list):
        return all(_scalar(v) for v in value)
    if isinstance(value, dict):
        return all(_flat(v) for v in value.values())
    return False


def _emit(value: Any, depth: int) -> str:
    pad = "  " * depth
    inner = "  " * (depth + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        if _flat(value):
            return json.dumps(value)
        parts = [
            f"{inner}{json.dumps(k)}: {_emit(v, depth + 1)}" for k, v in value.items()
        ]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        if all(_scalar(v) for v in value):
            return json.dumps(value)
        parts = [f"{inner}{_emit(v, depth + 1)}" for v in value]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    return json.dumps(value)


def dump_json(obj: dict) -> str:
    """Canonical compact-leaf JSON text used by all document serializers."""
    return _emit(obj, 0) + "\n"


# --------------------------------------------------------------------------
# Shared validation plumbing.


class _DuplicateKey(Exception):
    def __init__(self, key: str):
        self.key = key


class _Source:
    """The raw text, for attributing semantic errors to source lines."""

    def __init__(self, text: str):
        self.text = text

    def _key_matches(self, key: str) -> list[int]:
        pattern = re.escape(json.dumps(key)) + r"\s*:"
        return [m.start() for m in re.finditer(pattern, self.text)]

    def line_of_key(self, key: str, occurrence: int = 0) -> int | None:
        starts = self._key_matches(key)
        if occurrence >= len(starts):
            return None
        return self.text.count("\n", 0, starts[occurrence]) + 1

    def fail(self, message: str, *anchors: str) -> None:
        """Raise ParseError at the first locatable anchor key, else line 1."""
        for key in anchors:
            line = self.line_of_key(key)
            if line is not None:
                raise ParseError(line, message)
        raise ParseError(1, message)


def _reject_duplicates(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, value in pairs:
        if key in out:
            raise _DuplicateKey(key)
        out[key] = value
    return out


def _load(text: str, expected_format: str) -> tuple[dict, _Source]:
    src = _Source(text)
    try:
        tree = json.loads(text, object_pairs_hook=_reject_duplicates)
    except _DuplicateKey as dup:
        line = src.line_of_key(dup.key, occurrence=1) or 1
        raise ParseError(line, f"duplicate field {dup.key!r}") from None
    except json.JSONDecodeError as err:
        raise ParseError(err.lineno, err.msg) from None
    if not isinstance(tree, dict):
        raise ParseError(1, "document root must be an object")
    fmt = tree.get("format")
    if not isinstance(fmt, str):
        src.fail('missing or non-string "format" field', "format")
    if fmt != expected_format:
        family = fmt.split("/", 1)[0]
        if family == _FAMILY_OF[expected_format]:
            raise SchemaVersionUnsupported(fmt)
        src.fail(
            f"expected a {expected_format!r} document, found {fmt!r}", "format"
        )
    return tree, src


def _check_fields(
    src: _Source,
    obj: Mapping[str, Any],
    required: Sequence[str],
    optional: Sequence[str],
    anchor: str,
) -> None:
    allowed = set(required) | set(optional)
    for key in obj:
        if key not in allowed:
            src.fail(f"unknown field {key!r}", key, anchor)
    for key in required:
        if key not in obj:
            src.fail(f"missing required field {key!r}", anchor)


def _expect(
    src: _Source, value: Any, kind: type, what: str, *anchors: str
) -> Any:
    # bool is an int subclass; an explicit check keeps true/false out of
    # numeric fields and numbers out of flag fields.
    if isinstance(value, bool) != (kind is bool) or not isinstance(value, kind):
        names = {str: "a string", int: "an integer", bool: "a boolean",
                 list: "an array", dict: "an object"}
        src.fail(f"{what} must be {names[kind]}", *anchors)
    return value


def _point(src: _Source, value: Any, dimension: int | None, what: str, anchor: str) -> Point:
    _expect(src, value, list, what, anchor)
    if dimension is not None and len(value) != dimension:
        src.fail(f"{what} must have {dimension} coordinates", anchor)
    for coord in value:
        _expect(src, coord, int, f"{what} coordinate", anchor)
    return tuple(value)


def _placement_entries(
    src: _Source,
    value: Any,
    dimension: int | None,
    what: str,
    anchor: str,
) -> list[tuple[Point, str]]:
    _expect(src, value, list, what, anchor)
    entries = []
    for item in value:
        _expect(src, item, dict, f"{what} entry", anchor)
        _check_fields(src, item, ("pos", "tile"), (), anchor)
        pos = _point(src, item["pos"], dimension, f"{what} position", anchor)
        tile = _expect(src, item["tile"], str, f"{what} tile id", anchor)
        entries.append((pos, tile))
    return entries


# --------------------------------------------------------------------------
# tilesystem/1


def _system_obj(doc: SystemDocument) -> dict:
    system = doc.system
    dimension = system.variant.dimension
    tiles = []
    for tile in system.tile_set:
        glues = {}
        for direction in directions(dimension):
            if direction in tile.glues:
                glue = tile.glues[direction]
                glues[direction_name(direction)] = [glue.label, glue.strength]
        tiles.append({"id": tile.id, "label": tile.label, "glues": glues})
    seed = [
        {"pos": list(pos), "tile": tile} for pos, tile in system.seed.canonical()
    ]
    return {
        "format": SYSTEM_FORMAT,
        "name": doc.name,
        "dimension": dimension,
        "temperature": system.temperature,
        "diffusionRestricted": system.variant.diffusion_restricted,
        "tileTypes": tiles,
        "seed": seed,
    }


def serialize_system(doc: SystemDocument) -> str:
    return dump_json(_system_obj(doc))


def _require_system_format(src: _Source, obj: Mapping[str, Any], key: str) -> None:
    fmt = obj.get("format")
    if fmt == SYSTEM_FORMAT:
        return
    if isinstance(fmt, str) and fmt.split("/", 1)[0] == _FAMILY_OF[SYSTEM_FORMAT]:
        raise SchemaVersionUnsupported(fmt)
    src.fail(f'"{key}" must be an inline "{SYSTEM_FORMAT}" object', key, "format")


def _system_from_obj(src: _Source, obj: Mapping[str, Any], anchor: str) -> SystemDocument:
    _check_fields(
        src,
        obj,
        ("format", "name", "dimension", "temperature", "diffusionRestricted",
         "tileTypes", "seed"),
        (),
        anchor,
    )
    name = _expect(src, obj["name"], str, '"name"', "name", anchor)
    dimension = _expect(src, obj["dimension"], int, '"dimension"', "dimension", anchor)
    if dimension not in (2, 3):
        src.fail('"dimension" must be 2 or 3', "dimension", anchor)
    temperature = _expect(
        src, obj["temperature"], int, '"temperature"', "temperature", anchor
    )
    restricted = _expect(
        src,
        obj["diffusionRestricted"],
        bool,
        '"diffusionRestricted"',
        "diffusionRestricted",
        anchor,
    )

    tiles_value = _expect(src, obj["tileTypes"], list, '"tileTypes"', "tileTypes", anchor)
    tiles: list[TileType] = []
    seen_ids: set[str] = set()
    for entry in tiles_value:
        _expect(src, entry, dict, "tile type entry", "tileTypes", anchor)
        _check_fields(src, entry, ("id", "glues"), ("label",), "tileTypes")
        tile_id = _expect(src, entry["id"], str, "tile id", "tileTypes", anchor)
        if tile_id in seen_ids:
            src.fail(f"duplicate tile id {tile_id!r}", "tileTypes", anchor)
        seen_ids.add(tile_id)
        label = entry.get("label", tile_id)
        _expect(src, label, str, "tile label", "tileTypes", anchor)
        glues_obj = _expect(src, entry["glues"], dict, "tile glues", "tileTypes", anchor)
        glues: dict[Point, Glue] = {}
        for letter, value in glues_obj.items():
            try:
                direction = named_direction(letter, dimension)
            except (KeyError, ValueError):
                src.fail(
                    f"unknown direction key {letter!r} for dimension {dimension}",
                    "tileTypes",
                    anchor,
                )
            _expect(src, value, list, "glue entry", "tileTypes", anchor)
            if len(value) != 2:
                src.fail(
                    "glue entry must be a [label, strength] pair", "tileTypes", anchor
                )
            glue_label = _expect(src, value[0], str, "glue label", "tileTypes", anchor)
            strength = _expect(src, value[1], int, "glue strength", "tileTypes", anchor)
            if strength < 0:
                src.fail("glue strength must be non-negative", "tileTypes", anchor)
            glues[direction] = Glue(glue_label, strength)
        tiles.append(TileType(tile_id, label, glues))

    seed_entries = _placement_entries(
        src, obj["seed"], dimension, "seed", "seed"
    )
    seen_pos: set[Point] = set()
    for pos, tile in seed_entries:
        if pos in seen_pos:
            src.fail(f"duplicate seed position {pos}", "seed", anchor)
        seen_pos.add(pos)
        if tile not in seen_ids:
            src.fail(f"seed references unknown tile {tile!r}", "seed", anchor)

    system = TileSystem(
        TileSet(dimension, tuple(tiles)),
        Assembly(dimension, dict(seed_entries)),
        temperature,
        ModelVariant(dimension, restricted),
    )
    return SystemDocument(name, system)


def parse_system(text: str) -> SystemDocument:
    tree, src = _load(text, SYSTEM_FORMAT)
    return _system_from_obj(src, tree, "format")


# --------------------------------------------------------------------------
# trace/1


def serialize_trace(doc: TraceDocument) -> str:
    if doc.system is not None:
        system_obj: Any = _system_obj(doc.system)
    else:
        system_obj = {"path": doc.system_path}
    obj: dict[str, Any] = {
        "format": TRACE_FORMAT,
        "system": system_obj,
        "placements": [
            {"pos": list(pos), "tile": tile} for pos, tile in doc.placements
        ],
    }
    if doc.rng is not None:
        obj["rng"] = {"seed": doc.rng.seed, "maxSteps": doc.rng.max_steps}
    return dump_json(obj)


def parse_trace(text: str) -> TraceDocument:
    tree, src = _load(text, TRACE_FORMAT)
    _check_fields(src, tree, ("format", "system", "placements"), ("rng",), "format")

    system_value = _expect(src, tree["system"], dict, '"system"', "system", "format")
    system_doc: SystemDocument | None = None
    system_path: str | None = None
    dimension: int | None = None
    if set(system_value) == {"path"}:
        system_path = _expect(
            src, system_value["path"], str, "system path", "system", "format"
        )
    else:
        _require_system_format(src, system_value, "system")
        system_doc = _system_from_obj(src, system_value, "system")
        dimension = system_doc.system.variant.dimension

    entries = _placement_entries(
        src, tree["placements"], dimension, "placement", "placements"
    )
    if dimension is None and entries:
        width = len(entries[0][0])
        if width not in (2, 3) or any(len(p) != width for p, _ in entries):
            src.fail(
                "placement positions must share one dimension of 2 or 3",
                "placements",
            )
    if system_doc is not None:
        for _, tile in entries:
            if tile not in system_doc.system.tile_set:
                src.fail(
                    f"placement references unknown tile {tile!r}", "placements"
                )

    rng: RngMetadata | None = None
    if "rng" in tree:
        rng_obj = _expect(src, tree["rng"], dict, '"rng"', "rng", "format")
        _check_fields(src, rng_obj, ("seed", "maxSteps"), (), "rng")
        rng = RngMetadata(
            _expect(src, rng_obj["seed"], int, "rng seed", "rng"),
            _expect(src, rng_obj["maxSteps"], int, "rng maxSteps", "rng"),
        )

    return TraceDocument(
        tuple(Placement(pos, tile) for pos, tile in entries),
        system=system_doc,
        system_path=system_path,
        rng=rng,
    )


# --------------------------------------------------------------------------
# setup/1


def serialize_setup(doc: SetupDocument) -> str:
    rules = [
        {
            "pattern": [
                {"pos": list(pos), "tile": tile} for pos, tile in rule.pattern
            ],
            "output": rule.output,
        }
        for rule in doc.setup.resolver.rules
    ]
    obj = {
        "format": SETUP_FORMAT,
        "scale": doc.setup.scale,
        "simulator": _system_obj(doc.simulator),
        "simulated": _system_obj(doc.simulated),
        "rules": rules,
    }
    return dump_json(obj)


def parse_setup(text: str) -> SetupDocument:
    tree, src = _load(text, SETUP_FORMAT)
    _check_fields(
        src, tree, ("format", "scale", "simulator", "simulated", "rules"), (), "format"
    )
    scale = _expect(src, tree["scale"], int, '"scale"', "scale", "format")
    simulator_obj = _expect(
        src, tree["simulator"], dict, '"simulator"', "simulator", "format"
    )
    simulated_obj = _expect(
        src, tree["simulated"], dict, '"simulated"', "simulated", "format"
    )
    for obj, key in ((simulator_obj, "simulator"), (simulated_obj, "simulated")):
        _require_system_format(src, obj, key)
    simulator = _system_from_obj(src, simulator_obj, "simulator")
    simulated = _system_from_obj(src, simulated_obj, "simulated")

    rules_value = _expect(src, tree["rules"], list, '"rules"', "rules", "format")
    rules: list[Rule] = []
    dimension = simulator.system.variant.dimension
    for entry in rules_value:
        _expect(src, entry, dict, "rule entry", "rules", "format")
        _check_fields(src, entry, ("pattern", "output"), (), "rules")
        pattern = _placement_entries(
            src, entry["pattern"], dimension, "rule pattern", "rules"
        )
        output = _expect(src, entry["output"], str, "rule output", "rules", "format")
        try:
            rules.append(Rule(tuple(pattern), output))
        except ValueError as err:
            src.fail(str(err), "rules", "format")

    try:
        setup = SimulationSetup(
            simulator.system, simulated.system, scale, Resolver(scale, tuple(rules))
        )
    except ValueError as err:
        src.fail(str(err), "rules", "scale", "format")
    return SetupDocument(simulator, simulated, setup)


# --------------------------------------------------------------------------
# Shared object shapes used by the HTTP API and command-line tools.


def placement_to_obj(placement: Placement) -> dict:
    return {"pos": list(placement.location), "tile": placement.tile}


def placement_from_obj(obj: Any, dimension: int | None = None) -> Placement:
    """Read a ``{"pos": [...], "tile": ...}`` object, raising ValueError."""
    if not isinstance(obj, dict) or set(obj) != {"pos", "tile"}:
        raise ValueError('placement must be an object with "pos" and "tile"')
    pos = obj["pos"]
    if (
        not isinstance(pos, list)
        or not pos
        or any(isinstance(c, bool) or not isinstance(c, int) for c in pos)
    ):
        raise ValueError("placement position must be an integer array")
    if dimension is not None and len(pos) != dimension:
        raise ValueError(f"placement position must have {dimension} coordinates")
    if not isinstance(obj["tile"], str):
        raise ValueError("placement tile must be a string id")
    return Placement(tuple(pos), obj["tile"])


def assembly_to_obj(assembly: Assembly) -> list[dict]:
    return [
        {"pos": list(pos), "tile": tile} for pos, tile in assembly.canonical()
    ]


def window_to_obj(window: Window) -> dict:
    if window.box is not None:
        lo, hi = window.box
        return {"box": {"lo": list(lo), "hi": list(hi)}}
    edges = sorted(window.edges)
    return {"edges": [[list(p), list(q)] for p, q in edges]}


def window_from_obj(obj: Any) -> Window:
    """Read a window as either box corners or an explicit edge list."""
    if not isinstance(obj, dict):
        raise ValueError("window must be an object")
    if set(obj) == {"box"}:
        box = obj["box"]
        if not isinstance(box, dict) or set(box) != {"lo", "hi"}:
            raise ValueError('window box must carry "lo" and "hi" corners')
        lo, hi = box["lo"], box["hi"]
        for corner in (lo, hi):
            if not isinstance(corner, list) or any(
                isinstance(c, bool) or not isinstance(c, int) for c in corner
            ):
                raise ValueError("window box corners must be integer arrays")
        return Window.around_box(tuple(lo), tuple(hi))
    if set(obj) == {"edges"}:
        edges = obj["edges"]
        if not isinstance(edges, list) or not edges:
            raise ValueError("window edges must be a non-empty array")
        pairs = []
        for pair in edges:
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or any(not isinstance(p, list) for p in pair)
            ):
                raise ValueError("window edge must be a pair of positions")
            pairs.append((tuple(pair[0]), tuple(pair[1])))
        return Window.from_edges(pairs)
    raise ValueError('window must carry exactly "box" or "edges"')

"""Command-line workbench: validate, run, explore, splice, check, render, serve.

Every command reads and writes the versioned JSON document formats, so any
machine-readable output (generated systems, traces from runs, spliced or
pumped traces) parses back through the corresponding parser. Exit codes are
uniform across commands:

- 0 — success / property holds,
- 1 — definite failure, with a witness in the output,
- 2 — unknown: the bound truncated the evidence before a verdict,
- 3 — usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Callable, Mapping

from .core import Assembly, validate_tile_system, variant_by_name
from .documents import (
    ParseError,
    dump_json,
    RngMetadata,
    SchemaVersionUnsupported,
    SystemDocument,
    TraceDocument,
    assembly_to_obj,
    parse_system,
    parse_trace,
    parse_setup,
    placement_to_obj,
    serialize_system,
    serialize_trace,
    trace_document,
    window_from_obj,
    window_to_obj,
)
from .dynamics import (
    AssemblyTrace,
    Placement,
    StateBudgetExceeded,
    check_directed,
    explore_producibles,
    frontier,
    random_run,
)
from .movies import (
    MovieMismatch,
    PumpingBoundInput,
    SpliceStepInvalid,
    Window,
    chamber_bounds,
    extract_movie,
    find_matching_window_pair,
    pump,
    pumping_bound,
    splice,
)
from .render import SliceOutOfRange, render_svg
from .simcheck import (
    CHECK_NAMES,
    DEFAULT_BOUND,
    MBlock,
    SimCheckReport,
    check_clean_mapping_report,
    check_directedness_preservation,
    check_equivalent_productions,
    check_follows,
    check_models,
    check_representation_monotonic,
    run_all_checks,
)
from .systems import (
    gen_blocking_counters,
    gen_chambers,
    gen_rectangle_arms,
    gen_undirected_ab,
    embed_2d_in_3d,
    scenario_plug_chambers,
    scenario_pump_arm,
    scenario_seal_rectangle,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 3


class _Exit(Exception):
    def __init__(self, code: int):
        self.code = code


class _Parser(argparse.ArgumentParser):
    """Argparse with usage failures mapped to exit code 3."""

    def error(self, message: str):  # noqa: A003 - argparse API
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _usage_fail(message: str) -> None:
    print(json.dumps({"error": "usage", "message": message}), file=sys.stderr)
    raise _Exit(EXIT_USAGE)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as err:
        _usage_fail(f"cannot read {path}: {err}")


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8") as handle:
        handle.write(text)


def _emit(obj: Any) -> None:
    sys.stdout.write(dump_json(obj))


def _load_system(path: str) -> SystemDocument:
    text = _read(path)
    try:
        return parse_system(text)
    except ParseError as err:
        _usage_fail(f"{path}: line {err.line}: {err.message}")
    except SchemaVersionUnsupported as err:
        _usage_fail(f"{path}: {err}")


def _load_trace(path: str) -> tuple[TraceDocument, AssemblyTrace]:
    text = _read(path)
    try:
        doc = parse_trace(text)
    except ParseError as err:
        _usage_fail(f"{path}: line {err.line}: {err.message}")
    except SchemaVersionUnsupported as err:
        _usage_fail(f"{path}: {err}")
    if doc.system is not None:
        return doc, doc.trace()
    ref = doc.system_path
    base = os.path.dirname(path) if path != "-" else "."
    system_doc = _load_system(os.path.join(base, ref))
    return doc, doc.trace(system_doc.system)


def _parse_window(text: str) -> Window:
    try:
        return window_from_obj(json.loads(text))
    except (json.JSONDecodeError, ValueError) as err:
        _usage_fail(f"bad window: {err}")


def _parse_offset(text: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError:
        _usage_fail(f"bad offset {text!r}; expected comma-separated integers")
    if len(parts) not in (2, 3):
        _usage_fail(f"offset {text!r} must have 2 or 3 coordinates")
    return parts


def _jsonable(value: Any) -> Any:
    """Best-effort conversion of witness structures for machine output."""
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, Assembly):
        return assembly_to_obj(value)
    if isinstance(value, Placement):
        return placement_to_obj(value)
    if isinstance(value, MBlock):
        return {"scale": value.scale, "cells": [[list(p), t] for p, t in value.cells]}
    if isinstance(value, Window):
        return window_to_obj(value)
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, frozenset, set)):
        items = list(value)
        if isinstance(value, (frozenset, set)):
            items = sorted(items, key=repr)
        return [_jsonable(v) for v in items]
    return repr(value)


# --------------------------------------------------------------------------
# Commands.


def cmd_validate(args: argparse.Namespace) -> int:
    doc = _load_system(args.system)
    violations = validate_tile_system(doc.system)
    _emit(
        {
            "valid": not violations,
            "violations": [{"kind": v.kind, "detail": v.detail} for v in violations],
        }
    )
    return EXIT_OK if not violations else EXIT_FAIL


def cmd_run(args: argparse.Namespace) -> int:
    doc = _load_system(args.system)
    trace = random_run(doc.system, args.max_steps, args.rng_seed)
    final = trace.result()
    terminal = not frontier(doc.system, final)
    out_doc = trace_document(
        trace, doc.name, RngMetadata(args.rng_seed, args.max_steps)
    )
    text = serialize_trace(out_doc)
    if args.trace_out:
        _write(text, args.trace_out)
        _emit({"steps": len(trace.steps), "tiles": len(final), "terminal": terminal})
    else:
        sys.stdout.write(text)
    return EXIT_OK if terminal else EXIT_UNKNOWN


def cmd_frontier(args: argparse.Namespace) -> int:
    if args.trace:
        _, trace = _load_trace(args.trace)
        system, assembly = trace.system, trace.result()
    elif args.system is None:
        _usage_fail("give a system document or --trace")
    else:
        doc = _load_system(args.system)
        system, assembly = doc.system, doc.system.seed
    options = frontier(system, assembly)
    _emit({"count": len(options), "frontier": [placement_to_obj(p) for p in options]})
    return EXIT_OK


def cmd_explore(args: argparse.Namespace) -> int:
    doc = _load_system(args.system)
    try:
        result = explore_producibles(
            doc.system,
            max_tiles=args.max_tiles,
            state_budget=args.state_budget,
            workers=args.workers,
        )
    except StateBudgetExceeded:
        _emit({"error": "state-budget-exceeded", "budget": args.state_budget})
        return EXIT_UNKNOWN
    _emit(
        {
            "producibles": len(result.producibles),
            "terminals": len(result.terminals),
            "truncated": result.truncated,
        }
    )
    return EXIT_UNKNOWN if result.truncated else EXIT_OK


def cmd_directed(args: argparse.Namespace) -> int:
    doc = _load_system(args.system)
    try:
        verdict = check_directed(doc.system, max_tiles=args.max_tiles)
    except StateBudgetExceeded:
        _emit({"status": "unknown", "reason": "state-budget-exceeded"})
        return EXIT_UNKNOWN
    obj: dict[str, Any] = {"status": verdict.status, "truncated": verdict.truncated}
    if verdict.witness is not None:
        obj["witness"] = [assembly_to_obj(a) for a in verdict.witness]
    _emit(obj)
    if verdict.status == "directed":
        return EXIT_OK
    if verdict.status == "undirected":
        return EXIT_FAIL
    return EXIT_UNKNOWN


def cmd_movie_extract(args: argparse.Namespace) -> int:
    _, trace = _load_trace(args.trace)
    window = _parse_window(args.window)
    try:
        movie = extract_movie(trace, window)
    except ValueError as err:
        _usage_fail(str(err))
    _emit(
        {
            "anchor": list(movie.anchor),
            "entries": [
                {
                    "from": list(e.from_),
                    "to": list(e.to),
                    "glue": [e.glue.label, e.glue.strength],
                }
                for e in movie.entries
            ],
        }
    )
    return EXIT_OK


def cmd_movie_find_window(args: argparse.Namespace) -> int:
    _, trace = _load_trace(args.trace)
    template = _parse_window(args.template)
    translations = [_parse_offset(t) for t in args.translations.split(";")]
    try:
        found = find_matching_window_pair(trace, template, translations, mode=args.mode)
    except ValueError as err:
        _usage_fail(str(err))
    if found is None:
        _emit({"found": False})
        return EXIT_FAIL
    w1, w2, offset = found
    _emit(
        {
            "found": True,
            "w1": window_to_obj(w1),
            "w2": window_to_obj(w2),
            "offset": list(offset),
        }
    )
    return EXIT_OK


def cmd_movie_splice(args: argparse.Namespace) -> int:
    _, trace_a = _load_trace(args.trace_a)
    _, trace_b = _load_trace(args.trace_b)
    window = _parse_window(args.window)
    offset = _parse_offset(args.c)
    try:
        merged = splice(
            trace_a, trace_b, window, offset, mode=args.mode, strict=args.strict
        )
    except MovieMismatch as err:
        _emit({"error": "movie-mismatch", "detail": str(err)})
        return EXIT_FAIL
    except SpliceStepInvalid as err:
        _emit({"error": "splice-step-invalid", "detail": str(err)})
        return EXIT_FAIL
    except ValueError as err:
        _usage_fail(str(err))
    text = serialize_trace(trace_document(merged, "spliced"))
    _write(text, args.out)
    return EXIT_OK


def cmd_movie_pump(args: argparse.Namespace) -> int:
    _, trace = _load_trace(args.trace)
    w1 = _parse_window(args.window)
    offset = _parse_offset(args.c)
    w2 = w1.translate(offset)
    if args.until_blocked and args.repetitions is not None:
        _usage_fail("give either --repetitions or --until-blocked, not both")
    if not args.until_blocked and args.repetitions is None:
        _usage_fail("one of --repetitions or --until-blocked is required")
    try:
        pumped = pump(
            trace,
            w1,
            w2,
            offset,
            repetitions=args.repetitions,
            until_blocked=args.until_blocked,
            mode=args.mode,
            strict=args.strict,
        )
    except MovieMismatch as err:
        _emit({"error": "movie-mismatch", "detail": str(err)})
        return EXIT_FAIL
    except SpliceStepInvalid as err:
        _emit({"error": "splice-step-invalid", "detail": str(err)})
        return EXIT_FAIL
    except ValueError as err:
        _usage_fail(str(err))
    text = serialize_trace(trace_document(pumped, "pumped"))
    _write(text, args.out)
    return EXIT_OK


_SINGLE_CHECKS: dict[str, Callable[..., SimCheckReport]] = {
    "monotonic": check_representation_monotonic,
    "clean": check_clean_mapping_report,
    "follows": check_follows,
    "productions": check_equivalent_productions,
    "models": check_models,
    "directedness": check_directedness_preservation,
}


def cmd_simcheck(args: argparse.Namespace) -> int:
    text = _read(args.setup)
    try:
        doc = parse_setup(text)
    except ParseError as err:
        _usage_fail(f"{args.setup}: line {err.line}: {err.message}")
    except SchemaVersionUnsupported as err:
        _usage_fail(f"{args.setup}: {err}")
    if args.check == "all":
        reports = run_all_checks(doc.setup, bound=args.bound)
        ordered = [reports[name] for name in CHECK_NAMES]
    else:
        ordered = [_SINGLE_CHECKS[args.check](doc.setup, args.bound)]
    _emit(
        {
            "checks": [
                {
                    "check": r.check,
                    "status": r.status,
                    "bound": r.bound,
                    "detail": r.detail,
                    "witness": _jsonable(r.witness),
                }
                for r in ordered
            ]
        }
    )
    if any(r.failed for r in ordered):
        return EXIT_FAIL
    if any(r.status == "unknown" for r in ordered):
        return EXIT_UNKNOWN
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    try:
        if args.kind == "ab":
            system = gen_undirected_ab(variant_by_name(args.variant))
        elif args.kind == "blocking-counters":
            system = gen_blocking_counters(args.iterations)
        elif args.kind == "rectangle-arms":
            system = gen_rectangle_arms()
        else:
            system = gen_chambers(args.height)
    except ValueError as err:
        _usage_fail(str(err))
    _write(serialize_system(SystemDocument(args.kind, system)), args.out)
    return EXIT_OK


def cmd_scenario(args: argparse.Namespace) -> int:
    try:
        if args.kind == "pump-arm":
            result = scenario_pump_arm(args.iterations, prefix_drops=args.prefix_drops)
        elif args.kind == "seal-rectangle":
            height = 12 if args.height is None else args.height
            result = scenario_seal_rectangle(args.east_length, height)
        else:
            height = 6 if args.height is None else args.height
            result = scenario_plug_chambers(height, args.inner_height)
    except ValueError as err:
        _usage_fail(str(err))
    _emit(
        {
            "assertions": dict(result.assertions),
            "allHold": result.all_hold(),
            "checkpoints": {
                name: len(assembly) for name, assembly in result.checkpoints.items()
            },
        }
    )
    return EXIT_OK if result.all_hold() else EXIT_FAIL


def cmd_render(args: argparse.Namespace) -> int:
    text = _read(args.document)
    try:
        fmt = json.loads(text).get("format", "")
    except json.JSONDecodeError as err:
        _usage_fail(f"{args.document}: {err.msg}")
    if isinstance(fmt, str) and fmt.startswith("trace"):
        try:
            doc = parse_trace(text)
        except (ParseError, SchemaVersionUnsupported) as err:
            _usage_fail(f"{args.document}: {err}")
        if doc.system is None:
            base = os.path.dirname(args.document) if args.document != "-" else "."
            system = _load_system(os.path.join(base, doc.system_path)).system
        else:
            system = doc.system.system
        assembly = doc.trace(system).result()
        tile_set = system.tile_set
    else:
        try:
            sdoc = parse_system(text)
        except (ParseError, SchemaVersionUnsupported) as err:
            _usage_fail(f"{args.document}: {err}")
        assembly = sdoc.system.seed
        tile_set = sdoc.system.tile_set
    try:
        svg = render_svg(
            assembly,
            tile_set,
            scale=args.scale,
            slice_z=args.slice_z,
            highlight_constrained=args.highlight_constrained,
        )
    except (SliceOutOfRange, ValueError) as err:
        _usage_fail(str(err))
    _write(svg, args.out)
    return EXIT_OK


def cmd_embed3d(args: argparse.Namespace) -> int:
    doc = _load_system(args.system)
    variant = variant_by_name(args.variant) if args.variant else None
    try:
        embedded = embed_2d_in_3d(doc.system, variant)
    except ValueError as err:
        _usage_fail(str(err))
    _write(serialize_system(SystemDocument(doc.name, embedded)), args.out)
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace) -> int:
    try:
        if args.bound == "pumping":
            value = pumping_bound(PumpingBoundInput(args.dimension, args.c, args.n))
            _emit({"bound": value})
        else:
            b, h = chamber_bounds(args.c, args.pump)
            _emit({"crossSection": b, "height": h})
    except ValueError as err:
        _usage_fail(str(err))
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from .api import serve

    serve(host=args.host, port=args.port)
    return EXIT_OK


# --------------------------------------------------------------------------
# Parser wiring.


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tilebench", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a system document's invariants")
    p.add_argument("system")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="seeded random growth to a trace document")
    p.add_argument("system")
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=1000)
    p.add_argument("--trace-out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("frontier", help="list possible attachments")
    p.add_argument("system", nargs="?")
    p.add_argument("--trace", help="replay this trace first instead of the seed")
    p.set_defaults(func=cmd_frontier)

    p = sub.add_parser("explore", help="bounded breadth-first producible search")
    p.add_argument("system")
    p.add_argument("--max-tiles", type=int, default=12)
    p.add_argument("--state-budget", type=int, default=1_000_000)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("directed", help="decide unique-terminal within a bound")
    p.add_argument("system")
    p.add_argument("--max-tiles", type=int, default=12)
    p.set_defaults(func=cmd_directed)

    movie = sub.add_parser("movie", help="window-movie operations")
    movie_sub = movie.add_subparsers(dest="movie_command", required=True)

    p = movie_sub.add_parser("extract", help="record the movie along a window")
    p.add_argument("trace")
    p.add_argument("--window", required=True, help="window JSON (box or edges)")
    p.set_defaults(func=cmd_movie_extract)

    p = movie_sub.add_parser("find-window", help="search matching window pairs")
    p.add_argument("trace")
    p.add_argument("--template", required=True, help="window JSON template")
    p.add_argument(
        "--translations",
        required=True,
        help='candidate offsets, e.g. "0,-1;0,-2"',
    )
    p.add_argument("--mode", choices=("full", "bond_forming"), default="full")
    p.set_defaults(func=cmd_movie_find_window)

    p = movie_sub.add_parser("splice", help="merge two traces over a window")
    p.add_argument("trace_a")
    p.add_argument("trace_b")
    p.add_argument("--window", required=True)
    p.add_argument("--c", required=True, help='translation, e.g. "0,-1"')
    p.add_argument("--mode", choices=("full", "bond_forming"), default="full")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_movie_splice)

    p = movie_sub.add_parser("pump", help="iterate a matching-window splice")
    p.add_argument("trace")
    p.add_argument("--window", required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--repetitions", type=int)
    p.add_argument("--until-blocked", action="store_true")
    p.add_argument("--mode", choices=("full", "bond_forming"), default="full")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_movie_pump)

    p = sub.add_parser("simcheck", help="bounded macrotile-simulation checks")
    p.add_argument("setup")
    p.add_argument(
        "--check",
        choices=("all",) + CHECK_NAMES,
        default="all",
    )
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    p.set_defaults(func=cmd_simcheck)

    p = sub.add_parser("gen", help="generate a built-in study system")
    p.add_argument(
        "kind", choices=("ab", "blocking-counters", "rectangle-arms", "chambers")
    )
    p.add_argument("--variant", default="atam", help="ab only: target variant")
    p.add_argument("--iterations", type=int, default=1, help="blocking-counters only")
    p.add_argument("--height", type=int, default=4, help="chambers only")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("scenario", help="run a scripted mechanism scenario")
    p.add_argument("kind", choices=("pump-arm", "seal-rectangle", "plug-chambers"))
    p.add_argument("--iterations", type=int, default=8, help="pump-arm only")
    p.add_argument("--prefix-drops", type=int, default=3, help="pump-arm only")
    p.add_argument("--east-length", type=int, default=8, help="seal-rectangle only")
    p.add_argument(
        "--height", type=int, default=None,
        help="seal-rectangle wall height / plug-chambers chamber height",
    )
    p.add_argument("--inner-height", type=int, default=3, help="plug-chambers only")
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("render", help="draw a system seed or trace result as SVG")
    p.add_argument("document", help="tilesystem/1 or trace/1 file")
    p.add_argument("--scale", type=int, default=24)
    p.add_argument("--slice-z", type=int, default=None)
    p.add_argument("--highlight-constrained", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("embed3d", help="lift a 2D system into the z=0 plane")
    p.add_argument("system")
    p.add_argument("--variant", choices=("atam3d", "satam"), default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_embed3d)

    bounds = sub.add_parser("bounds", help="proof-constant arithmetic")
    bounds_sub = bounds.add_subparsers(dest="bound", required=True)
    p = bounds_sub.add_parser("pumping", help="matching-window existence bound")
    p.add_argument("--dimension", type=int, choices=(2, 3), required=True)
    p.add_argument("--c", type=int, required=True, help="window scale")
    p.add_argument("--n", type=int, required=True, help="tile-set size")
    p.set_defaults(func=cmd_bounds)
    p = bounds_sub.add_parser("chamber", help="chamber cross-section and height")
    p.add_argument("--c", type=int, required=True, help="window scale")
    p.add_argument("--pump", type=int, required=True, help="pumping bound p")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("serve", help="run the HTTP session API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Exit as stop:
        return stop.code


if __name__ == "__main__":
    sys.exit(main())

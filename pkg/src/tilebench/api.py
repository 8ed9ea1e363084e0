"""HTTP session API: interactive assembly exploration over the wire.

A session wraps one tile system and a growing trace. Clients create a session
by posting a ``tilesystem/1`` document, then read the assembly, frontier, and
constrained cells, attach frontier placements one at a time, undo, extract
window movies, and preview splices — all without ever simulating client-side,
so every view is byte-consistent with the engine.

Sessions live in memory. Within a session, mutations are strictly serialized
under a lock and bump a monotonically increasing revision; a mutation may
carry the revision it was computed against, and a mismatch is rejected with
409 so a stale client refreshes instead of corrupting the trace. Reads snapshot
under the same lock and report the revision they saw. Error responses carry a
machine-readable ``kind``: unknown sessions are 404, stale revisions 409, and
rejected placements 422 with the attachment failure kind (``occupied``,
``unknown-tile``, ``insufficient-strength``, or ``constrained``).
"""

from __future__ import annotations

import json
import threading
import uuid
from typing import Any

from fastapi import Body, FastAPI, HTTPException, Response

from .documents import (
    ParseError,
    SchemaVersionUnsupported,
    SystemDocument,
    assembly_to_obj,
    parse_system,
    parse_trace,
    placement_from_obj,
    placement_to_obj,
    serialize_trace,
    trace_document,
    window_from_obj,
)
from .core import Assembly
from .dynamics import (
    AssemblyTrace,
    AttachError,
    ConstrainedLocation,
    InsufficientStrength,
    OccupiedLocation,
    Placement,
    UnknownTile,
    attach,
    constrained_cells,
    frontier,
)
from .movies import (
    InvalidWindow,
    MovieMismatch,
    SpliceStepInvalid,
    extract_movie,
    splice,
)

_ATTACH_KINDS = {
    OccupiedLocation: "occupied",
    UnknownTile: "unknown-tile",
    InsufficientStrength: "insufficient-strength",
    ConstrainedLocation: "constrained",
}


class _Session:
    """One system plus its growing trace; all access goes through ``lock``."""

    def __init__(self, doc: SystemDocument):
        self.lock = threading.Lock()
        self.doc = doc
        self.system = doc.system
        self.revision = 0
        self.steps: list[Placement] = []
        self.assemblies: list[Assembly] = [doc.system.seed]

    @property
    def assembly(self) -> Assembly:
        return self.assemblies[-1]

    def trace(self) -> AssemblyTrace:
        return AssemblyTrace(self.system, tuple(self.steps))


def _error(status: int, kind: str, message: str, **extra: Any) -> HTTPException:
    return HTTPException(status, {"kind": kind, "message": message, **extra})


def create_app() -> FastAPI:
    """A fresh service instance with its own empty in-memory session store."""
    app = FastAPI(title="tilebench sessions", docs_url=None, redoc_url=None)
    sessions: dict[str, _Session] = {}
    store_lock = threading.Lock()

    def get_session(session_id: str) -> _Session:
        with store_lock:
            session = sessions.get(session_id)
        if session is None:
            raise _error(404, "unknown-session", f"no session {session_id!r}")
        return session

    def check_revision(session: _Session, payload: dict) -> None:
        claimed = payload.get("revision")
        if claimed is None:
            return
        if isinstance(claimed, bool) or not isinstance(claimed, int):
            raise _error(422, "invalid-request", "revision must be an integer")
        if claimed != session.revision:
            raise _error(
                409,
                "stale-revision",
                f"mutation computed against revision {claimed}, "
                f"session is at {session.revision}",
                current=session.revision,
            )

    @app.post("/sessions")
    def create_session(payload: dict = Body(...)) -> dict:
        system_obj = payload.get("system")
        if not isinstance(system_obj, dict):
            raise _error(422, "invalid-request", 'body must carry a "system" object')
        try:
            doc = parse_system(json.dumps(system_obj, indent=2))
        except ParseError as err:
            raise _error(422, "parse-error", err.message, line=err.line)
        except SchemaVersionUnsupported as err:
            raise _error(422, "schema-version", str(err), format=err.format_tag)
        session = _Session(doc)
        session_id = uuid.uuid4().hex
        with store_lock:
            sessions[session_id] = session
        return {"sessionId": session_id, "name": doc.name, "revision": 0}

    @app.get("/sessions/{session_id}/assembly")
    def get_assembly(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            return {
                "revision": session.revision,
                "dimension": session.system.variant.dimension,
                "placements": assembly_to_obj(session.assembly),
            }

    @app.get("/sessions/{session_id}/frontier")
    def get_frontier(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            options = frontier(session.system, session.assembly)
            return {
                "revision": session.revision,
                "frontier": [placement_to_obj(p) for p in options],
            }

    @app.get("/sessions/{session_id}/constrained")
    def get_constrained(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            cells = sorted(constrained_cells(session.assembly))
            return {
                "revision": session.revision,
                "cells": [list(c) for c in cells],
            }

    @app.post("/sessions/{session_id}/attach")
    def post_attach(session_id: str, payload: dict = Body(...)) -> dict:
        session = get_session(session_id)
        with session.lock:
            check_revision(session, payload)
            try:
                placement = placement_from_obj(
                    payload.get("placement"),
                    session.system.variant.dimension,
                )
            except ValueError as err:
                raise _error(422, "invalid-placement", str(err))
            try:
                grown = attach(session.system, session.assembly, placement)
            except AttachError as err:
                kind = _ATTACH_KINDS.get(type(err), "attach-error")
                raise _error(422, kind, str(err))
            session.steps.append(placement)
            session.assemblies.append(grown)
            session.revision += 1
            return {
                "revision": session.revision,
                "placement": placement_to_obj(placement),
            }

    @app.post("/sessions/{session_id}/undo")
    def post_undo(session_id: str, payload: dict = Body(default={})) -> dict:
        session = get_session(session_id)
        with session.lock:
            check_revision(session, payload)
            if not session.steps:
                raise _error(409, "nothing-to-undo", "the trace is empty")
            undone = session.steps.pop()
            session.assemblies.pop()
            session.revision += 1
            return {
                "revision": session.revision,
                "undone": placement_to_obj(undone),
            }

    @app.post("/sessions/{session_id}/movie")
    def post_movie(session_id: str, payload: dict = Body(...)) -> dict:
        session = get_session(session_id)
        with session.lock:
            try:
                window = window_from_obj(payload.get("window"))
                movie = extract_movie(session.trace(), window)
            except (ValueError, InvalidWindow) as err:
                raise _error(422, "invalid-window", str(err))
            return {
                "revision": session.revision,
                "anchor": list(movie.anchor),
                "entries": [
                    {
                        "from": list(entry.from_),
                        "to": list(entry.to),
                        "glue": [entry.glue.label, entry.glue.strength],
                    }
                    for entry in movie.entries
                ],
            }

    @app.post("/sessions/{session_id}/splice-preview")
    def post_splice_preview(session_id: str, payload: dict = Body(...)) -> dict:
        session = get_session(session_id)
        with session.lock:
            trace_obj = payload.get("traceB")
            if not isinstance(trace_obj, dict):
                raise _error(422, "invalid-request", 'body must carry a "traceB" document')
            try:
                trace_doc = parse_trace(json.dumps(trace_obj, indent=2))
            except ParseError as err:
                raise _error(422, "parse-error", err.message, line=err.line)
            except SchemaVersionUnsupported as err:
                raise _error(422, "schema-version", str(err), format=err.format_tag)
            offset = payload.get("c")
            if (
                not isinstance(offset, list)
                or not offset
                or any(isinstance(v, bool) or not isinstance(v, int) for v in offset)
            ):
                raise _error(422, "invalid-request", '"c" must be an integer offset array')
            mode = payload.get("mode", "full")
            strict = payload.get("strict", False)
            if mode not in ("full", "bond_forming") or not isinstance(strict, bool):
                raise _error(422, "invalid-request", "bad mode or strict flag")
            try:
                window = window_from_obj(payload.get("window"))
                trace_b = (
                    trace_doc.trace()
                    if trace_doc.system is not None
                    else trace_doc.trace(session.system)
                )
                merged = splice(
                    session.trace(), trace_b, window, tuple(offset),
                    mode=mode, strict=strict,
                )
            except (ValueError, InvalidWindow) as err:
                raise _error(422, "invalid-window", str(err))
            except MovieMismatch as err:
                raise _error(422, "movie-mismatch", str(err))
            except SpliceStepInvalid as err:
                raise _error(422, "splice-step-invalid", str(err))
            return {
                "revision": session.revision,
                "steps": [placement_to_obj(p) for p in merged.steps],
                "placements": assembly_to_obj(merged.result()),
            }

    @app.get("/sessions/{session_id}/trace")
    def get_trace(session_id: str) -> Response:
        session = get_session(session_id)
        with session.lock:
            doc = trace_document(session.trace(), session.doc.name)
            text = serialize_trace(doc)
        return Response(content=text, media_type="application/json")

    @app.delete("/sessions/{session_id}")
    def delete_session(session_id: str) -> dict:
        with store_lock:
            if session_id not in sessions:
                raise _error(404, "unknown-session", f"no session {session_id!r}")
            del sessions[session_id]
        return {"deleted": session_id}

    return app


def serve(host: str = "127.0.0.1", port: int = 8000) -> None:
    """Run the session service until interrupted."""
    import uvicorn

    uvicorn.run(create_app(), host=host, port=port, log_level="warning")

"""HTTP facade over teaching sessions.

One directory per session under a configurable root; mutations on a session
are serialized by a per-session lock (a busy session answers 409 rather
than queueing, so callers can retry with fresh state).  Responses carry the
session's revision and iteration counters for optimistic concurrency.
"""

from __future__ import annotations

import re
import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Form, HTTPException, Request, UploadFile
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from .catalog import PatternConfig
from .errors import GridloomError, StaleModelError, TrainingError
from .grid import emit_image, emit_text, ingest_image, ingest_text
from .session import TeachingSession

_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_-]{0,63}$")


class CreateSessionRequest(BaseModel):
    id: Optional[str] = None
    n: int = 3
    wrap_input: bool = True
    symmetry: list = []
    strategy: str = "mgg-neg"


class CropRequest(BaseModel):
    sample_id: str
    rect: list
    label: str = "negative"


class PortfolioRequest(BaseModel):
    count: int = 6
    seed: int = 0
    width: int = 32
    height: int = 32
    wrap: bool = True
    max_restarts: int = 9


def create_app(session_root, ui_dir=None) -> FastAPI:
    session_root = Path(session_root)
    session_root.mkdir(parents=True, exist_ok=True)
    app = FastAPI(title="gridloom", version="1.0.0")

    sessions: dict = {}
    locks: dict = {}
    registry_lock = threading.Lock()

    def get_session(sid: str) -> TeachingSession:
        with registry_lock:
            session = sessions.get(sid)
            if session is not None:
                return session
            root = session_root / sid
            if (root / "manifest.json").exists():
                session = TeachingSession.load(root)
                sessions[sid] = session
                locks[sid] = threading.Lock()
                return session
        raise HTTPException(status_code=404, detail=f"no session {sid!r}")

    def mutation_lock(sid: str) -> threading.Lock:
        get_session(sid)
        lock = locks[sid]
        if not lock.acquire(blocking=False):
            raise HTTPException(
                status_code=409, detail="session is busy with another mutation"
            )
        return lock

    def state(sid: str) -> dict:
        return {"id": sid, **sessions[sid].describe()}

    @app.exception_handler(GridloomError)
    def _domain_error(request: Request, exc: GridloomError):
        code = 409 if isinstance(exc, (StaleModelError, TrainingError)) else 400
        return JSONResponse(status_code=code, content={"error": str(exc)})

    @app.exception_handler(KeyError)
    def _missing(request: Request, exc: KeyError):
        detail = exc.args[0] if exc.args else str(exc)
        return JSONResponse(status_code=404, content={"error": str(detail)})

    @app.get("/sessions")
    def list_sessions():
        known = set(sessions)
        for child in session_root.iterdir() if session_root.exists() else ():
            if (child / "manifest.json").exists():
                known.add(child.name)
        return {"sessions": sorted(known)}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionRequest):
        with registry_lock:
            sid = body.id
            if sid is not None:
                if not _ID_RE.match(sid):
                    raise HTTPException(status_code=400, detail="invalid session id")
                if sid in sessions or (session_root / sid / "manifest.json").exists():
                    raise HTTPException(status_code=409, detail=f"session {sid!r} exists")
            else:
                k = len(sessions) + 1
                while True:
                    sid = f"sess{k:04d}"
                    if sid not in sessions and not (session_root / sid).exists():
                        break
                    k += 1
            cfg = PatternConfig(
                n=body.n, wrap_input=body.wrap_input, symmetry=frozenset(body.symmetry)
            )
            sessions[sid] = TeachingSession(
                cfg, strategy=body.strategy, root=session_root / sid
            )
            locks[sid] = threading.Lock()
        return state(sid)

    @app.get("/sessions/{sid}")
    def get_state(sid: str):
        get_session(sid)
        return state(sid)

    @app.post("/sessions/{sid}/examples", status_code=201)
    def add_example(
        sid: str,
        file: UploadFile,
        label: str = Form(...),
        origin: str = Form("authored"),
        wrap: Optional[bool] = Form(None),
    ):
        lock = mutation_lock(sid)
        try:
            session = sessions[sid]
            data = file.file.read()
            if (file.filename or "").endswith(".txt"):
                grid = ingest_text(data.decode("utf-8"))
            else:
                grid = ingest_image(data)
            example = session.add_example(grid, label, origin={"kind": origin}, wrap=wrap)
            return {
                "example": {
                    "id": example.id,
                    "label": example.label,
                    "origin": example.origin,
                    "wrap": example.wrap,
                    "width": example.grid.width,
                    "height": example.grid.height,
                },
                "revision": session.revision,
                "iteration": session.iteration,
                "training_status": session.status,
            }
        finally:
            lock.release()

    @app.delete("/sessions/{sid}/examples/{eid}")
    def delete_example(sid: str, eid: str):
        lock = mutation_lock(sid)
        try:
            session = sessions[sid]
            session.remove_example(eid)
            return state(sid)
        finally:
            lock.release()

    @app.get("/sessions/{sid}/examples/{eid}.png")
    def example_image(sid: str, eid: str):
        session = get_session(sid)
        example = session.get_example(eid)
        return Response(content=emit_image(example.grid), media_type="image/png")

    @app.post("/sessions/{sid}/examples/crop", status_code=201)
    def crop_example(sid: str, body: CropRequest):
        lock = mutation_lock(sid)
        try:
            session = sessions[sid]
            if len(body.rect) != 4:
                raise HTTPException(status_code=400, detail="rect must be [x,y,w,h]")
            example = session.add_cropped_example(
                body.sample_id, tuple(body.rect), body.label
            )
            return {
                "example": {
                    "id": example.id,
                    "label": example.label,
                    "origin": example.origin,
                    "wrap": example.wrap,
                    "width": example.grid.width,
                    "height": example.grid.height,
                },
                "revision": session.revision,
                "iteration": session.iteration,
                "training_status": session.status,
            }
        finally:
            lock.release()

    @app.post("/sessions/{sid}/retrain")
    def retrain(sid: str):
        lock = mutation_lock(sid)
        try:
            session = sessions[sid]
            record = session.retrain()
            model = session.model
            return {
                "iteration": record.iteration,
                "revision": session.revision,
                "validity_digest": record.validity_digest,
                "catalog_digest": record.catalog_digest,
                "patterns": len(model.catalog),
                "valid_triples": len(model.valid.triples),
                "starved": len(model.starved),
                "training_status": session.status,
            }
        finally:
            lock.release()

    @app.get("/sessions/{sid}/validity")
    def validity(sid: str):
        session = get_session(sid)
        return {
            "digest": session.validity_digest(),
            "iteration": session.iteration,
            "export": session.validity_document(),
        }

    @app.post("/sessions/{sid}/portfolio", status_code=201)
    def portfolio(sid: str, body: PortfolioRequest):
        lock = mutation_lock(sid)
        try:
            session = sessions[sid]
            session.generate_portfolio(
                count=body.count,
                base_seed=body.seed,
                out_width=body.width,
                out_height=body.height,
                wrap_output=body.wrap,
                max_restarts=body.max_restarts,
            )
            return {
                "revision": session.revision,
                "iteration": session.iteration,
                "portfolio": session.latest_portfolio,
            }
        finally:
            lock.release()

    @app.get("/sessions/{sid}/samples/{sample_id}.png")
    def sample_image(sid: str, sample_id: str):
        session = get_session(sid)
        return Response(content=session.sample_image(sample_id), media_type="image/png")

    @app.get("/sessions/{sid}/samples/{sample_id}.txt")
    def sample_text(sid: str, sample_id: str):
        session = get_session(sid)
        return Response(
            content=emit_text(session.sample_grid(sample_id)), media_type="text/plain"
        )

    @app.get("/sessions/{sid}/samples/{sample_id}.json")
    def sample_document(sid: str, sample_id: str):
        session = get_session(sid)
        return session.sample_document(sample_id)

    @app.get("/sessions/{sid}/diff")
    def diff(sid: str, a: int, b: int):
        session = get_session(sid)
        return session.diff(a, b)

    if ui_dir is not None and Path(ui_dir).exists():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app

"""HTTP session service for the interactive loop.

Upload a channel stack once, draw scribbles, compute a distance map per
method, then re-threshold as fast as the slider moves. The expensive solve
happens once per (scribbles, method, params) and is cached on the session;
thresholding a cached normalized map is a single vector comparison, which is
what keeps the loop interactive.

Sessions live in memory and expire after an idle TTL. Within a session,
scribble updates bump a generation counter and drop every cached map, so a
map computed for stale scribbles is never served after the update is
acknowledged. Duplicate distance requests for the same key coalesce onto one
computation, and a per-session lock keeps at most one solver running per
session at a time.
"""

from __future__ import annotations

import io
import threading
import time
import uuid
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Query, Request, Response
from fastapi.responses import HTMLResponse, JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .core import (
    BinaryMask,
    ChannelStack,
    CstError,
    DistanceMap,
    PgmError,
    ScribbleSet,
    channel_stack_from_bytes,
    mask_from_pgm_bytes,
    mask_to_pgm_bytes,
)
from .distance import DistanceParams, euclidean_edt, geodesic_raster
from .harness import METHOD_NAMES, build_variants
from .segment import dice, dice_sweep, normalize_map, threshold_segment

DEFAULT_TTL_SECONDS = 30 * 60
DEFAULT_ITERS = 4


@dataclass
class _CachedMap:
    dmap: DistanceMap            # normalized
    min_raw: float
    max_raw: float
    lam: float
    iters: int
    generation: int

    def matches(self, lam: float, iters: int, generation: int) -> bool:
        return (self.lam == lam and self.iters == iters
                and self.generation == generation)


@dataclass
class _Session:
    id: str
    stack: ChannelStack
    last_touched: float
    gt: BinaryMask | None = None
    scribbles: ScribbleSet | None = None
    generation: int = 0
    variants: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)       # method -> _CachedMap
    futures: dict = field(default_factory=dict)    # compute key -> Future
    lock: threading.Lock = field(default_factory=threading.Lock)
    solver_lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    def __init__(self, ttl_seconds: float, clock=time.monotonic):
        self._sessions: dict[str, _Session] = {}
        self._lock = threading.Lock()
        self._ttl = ttl_seconds
        self._clock = clock

    def create(self, stack: ChannelStack, gt: BinaryMask | None = None) -> _Session:
        session = _Session(id=uuid.uuid4().hex, stack=stack, gt=gt,
                           last_touched=self._clock())
        with self._lock:
            self._purge_expired()
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> _Session:
        with self._lock:
            self._purge_expired()
            session = self._sessions.get(session_id)
            if session is None:
                raise HTTPException(404, f"unknown session {session_id}")
            session.last_touched = self._clock()
            return session

    def _purge_expired(self):
        now = self._clock()
        dead = [sid for sid, s in self._sessions.items()
                if now - s.last_touched > self._ttl]
        for sid in dead:
            del self._sessions[sid]


def create_app(static_dir=None, ttl_seconds: float = DEFAULT_TTL_SECONDS,
               workers: int = 4, clock=time.monotonic) -> FastAPI:
    from concurrent.futures import ThreadPoolExecutor

    executor = ThreadPoolExecutor(max_workers=workers)

    @asynccontextmanager
    async def lifespan(_app):
        yield
        executor.shutdown(wait=False, cancel_futures=True)

    app = FastAPI(title="scribseg", docs_url=None, redoc_url=None,
                  lifespan=lifespan)
    store = SessionStore(ttl_seconds, clock=clock)
    app.state.store = store
    app.state.executor = executor

    @app.get("/healthz")
    def healthz():
        return PlainTextResponse("ok")

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        blob = await request.body()
        try:
            stack = channel_stack_from_bytes(blob)
        except (CstError, ValueError) as exc:
            raise HTTPException(400, f"malformed CST upload: {exc}")
        session = store.create(stack)
        return {"id": session.id, "height": stack.height,
                "width": stack.width, "channels": stack.channels}

    @app.put("/sessions/{session_id}/gt", status_code=204)
    async def put_gt(session_id: str, request: Request):
        session = store.get(session_id)
        try:
            gt = mask_from_pgm_bytes(await request.body())
        except (PgmError, ValueError) as exc:
            raise HTTPException(400, f"malformed PGM upload: {exc}")
        if (gt.height, gt.width) != (session.stack.height, session.stack.width):
            raise HTTPException(
                422, "ground truth dimensions do not match the stack")
        with session.lock:
            session.gt = gt
        return Response(status_code=204)

    @app.put("/sessions/{session_id}/scribbles", status_code=204)
    async def put_scribbles(session_id: str, request: Request):
        session = store.get(session_id)
        try:
            payload = await request.json()
        except Exception:
            raise HTTPException(422, "scribbles must be a JSON array")
        if not isinstance(payload, list):
            raise HTTPException(422, "scribbles must be a JSON array")
        try:
            points = tuple((int(p["x"]), int(p["y"]), int(p.get("label", 1)))
                           for p in payload)
            scribbles = ScribbleSet(points=points,
                                    height=session.stack.height,
                                    width=session.stack.width)
        except (TypeError, KeyError, ValueError) as exc:
            raise HTTPException(422, f"bad scribble points: {exc}")
        if not scribbles.has_foreground:
            raise HTTPException(422, "scribbles need at least one foreground point")
        with session.lock:
            session.scribbles = scribbles
            session.generation += 1
            session.maps.clear()
            session.futures.clear()
        return Response(status_code=204)

    def _compute_map(session: _Session, method: str, lam: float, iters: int,
                     generation: int, scribbles: ScribbleSet):
        # one solver at a time per session; duplicates wait on the future
        with session.solver_lock:
            start = time.perf_counter()
            if method == "euclidean":
                raw = euclidean_edt(scribbles, session.stack.height,
                                    session.stack.width)
            else:
                with session.lock:
                    stack = session.variants.get(method)
                if stack is None:
                    stack = build_variants(session.stack, {method})[method]
                    with session.lock:
                        session.variants[method] = stack
                params = DistanceParams(lam=lam, max_iterations=iters)
                raw = geodesic_raster(stack, scribbles, params)
            entry = _CachedMap(
                dmap=normalize_map(raw),
                min_raw=float(raw.data.min()),
                max_raw=float(raw.data.max()),
                lam=lam, iters=iters, generation=generation,
            )
            elapsed_ms = (time.perf_counter() - start) * 1000.0
        with session.lock:
            if session.generation == generation:
                session.maps[method] = entry
            session.futures.pop((method, lam, iters, generation), None)
        return entry, elapsed_ms

    def _validate_method(method: str) -> str:
        if method not in METHOD_NAMES:
            raise HTTPException(
                422, f"method must be one of {', '.join(METHOD_NAMES)}")
        return method

    @app.post("/sessions/{session_id}/distance")
    def compute_distance(session_id: str, method: str = Query(...),
                         lam: float = Query(1.0, alias="lambda"),
                         iters: int = Query(DEFAULT_ITERS)):
        session = store.get(session_id)
        _validate_method(method)
        try:
            DistanceParams(lam=lam, max_iterations=iters)
        except ValueError as exc:
            raise HTTPException(422, str(exc))
        with session.lock:
            entry = session.maps.get(method)
            if entry and entry.matches(lam, iters, session.generation):
                return {"method": method, "min_raw": entry.min_raw,
                        "max_raw": entry.max_raw, "compute_ms": 0.0}
            if session.scribbles is None:
                raise HTTPException(409, "no scribbles set for this session")
            key = (method, lam, iters, session.generation)
            future = session.futures.get(key)
            if future is None:
                future = executor.submit(
                    _compute_map, session, method, lam, iters,
                    session.generation, session.scribbles)
                session.futures[key] = future
        entry, elapsed_ms = future.result()
        return {"method": method, "min_raw": entry.min_raw,
                "max_raw": entry.max_raw, "compute_ms": elapsed_ms}

    def _cached_map(session: _Session, method: str) -> _CachedMap:
        with session.lock:
            entry = session.maps.get(method)
            if entry is None or entry.generation != session.generation:
                raise HTTPException(
                    409, f"no cached distance map for method {method!r}; "
                         "POST /distance first")
            return entry

    @app.get("/sessions/{session_id}/segmentation")
    def get_segmentation(session_id: str, method: str = Query(...),
                         t: float = Query(...)):
        session = store.get(session_id)
        _validate_method(method)
        if not 0.0 <= t <= 1.0:
            raise HTTPException(422, f"threshold must be in [0, 1], got {t}")
        entry = _cached_map(session, method)
        mask = threshold_segment(entry.dmap, t)
        headers = {}
        if session.gt is not None:
            headers["X-Dice"] = f"{dice(mask, session.gt):.10f}"
        return Response(content=mask_to_pgm_bytes(mask),
                        media_type="image/x-portable-graymap",
                        headers=headers)

    @app.get("/sessions/{session_id}/dice-curve")
    def get_dice_curve(session_id: str, method: str = Query(...),
                       steps: int = Query(256), format: str = Query("json")):
        session = store.get(session_id)
        _validate_method(method)
        if session.gt is None:
            raise HTTPException(409, "no ground truth uploaded")
        entry = _cached_map(session, method)
        curve = dice_sweep(entry.dmap, session.gt, n_steps=steps)
        if format == "csv":
            return PlainTextResponse(curve.to_csv(), media_type="text/csv")
        return JSONResponse({
            "method": method,
            "thresholds": curve.thresholds.tolist(),
            "dice": curve.dice.tolist(),
            "best_threshold": curve.best_threshold,
            "best_dice": curve.best_dice,
        })

    @app.get("/sessions/{session_id}/preview")
    def get_preview(session_id: str, c: int | None = Query(None),
                    rgb: str | None = Query(None)):
        session = store.get(session_id)
        try:
            png = _render_preview(session.stack, c, rgb)
        except ValueError as exc:
            raise HTTPException(422, str(exc))
        return Response(content=png, media_type="image/png")

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True),
                  name="ui")
    else:
        @app.get("/")
        def index():
            return HTMLResponse(
                "<!doctype html><title>scribseg</title>"
                "<p>scribseg service is running. No UI assets configured; "
                "start with --data pointing at the built frontend.</p>")

    return app


def _render_preview(stack: ChannelStack, c: int | None, rgb: str | None) -> bytes:
    """Scale selected channels to 8 bit and encode as PNG.

    Defaults: 3-channel stacks pass through as RGB, wider stacks collapse to
    RGB via the band-third weights, and 1-2 channel stacks show channel 0.
    Constant data maps to 0.
    """
    from PIL import Image

    from .preprocess import rgb_reconstruct

    if c is not None and rgb is not None:
        raise ValueError("pass either c or rgb, not both")
    if c is not None:
        if not 0 <= c < stack.channels:
            raise ValueError(f"channel {c} out of range")
        data = stack.data[:, :, c]
        mode = "L"
    elif rgb is not None:
        try:
            idx = [int(v) for v in rgb.split(",")]
        except ValueError:
            raise ValueError("rgb must be three comma-separated channel indices")
        if len(idx) != 3 or any(not 0 <= i < stack.channels for i in idx):
            raise ValueError(f"rgb indices out of range: {rgb}")
        data = stack.data[:, :, idx]
        mode = "RGB"
    elif stack.channels == 3:
        data = stack.data
        mode = "RGB"
    elif stack.channels > 3:
        data = rgb_reconstruct(stack).data
        mode = "RGB"
    else:
        data = stack.data[:, :, 0]
        mode = "L"

    data = data.astype(np.float64)
    lo, hi = float(data.min()), float(data.max())
    if hi == lo:
        scaled = np.zeros_like(data)
    else:
        scaled = (data - lo) / (hi - lo) * 255.0
    img = Image.fromarray(np.round(scaled).astype(np.uint8), mode=mode)
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()

"""Local HTTP service backing the interactive annotation workflow.

Sessions live in memory. Every computational endpoint delegates to the
library: responses are byte-identical to calling the underlying function,
the service adds no semantics of its own.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse, Response
from pydantic import BaseModel

from .attention import Stroke, classify_assistance, coverage_ratio, rasterize, sketch_length
from .dataset import canonical_json, classify_scale
from .errors import PsobError
from .geometry import (
    Ring,
    classify_curvature,
    curvature_count,
    total_area,
    total_perimeter,
)
from .raster import polygon_mask

PREDICT_STUB_DETAIL = (
    "model inference is not implemented; plug a predictor into "
    "create_app(predictor=...) to serve real masks"
)


@dataclass
class Session:
    """One annotation session: fixed image dims, append-only strokes."""

    session_id: str
    width: int
    height: int
    image_path: str | None = None
    gt_rings: tuple[Ring, ...] = ()
    strokes: list[Stroke] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


def _stroke_closure(strokes) -> tuple[Ring, ...]:
    """Close the concatenated stroke points into a polygon, if they admit one."""
    pts = []
    for stroke in strokes:
        for p in stroke.points:
            if not pts or (p.x, p.y) != pts[-1]:
                pts.append((p.x, p.y))
    while len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    if len(pts) < 3:
        return ()
    try:
        return (Ring(pts),)
    except PsobError:
        return ()


def analyze_session(session: Session) -> dict:
    """Classification summary of a session's ground truth and strokes.

    With GT rings, curvature/scale come from the GT and coverage is sketch
    length over GT perimeter; the reported IoU compares a rasterized closure
    of the strokes against the GT and is a preview, not a model prediction.
    Without GT, the stroke closure polygon stands in and IoU is omitted.
    """
    if not session.strokes and not session.gt_rings:
        return {"empty": True}

    strokes = tuple(session.strokes)
    record: dict = {
        "empty": False,
        "stroke_count": len(strokes),
        "sketch_length": sketch_length(strokes),
        "sketch_time": sum(s.duration for s in strokes),
    }

    rings = session.gt_rings
    basis = "ground_truth"
    if not rings:
        rings = _stroke_closure(strokes)
        basis = "stroke_closure"
    if rings:
        record["basis"] = basis
        record["curvature_count"] = curvature_count(rings)
        record["curvature_class"] = classify_curvature(record["curvature_count"]).value
        record["scale_class"] = classify_scale(total_area(rings)).value
        if total_perimeter(rings) > 0:
            ratio = coverage_ratio(strokes, rings)
            record["coverage_ratio"] = ratio
            record["assistance_class"] = classify_assistance(ratio).value

    if session.gt_rings:
        closure = _stroke_closure(strokes)
        if closure:
            gt_mask = polygon_mask(session.gt_rings, session.width, session.height)
            preview = polygon_mask(closure, session.width, session.height)
            union = int((gt_mask | preview).sum())
            if union:
                record["preview_iou"] = int((gt_mask & preview).sum()) / union
                record["preview_note"] = "stroke-closure preview, not a model prediction"
    return record


def export_fragment(session: Session) -> dict:
    """A dataset-document fragment for the session (one image, one object)."""
    image = {
        "id": 1,
        "width": session.width,
        "height": session.height,
        "file_name": session.image_path or f"{session.session_id}.png",
    }
    doc: dict = {
        "split": "train",
        "images": [image],
        "categories": [{"id": 1, "name": "object"}],
        "annotations": [],
    }
    rings = session.gt_rings or _stroke_closure(session.strokes)
    if rings:
        xs = [v.x for r in rings for v in r.vertices]
        ys = [v.y for r in rings for v in r.vertices]
        w = max(xs) - min(xs)
        h = max(ys) - min(ys)
        if w > 0 and h > 0:
            strokes = list(session.strokes)
            sketch_time = sum(s.duration for s in strokes)
            if strokes:
                span = max(s.start_time + s.duration for s in strokes) - min(
                    s.start_time for s in strokes
                )
            else:
                span = 0.0
            doc["annotations"].append(
                {
                    "id": 1,
                    "image_id": 1,
                    "category_id": 1,
                    "bbox": [min(xs), min(ys), w, h],
                    "segmentation": [
                        [c for v in r.vertices for c in (v.x, v.y)] for r in rings
                    ],
                    "strokes": [
                        {
                            "points": [[p.x, p.y] for p in s.points],
                            "start_time": s.start_time,
                            "duration": s.duration,
                        }
                        for s in strokes
                    ],
                    "sketch_time": sketch_time,
                    "interaction_time": max(span, sketch_time),
                }
            )
    return doc


class SessionBody(BaseModel):
    width: int
    height: int
    image_path: str | None = None
    gt_rings: list[list[list[float]]] | None = None


class StrokeBody(BaseModel):
    points: list[list[float]]
    start_time: float = 0.0
    duration: float = 0.0


def create_app(data_root: str | Path | None = None, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="psob annotation service")
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def get_session(session_id: str) -> Session:
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        return session

    @app.get("/healthz", response_class=PlainTextResponse)
    def healthz() -> str:
        return "ok"

    @app.post("/sessions", status_code=201)
    def create_session(body: SessionBody) -> dict:
        if body.width < 1 or body.height < 1:
            raise HTTPException(status_code=400, detail="image dimensions must be positive")
        rings = ()
        if body.gt_rings:
            try:
                rings = tuple(
                    Ring([(float(x), float(y)) for x, y in ring]) for ring in body.gt_rings
                )
            except (PsobError, ValueError) as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from None
        session = Session(
            session_id=uuid.uuid4().hex,
            width=body.width,
            height=body.height,
            image_path=body.image_path,
            gt_rings=rings,
        )
        with registry_lock:
            sessions[session.session_id] = session
        return {"session_id": session.session_id}

    @app.post("/sessions/{session_id}/strokes", status_code=201)
    def add_stroke(session_id: str, body: StrokeBody) -> dict:
        session = get_session(session_id)
        try:
            stroke = Stroke(
                [(float(x), float(y)) for x, y in body.points],
                start_time=body.start_time,
                duration=body.duration,
            )
        except (PsobError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        with session.lock:
            session.strokes.append(stroke)
            count = len(session.strokes)
        return {"stroke_count": count}

    @app.get("/sessions/{session_id}/attention-map")
    def attention_map(session_id: str) -> Response:
        session = get_session(session_id)
        with session.lock:
            strokes = tuple(session.strokes)
        png = rasterize(strokes, session.width, session.height).to_png()
        return Response(content=png, media_type="image/png")

    @app.get("/sessions/{session_id}/analysis")
    def analysis(session_id: str) -> Response:
        session = get_session(session_id)
        with session.lock:
            record = analyze_session(session)
        return Response(content=canonical_json(record), media_type="application/json")

    @app.get("/sessions/{session_id}/export")
    def export(session_id: str, snapshot: bool = False) -> Response:
        session = get_session(session_id)
        with session.lock:
            doc = export_fragment(session)
        body = canonical_json(doc)
        if snapshot and data_root is not None:
            target = Path(data_root) / f"{session.session_id}.json"
            target.write_text(body, encoding="utf-8")
        return Response(content=body, media_type="application/json")

    @app.post("/predict")
    def predict() -> Response:
        raise HTTPException(status_code=501, detail=PREDICT_STUB_DETAIL)

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def serve(
    bind_address: str = "127.0.0.1:8431",
    data_root: str | Path | None = None,
    ui_dir: str | Path | None = None,
) -> None:
    """Run the service until interrupted; uvicorn drains in-flight requests."""
    import uvicorn

    host, _, port = bind_address.rpartition(":")
    uvicorn.run(
        create_app(data_root=data_root, ui_dir=ui_dir),
        host=host or "127.0.0.1",
        port=int(port),
    )

"""Read-only HTTP/JSON service over a completed pipeline session.

Every endpoint is idempotent and side-effect free; the session is built
(or loaded from artifacts) before the app starts serving.  Payload shapes
are pinned by the JSON schemas at the bottom, which the test suite
validates against every endpoint.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import numpy as np
from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .errors import ValidationError
from .ingest import Attribute
from .pipeline import SessionState, matrix_json_dict
from .search import QuerySelection, SearchHit, search_collection
from .lda import topic_spectrum
from .topics import to_json_dict, topic_colors

SCHEMA_VERSION = 1


class SearchRequest(BaseModel):
    record_id: str
    start_index: int
    length: int
    topic_mask: Optional[list[int]] = None
    top_n: int = 10


def minmax_downsample(values: np.ndarray, times: np.ndarray, width: int):
    """Peak-preserving line decimation: per bucket keep min and max.

    Returns (times, mins, maxs) with at most `width` buckets; impulses
    survive any zoom level because extremes are never averaged away.
    """
    n = values.size
    if width < 1:
        raise ValidationError("width must be >= 1")
    if n <= width:
        return times, values, values
    edges = np.linspace(0, n, width + 1).astype(int)
    t = times[edges[:-1]]
    mins = np.minimum.reduceat(values, edges[:-1])
    maxs = np.maximum.reduceat(values, edges[:-1])
    return t, mins, maxs


def signed_peak_downsample(values: np.ndarray, width: int) -> np.ndarray:
    """Per bucket keep the signed value with the largest magnitude.

    values is (n_samples, n_channels); used for heatmap transport where a
    single cell value per bucket is needed but sign still matters.
    """
    n = values.shape[0]
    if n <= width:
        return values
    edges = np.linspace(0, n, width + 1).astype(int)
    out = np.empty((width, values.shape[1]))
    for b in range(width):
        chunk = values[edges[b]:edges[b + 1]]
        idx = np.abs(chunk).argmax(axis=0)
        out[b] = chunk[idx, np.arange(chunk.shape[1])]
    return out


def create_app(session: SessionState | None = None,
               static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="quakescope")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.session = session

    def current() -> SessionState:
        if app.state.session is None:
            raise HTTPException(status_code=503, detail="pipeline has not completed")
        return app.state.session

    def record_or_404(sess: SessionState, record_id: str):
        if record_id not in sess.records:
            raise HTTPException(status_code=404, detail=f"unknown record {record_id!r}")
        return sess.records[record_id]

    @app.middleware("http")
    async def schema_version_header(request, call_next):
        response = await call_next(request)
        response.headers["X-Schema-Version"] = str(SCHEMA_VERSION)
        return response

    @app.get("/api/records")
    def list_records():
        sess = current()
        return [
            {
                "id": rid,
                "duration_s": sess.records[rid].duration_s,
                "n_channels": len(sess.records[rid].channels),
                "n_windows": sess.series[rid].n_windows,
            }
            for rid in sess.record_order
        ]

    @app.get("/api/config")
    def get_config():
        sess = current()
        return sess.config.processing_dict()

    @app.get("/api/records/{record_id}/topic-series")
    def get_topic_series(record_id: str):
        sess = current()
        record_or_404(sess, record_id)
        return to_json_dict(sess.series[record_id])

    @app.get("/api/topics/{k}/spectrum")
    def get_topic_spectrum(k: int):
        sess = current()
        if not 0 <= k < sess.model.K:
            raise HTTPException(status_code=404, detail=f"no topic {k}")
        grid = topic_spectrum(sess.model, k, sess.vocabulary)
        edges = np.linspace(0.0, sess.config.f_max_hz, sess.config.m + 1)
        return {
            "k": k,
            "grid": grid.tolist(),
            "bin_edges_hz": edges.tolist(),
            "channel_labels": list(sess.vocabulary.channels),
            "color": topic_colors(sess.model.K)[k],
        }

    @app.post("/api/search")
    def search(req: SearchRequest):
        sess = current()
        record_or_404(sess, req.record_id)
        source = sess.series[req.record_id]
        if req.length < 1 or req.start_index < 0 \
                or req.start_index + req.length > source.n_windows:
            raise HTTPException(status_code=400, detail="selection out of range")
        if req.topic_mask is not None and (
                not req.topic_mask
                or min(req.topic_mask) < 0
                or max(req.topic_mask) >= sess.model.K):
            raise HTTPException(status_code=400, detail="topic_mask out of range")
        query = QuerySelection(
            source_record_id=req.record_id,
            start_index=req.start_index,
            length=req.length,
            topic_mask=None if req.topic_mask is None else tuple(req.topic_mask),
        )
        collection = [sess.series[rid] for rid in sess.record_order]
        try:
            hits = search_collection(query, collection, top_n=req.top_n)
        except ValidationError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        hop = sess.config.hop_s
        return {
            "query": {
                "record_id": req.record_id,
                "start_index": req.start_index,
                "length": req.length,
                "topic_mask": req.topic_mask,
                "start_s": req.start_index * hop,
                "end_s": (req.start_index + req.length) * hop,
            },
            "hits": [_hit_payload(h, req.start_index, hop) for h in hits],
            "skipped": [
                {"record_id": rid, "reason":
                    f"{sess.series[rid].n_windows} windows < query length {req.length}"}
                for rid in sess.record_order
                if sess.series[rid].n_windows < req.length
            ],
        }

    @app.get("/api/matrix")
    def get_matrix():
        sess = current()
        if sess.matrix is None:
            raise HTTPException(status_code=404,
                                detail="similarity matrix needs at least two records")
        return matrix_json_dict(sess.matrix)

    @app.get("/api/records/{record_id}/heatmap")
    def get_heatmap(record_id: str, attribute: str = "shear",
                    width: int = Query(default=1024, ge=1, le=100_000),
                    start_s: float | None = None, end_s: float | None = None):
        sess = current()
        record = record_or_404(sess, record_id)
        try:
            attr = Attribute(attribute)
        except ValueError:
            raise HTTPException(status_code=404, detail=f"unknown attribute {attribute!r}")
        channels = [ch for ch in record.channels if ch.attribute == attr]
        if not channels:
            raise HTTPException(status_code=404,
                                detail=f"record has no {attribute!r} channels")
        channels.sort(key=lambda ch: ch.floor)
        grid = np.stack([ch.values for ch in channels], axis=1)
        lo, hi = _sample_range(record, start_s, end_s)
        grid = grid[lo:hi]
        t0 = lo / record.sample_rate_hz
        out = signed_peak_downsample(grid, width)
        step = (hi - lo) / out.shape[0] / record.sample_rate_hz
        return {
            "record_id": record_id,
            "attribute": attr.value,
            "floors": [ch.floor for ch in channels],
            "times_s": [t0 + b * step for b in range(out.shape[0])],
            "values": out.tolist(),
        }

    @app.get("/api/records/{record_id}/ground-accel")
    def get_ground_accel(record_id: str,
                         width: int = Query(default=1024, ge=1, le=100_000),
                         start_s: float | None = None, end_s: float | None = None):
        sess = current()
        record = record_or_404(sess, record_id)
        lo, hi = _sample_range(record, start_s, end_s)
        values = record.ground_accel[lo:hi]
        times = (lo + np.arange(values.size)) / record.sample_rate_hz
        t, mins, maxs = minmax_downsample(values, times, width)
        return {
            "record_id": record_id,
            "times_s": t.tolist(),
            "min": mins.tolist(),
            "max": maxs.tolist(),
        }

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def _sample_range(record, start_s: float | None, end_s: float | None) -> tuple[int, int]:
    n = record.n_samples
    fs = record.sample_rate_hz
    lo = 0 if start_s is None else max(0, int(np.floor(start_s * fs)))
    hi = n if end_s is None else min(n, int(np.ceil(end_s * fs)))
    if hi <= lo:
        raise HTTPException(status_code=400, detail="empty time range")
    return lo, hi


def _hit_payload(hit: SearchHit, query_start: int, hop_s: float) -> dict:
    return {
        "record_id": hit.record_id,
        "offset": hit.offset,
        "length": hit.length,
        "distance": hit.distance,
        "start_s": hit.offset * hop_s,
        "end_s": (hit.offset + hit.length) * hop_s,
        "align_shift_windows": hit.offset - query_start,
    }


# --- JSON schemas (version SCHEMA_VERSION), one per endpoint payload -------

_NUMBER_ARRAY = {"type": "array", "items": {"type": "number"}}
_NUMBER_MATRIX = {"type": "array", "items": _NUMBER_ARRAY}

SCHEMAS: dict[str, dict] = {
    "records": {
        "$id": f"quakescope/records/v{SCHEMA_VERSION}",
        "type": "array",
        "items": {
            "type": "object",
            "required": ["id", "duration_s", "n_channels", "n_windows"],
            "properties": {
                "id": {"type": "string"},
                "duration_s": {"type": "number", "exclusiveMinimum": 0},
                "n_channels": {"type": "integer", "minimum": 1},
                "n_windows": {"type": "integer", "minimum": 1},
            },
        },
    },
    "topic_series": {
        "$id": f"quakescope/topic-series/v{SCHEMA_VERSION}",
        "type": "object",
        "required": ["record_id", "times_s", "weights", "K", "colors"],
        "properties": {
            "record_id": {"type": "string"},
            "times_s": _NUMBER_ARRAY,
            "weights": _NUMBER_MATRIX,
            "K": {"type": "integer", "minimum": 1},
            "colors": {"type": "array", "items": {"type": "string"}},
        },
    },
    "spectrum": {
        "$id": f"quakescope/spectrum/v{SCHEMA_VERSION}",
        "type": "object",
        "required": ["k", "grid", "bin_edges_hz", "channel_labels"],
        "properties": {
            "k": {"type": "integer", "minimum": 0},
            "grid": _NUMBER_MATRIX,
            "bin_edges_hz": _NUMBER_ARRAY,
            "channel_labels": {"type": "array", "items": {"type": "string"}},
            "color": {"type": "string"},
        },
    },
    "search": {
        "$id": f"quakescope/search/v{SCHEMA_VERSION}",
        "type": "object",
        "required": ["query", "hits", "skipped"],
        "properties": {
            "query": {
                "type": "object",
                "required": ["record_id", "start_index", "length", "start_s", "end_s"],
            },
            "hits": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["record_id", "offset", "length", "distance",
                                 "start_s", "end_s", "align_shift_windows"],
                    "properties": {
                        "distance": {"type": "number", "minimum": 0},
                        "offset": {"type": "integer", "minimum": 0},
                    },
                },
            },
            "skipped": {
                "type": "array",
                "items": {"type": "object", "required": ["record_id", "reason"]},
            },
        },
    },
    "matrix": {
        "$id": f"quakescope/matrix/v{SCHEMA_VERSION}",
        "type": "object",
        "required": ["ids", "values", "display_order", "dendrogram"],
        "properties": {
            "ids": {"type": "array", "items": {"type": "string"}},
            "values": _NUMBER_MATRIX,
            "display_order": {"type": "array", "items": {"type": "integer"}},
            "dendrogram": {"type": "array", "items": _NUMBER_ARRAY},
        },
    },
    "heatmap": {
        "$id": f"quakescope/heatmap/v{SCHEMA_VERSION}",
        "type": "object",
        "required": ["record_id", "attribute", "floors", "times_s", "values"],
        "properties": {
            "attribute": {"type": "string"},
            "floors": {"type": "array", "items": {"type": "integer"}},
            "times_s": _NUMBER_ARRAY,
            "values": _NUMBER_MATRIX,
        },
    },
    "ground_accel": {
        "$id": f"quakescope/ground-accel/v{SCHEMA_VERSION}",
        "type": "object",
        "required": ["record_id", "times_s", "min", "max"],
        "properties": {
            "times_s": _NUMBER_ARRAY,
            "min": _NUMBER_ARRAY,
            "max": _NUMBER_ARRAY,
        },
    },
    "config": {
        "$id": f"quakescope/config/v{SCHEMA_VERSION}",
        "type": "object",
        "required": ["window_s", "hop_s", "f_max_hz", "m", "K", "seed", "ridge"],
    },
}

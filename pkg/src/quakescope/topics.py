"""Per-record topic time series: the compressed representation every view uses."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import DocumentSeries
from .errors import ValidationError
from .lda import TopicModel, transform

# Colorblind-safe qualitative palette (Okabe-Ito), cycled when K exceeds it.
# Assignment follows the model's mass-sorted topic order.
DEFAULT_TOPIC_COLORS = (
    "#E69F00", "#56B4E9", "#009E73", "#CC79A7", "#D55E00",
    "#0072B2", "#F0E442", "#999999",
)


def topic_colors(k: int) -> list[str]:
    return [DEFAULT_TOPIC_COLORS[i % len(DEFAULT_TOPIC_COLORS)] for i in range(k)]


@dataclass
class TopicTimeSeries:
    record_id: str
    times_s: np.ndarray      # (T,) window start times
    weights: np.ndarray      # (T, K), each row on the simplex
    K: int

    def __post_init__(self):
        self.times_s = np.asarray(self.times_s, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.ndim != 2 or self.weights.shape[1] != self.K:
            raise ValidationError(f"weights shape {self.weights.shape} != (T, {self.K})")
        if self.times_s.shape != (self.weights.shape[0],):
            raise ValidationError("times_s length must equal window count")

    @property
    def n_windows(self) -> int:
        return self.weights.shape[0]


def topic_series(model: TopicModel, series: DocumentSeries) -> TopicTimeSeries:
    """Replace each window's document by its inferred topic mixture."""
    if model.vocabulary is not None and series.vocabulary != model.vocabulary:
        raise ValidationError(
            f"record {series.record_id!r} was built against a different vocabulary"
        )
    weights = transform(model, series.docs).doc_topic
    return TopicTimeSeries(
        record_id=series.record_id,
        times_s=series.times_s,
        weights=weights,
        K=model.K,
    )


def segment(series: TopicTimeSeries, start_index: int, length: int) -> np.ndarray:
    """Contiguous slice of `length` windows starting at start_index."""
    if length < 1:
        raise ValidationError(f"segment length must be >= 1, got {length}")
    if start_index < 0 or start_index + length > series.n_windows:
        raise ValidationError(
            f"segment [{start_index}, {start_index + length}) out of range "
            f"[0, {series.n_windows})"
        )
    return series.weights[start_index:start_index + length]


def to_json_dict(series: TopicTimeSeries) -> dict:
    return {
        "record_id": series.record_id,
        "times_s": series.times_s.tolist(),
        "weights": series.weights.tolist(),
        "K": series.K,
        "colors": topic_colors(series.K),
    }


def save_series(series: TopicTimeSeries, path, extra: dict | None = None) -> None:
    obj = to_json_dict(series)
    if extra:
        obj.update(extra)
    Path(path).write_text(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def load_series(path) -> TopicTimeSeries:
    raw = json.loads(Path(path).read_text())
    return TopicTimeSeries(
        record_id=raw["record_id"],
        times_s=np.asarray(raw["times_s"], dtype=float),
        weights=np.asarray(raw["weights"], dtype=float),
        K=raw["K"],
    )

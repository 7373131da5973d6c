"""Batch pipeline glue: records -> documents -> model -> series -> matrix.

The pipeline runs ahead of serving and writes everything it computed into
an artifacts directory; the HTTP service and the exporter only ever read.
All writers are deterministic (sorted keys, repr floats, no timestamps),
so one seed yields byte-identical artifact trees.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import lda
from .config import PipelineConfig
from .corpus import DocumentSeries, Vocabulary, assemble_corpus, build_documents
from .errors import ValidationError
from .ingest import SimulationRecord, load_ensemble, normalize_channels, save_simulation
from .similarity import SimilarityMatrix, similarity_matrix
from .stft import bin_spectrogram, stft
from .topics import TopicTimeSeries, topic_series


def documents_for_record(record: SimulationRecord, cfg: PipelineConfig) -> DocumentSeries:
    """STFT + binning for every channel, cascaded into window documents."""
    vocab = Vocabulary(m=cfg.m, channels=record.channel_labels)
    binned = {}
    times = None
    for ch in record.channels:
        spec = stft(ch.values, record.sample_rate_hz,
                    window_s=cfg.window_s, hop_s=cfg.hop_s, window_fn=cfg.window_fn)
        if cfg.weighting == "power":
            spec.frames = spec.frames ** 2
        if times is None:
            times = spec.frame_start_times_s()
        binned[ch.label] = bin_spectrogram(spec, f_max_hz=cfg.f_max_hz, m=cfg.m)
    return build_documents(binned, vocab, record.id, times_s=times)


@dataclass
class SessionState:
    """Everything the read-only service needs; immutable once built."""

    config: PipelineConfig
    records: dict[str, SimulationRecord]
    record_order: list[str]
    model: lda.TopicModel
    doc_series: dict[str, DocumentSeries]
    series: dict[str, TopicTimeSeries]
    matrix: SimilarityMatrix | None = None

    @property
    def vocabulary(self) -> Vocabulary:
        return self.model.vocabulary


def run_pipeline(records: list[SimulationRecord], cfg: PipelineConfig) -> SessionState:
    if not records:
        raise ValidationError("no records to process")
    labels = {r.channel_labels for r in records}
    if len(labels) != 1:
        raise ValidationError("all records must share one channel layout")

    doc_series = {r.id: documents_for_record(r, cfg) for r in records}
    corpus = assemble_corpus([doc_series[r.id] for r in records])
    model = lda.fit(corpus, K=cfg.K, alpha=cfg.alpha, eta=cfg.eta,
                    max_iter=cfg.max_iter, tol=cfg.tol, seed=cfg.seed)
    series = {r.id: topic_series(model, doc_series[r.id]) for r in records}
    matrix = None
    if len(records) >= 2:
        matrix = similarity_matrix([series[r.id] for r in records], ridge=cfg.ridge)
    return SessionState(
        config=cfg,
        records={r.id: r for r in records},
        record_order=[r.id for r in records],
        model=model,
        doc_series=doc_series,
        series=series,
        matrix=matrix,
    )


# ---------------------------------------------------------------------------
# Artifacts directory layout:
#   config.json            effective processing configuration
#   records/<id>.json      normalized input records (self-contained copy)
#   model.json             fitted topic model
#   topic_series/<id>.json per-record topic mixtures
#   matrix.json            similarity matrix + ordering
# ---------------------------------------------------------------------------


def write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def matrix_json_dict(matrix: SimilarityMatrix, cfg: PipelineConfig | None = None) -> dict:
    obj = {
        "ids": matrix.ids,
        "values": matrix.values.tolist(),
        "display_order": list(matrix.display_order),
        "dendrogram": [[i, j, h] for i, j, h in matrix.dendrogram],
    }
    if cfg is not None:
        obj["config"] = cfg.processing_dict()
    return obj


def save_records(records: list[SimulationRecord], artifacts: Path) -> None:
    rec_dir = artifacts / "records"
    rec_dir.mkdir(parents=True, exist_ok=True)
    for record in records:
        save_simulation(record, rec_dir / f"{record.id}.json")


def save_model_artifacts(session: SessionState, artifacts: Path) -> None:
    artifacts.mkdir(parents=True, exist_ok=True)
    write_json(artifacts / "config.json", session.config.processing_dict())
    save_records([session.records[rid] for rid in session.record_order], artifacts)
    lda.save_model(session.model, artifacts / "model.json",
                   config=session.config.processing_dict())


def save_topic_series(session: SessionState, artifacts: Path) -> None:
    from .topics import save_series

    out = artifacts / "topic_series"
    out.mkdir(parents=True, exist_ok=True)
    extra = {"config": session.config.processing_dict()}
    for rid in session.record_order:
        save_series(session.series[rid], out / f"{rid}.json", extra=extra)


def save_matrix(session: SessionState, artifacts: Path) -> None:
    if session.matrix is None:
        raise ValidationError("similarity matrix needs at least two records")
    write_json(artifacts / "matrix.json", matrix_json_dict(session.matrix, session.config))


def save_session(session: SessionState, artifacts) -> None:
    artifacts = Path(artifacts)
    save_model_artifacts(session, artifacts)
    save_topic_series(session, artifacts)
    if session.matrix is not None:
        save_matrix(session, artifacts)


def load_session(artifacts) -> SessionState:
    """Rebuild a servable session from a persisted artifacts directory.

    Topic series and the matrix are recomputed if their files are missing
    (the model and records are the only mandatory artifacts).
    """
    from .config import config_from_dict
    from .topics import load_series

    artifacts = Path(artifacts)
    if not (artifacts / "config.json").exists():
        raise ValidationError(f"no pipeline artifacts in {artifacts}")
    cfg = config_from_dict(json.loads((artifacts / "config.json").read_text()))
    records = load_ensemble(artifacts / "records", format="json")
    model = lda.load_model(artifacts / "model.json")

    # Documents are only rebuilt (STFT + binning + inference) for records
    # whose topic series was not persisted.
    doc_series = {}
    series = {}
    series_dir = artifacts / "topic_series"
    for r in records:
        path = series_dir / f"{r.id}.json"
        if path.exists():
            series[r.id] = load_series(path)
        else:
            doc_series[r.id] = documents_for_record(r, cfg)
            series[r.id] = topic_series(model, doc_series[r.id])

    matrix = None
    matrix_path = artifacts / "matrix.json"
    if matrix_path.exists():
        raw = json.loads(matrix_path.read_text())
        matrix = SimilarityMatrix(
            ids=list(raw["ids"]),
            values=np.asarray(raw["values"], dtype=float),
            display_order=[int(i) for i in raw["display_order"]],
            dendrogram=[(int(i), int(j), float(h)) for i, j, h in raw["dendrogram"]],
        )
    elif len(records) >= 2:
        matrix = similarity_matrix([series[r.id] for r in records], ridge=cfg.ridge)

    return SessionState(
        config=cfg,
        records={r.id: r for r in records},
        record_order=[r.id for r in records],
        model=model,
        doc_series=doc_series,
        series=series,
        matrix=matrix,
    )


def ingest_records(records_dir, out_dir, normalize: bool = True) -> list[SimulationRecord]:
    """Load raw record files, normalize unless told not to, write canonical JSON."""
    records = load_ensemble(records_dir)
    processed = []
    for record in records:
        if normalize and not record.normalized:
            record = normalize_channels(record)
        processed.append(record)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for record in processed:
        save_simulation(record, out / f"{record.id}.json")
    return processed

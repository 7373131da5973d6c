"""Loading, validation and normalization of simulation records.

A record is one earthquake run: the ground acceleration that drove the
simulation plus one series per (floor, attribute) channel.  Channel values
are dimensionless once divided by the channel's design limit; values with
magnitude above 1 mean the structure operated outside its design envelope,
so normalization must never clip.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ParseError, ValidationError


class Attribute(str, Enum):
    ACCELERATION = "acceleration"
    SHEAR = "shear"
    DIAPHRAGM_FORCE = "diaphragm_force"
    MOMENT = "moment"
    DRIFT_RATIO = "drift_ratio"
    INTERSTORY_DRIFT_RATIO = "interstory_drift_ratio"


# Canonical attribute order; channel ordering is (attribute, floor) ascending
# under this ranking so vocabulary word indices stay stable across runs.
ATTRIBUTE_ORDER = {attr: i for i, attr in enumerate(Attribute)}


def channel_label(attribute: Attribute, floor: int) -> str:
    """Column-style label for a channel, e.g. ``shear_f3``."""
    return f"{Attribute(attribute).value}_f{floor}"


def parse_channel_label(label: str) -> tuple[Attribute, int]:
    name, _, floor = label.rpartition("_f")
    try:
        return Attribute(name), int(floor)
    except (ValueError, KeyError):
        raise ValidationError(f"not a channel label: {label!r}") from None


@dataclass
class ChannelSeries:
    floor: int
    attribute: Attribute
    values: np.ndarray
    design_limit: float

    def __post_init__(self):
        self.attribute = Attribute(self.attribute)
        self.values = np.asarray(self.values, dtype=float)
        self.design_limit = float(self.design_limit)
        if self.floor < 1:
            raise ValidationError(f"floor must be >= 1, got {self.floor}")
        if self.values.ndim != 1 or self.values.size < 1:
            raise ValidationError(
                f"channel {self.label} needs a 1-d series of length >= 1"
            )

    @property
    def label(self) -> str:
        return channel_label(self.attribute, self.floor)


@dataclass
class SimulationRecord:
    """One simulation run; channels are kept sorted by (attribute, floor)."""

    id: str
    sample_rate_hz: float
    ground_accel: np.ndarray
    channels: list[ChannelSeries]
    normalized: bool = False

    def __post_init__(self):
        self.ground_accel = np.asarray(self.ground_accel, dtype=float)
        self.sample_rate_hz = float(self.sample_rate_hz)
        if self.sample_rate_hz <= 0:
            raise ValidationError(f"sample_rate_hz must be > 0, got {self.sample_rate_hz}")
        if not self.channels:
            raise ValidationError(f"record {self.id!r} has no channels")
        self.channels = sorted(
            self.channels, key=lambda c: (ATTRIBUTE_ORDER[c.attribute], c.floor)
        )
        seen = set()
        for ch in self.channels:
            key = (ch.attribute, ch.floor)
            if key in seen:
                raise ValidationError(f"duplicate channel {ch.label} in record {self.id!r}")
            seen.add(key)
        n = self.ground_accel.size
        if self.ground_accel.ndim != 1 or n < 1:
            raise ValidationError(f"record {self.id!r}: ground_accel must be a non-empty series")
        for ch in self.channels:
            if ch.values.size != n:
                raise ValidationError(
                    f"record {self.id!r}: channel {ch.label} has length "
                    f"{ch.values.size}, expected {n}"
                )

    @property
    def n_samples(self) -> int:
        return self.ground_accel.size

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.sample_rate_hz

    @property
    def channel_labels(self) -> tuple[str, ...]:
        return tuple(ch.label for ch in self.channels)

    def channel(self, attribute: Attribute, floor: int) -> ChannelSeries:
        for ch in self.channels:
            if ch.attribute == Attribute(attribute) and ch.floor == floor:
                return ch
        raise KeyError(channel_label(attribute, floor))


def normalize_channels(record: SimulationRecord) -> SimulationRecord:
    """Divide every channel by its design limit; ground acceleration is untouched.

    Raises if the record was already normalized (the flag guards against
    double division) or if any design limit is not strictly positive.
    """
    if record.normalized:
        raise ValidationError(f"record {record.id!r} is already normalized")
    channels = []
    for ch in record.channels:
        if not ch.design_limit > 0:
            raise ValidationError(
                f"record {record.id!r}: channel {ch.label} has non-positive "
                f"design limit {ch.design_limit}"
            )
        channels.append(replace(ch, values=ch.values / ch.design_limit))
    return replace(record, channels=channels, normalized=True)


# ---------------------------------------------------------------------------
# File formats.
#
# CSV: one comment line `# sample_rate_hz=400 design_limits=shear_f1:2.0,...`
# (optionally `normalized=true`), then a header row
# `time,ground_accel,<attr>_f<floor>,...`, then one row per sample.
# JSON: a single object with explicit arrays, self-describing.
# ---------------------------------------------------------------------------


def load_simulation(path, format: str | None = None) -> SimulationRecord:
    """Load and validate a record from ``path`` (format inferred from suffix)."""
    path = Path(path)
    fmt = format or path.suffix.lstrip(".").lower()
    if fmt == "csv":
        return _load_csv(path)
    if fmt == "json":
        return _load_json(path)
    raise ValueError(f"unknown record format {fmt!r}")


def save_simulation(record: SimulationRecord, path, format: str | None = None) -> None:
    path = Path(path)
    fmt = format or path.suffix.lstrip(".").lower()
    if fmt == "csv":
        _save_csv(record, path)
    elif fmt == "json":
        _save_json(record, path)
    else:
        raise ValueError(f"unknown record format {fmt!r}")


def _load_json(path: Path) -> SimulationRecord:
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc), path=path, line=exc.lineno) from exc
    try:
        channels = [
            ChannelSeries(
                floor=int(ch["floor"]),
                attribute=Attribute(ch["attribute"]),
                values=np.asarray(ch["values"], dtype=float),
                design_limit=float(ch["design_limit"]),
            )
            for ch in raw["channels"]
        ]
        return SimulationRecord(
            id=str(raw["id"]),
            sample_rate_hz=float(raw["sample_rate_hz"]),
            ground_accel=np.asarray(raw["ground_accel"], dtype=float),
            channels=channels,
            normalized=bool(raw.get("normalized", False)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad record object: {exc}", path=path) from exc


def _save_json(record: SimulationRecord, path: Path) -> None:
    obj = {
        "id": record.id,
        "sample_rate_hz": record.sample_rate_hz,
        "normalized": record.normalized,
        "ground_accel": record.ground_accel.tolist(),
        "channels": [
            {
                "attribute": ch.attribute.value,
                "floor": ch.floor,
                "design_limit": ch.design_limit,
                "values": ch.values.tolist(),
            }
            for ch in record.channels
        ],
    }
    path.write_text(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def _parse_csv_header_comment(text: str, path: Path) -> tuple[float, dict[str, float], bool]:
    sample_rate = None
    limits: dict[str, float] = {}
    normalized = False
    for token in text.lstrip("#").split():
        key, _, value = token.partition("=")
        if key == "sample_rate_hz":
            sample_rate = float(value)
        elif key == "design_limits":
            for item in value.split(","):
                label, _, limit = item.partition(":")
                if not limit:
                    raise ParseError(f"bad design limit entry {item!r}", path=path, line=1)
                limits[label] = float(limit)
        elif key == "normalized":
            normalized = value.lower() == "true"
        else:
            raise ParseError(f"unknown header key {key!r}", path=path, line=1)
    if sample_rate is None:
        raise ParseError("header comment is missing sample_rate_hz", path=path, line=1)
    return sample_rate, limits, normalized


def _load_csv(path: Path) -> SimulationRecord:
    with path.open() as fh:
        comment = fh.readline().strip()
        if not comment.startswith("#"):
            raise ParseError("expected `# sample_rate_hz=... design_limits=...`",
                             path=path, line=1)
        sample_rate, limits, normalized = _parse_csv_header_comment(comment, path)

        header = fh.readline().strip()
        columns = header.split(",")
        if columns[:2] != ["time", "ground_accel"]:
            raise ParseError("header row must start with time,ground_accel",
                             path=path, line=2)
        labels = columns[2:]
        if not labels:
            raise ParseError("no channel columns", path=path, line=2)

        n_cols = len(columns)
        rows: list[list[float]] = []
        for lineno, line in enumerate(fh, start=3):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if len(cells) != n_cols:
                raise ParseError(
                    f"expected {n_cols} fields, got {len(cells)}", path=path, line=lineno
                )
            try:
                rows.append([float(c) for c in cells])
            except ValueError as exc:
                bad = next(c for c in cells if not _is_float(c))
                raise ParseError(f"not a number: {bad!r}", path=path, line=lineno,
                                 field=columns[cells.index(bad)]) from exc
    if not rows:
        raise ParseError("no data rows", path=path)

    data = np.asarray(rows, dtype=float)
    channels = []
    for j, label in enumerate(labels):
        attribute, floor = parse_channel_label(label)
        if label not in limits:
            raise ParseError(f"no design limit for channel {label}", path=path, line=1)
        channels.append(ChannelSeries(floor=floor, attribute=attribute,
                                      values=data[:, 2 + j], design_limit=limits[label]))
    return SimulationRecord(
        id=path.stem,
        sample_rate_hz=sample_rate,
        ground_accel=data[:, 1],
        channels=channels,
        normalized=normalized,
    )


def _is_float(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def _save_csv(record: SimulationRecord, path: Path) -> None:
    limits = ",".join(f"{ch.label}:{ch.design_limit!r}" for ch in record.channels)
    lines = [
        f"# sample_rate_hz={record.sample_rate_hz!r} design_limits={limits} "
        f"normalized={'true' if record.normalized else 'false'}",
        ",".join(["time", "ground_accel", *record.channel_labels]),
    ]
    columns = [record.ground_accel] + [ch.values for ch in record.channels]
    for i in range(record.n_samples):
        t = i / record.sample_rate_hz
        lines.append(",".join([repr(t)] + [repr(float(col[i])) for col in columns]))
    path.write_text("\n".join(lines) + "\n")


def load_ensemble(directory, format: str | None = None) -> list[SimulationRecord]:
    """Load every record file in a directory, sorted by filename."""
    directory = Path(directory)
    if not directory.is_dir():
        raise ValidationError(f"not a directory: {directory}")
    suffixes = {".csv", ".json"} if format is None else {f".{format}"}
    paths = sorted(p for p in directory.iterdir() if p.suffix.lower() in suffixes)
    if not paths:
        raise ValidationError(f"no record files in {directory}")
    records = [load_simulation(p) for p in paths]
    ids = [r.id for r in records]
    if len(set(ids)) != len(ids):
        raise ValidationError(f"duplicate record ids in {directory}")
    return records

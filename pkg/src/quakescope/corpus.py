"""Frequency-word documents: one document per window, pooled across records.

A word is one (channel, frequency bin) pair, indexed channel-major:
word = channel_index * m + bin_index.  Document weights are the binned
magnitudes, deliberately left unnormalized so louder windows carry more
evidence.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import ValidationError
from .stft import BinnedSpectrogram


@dataclass(frozen=True)
class Vocabulary:
    m: int                       # frequency bins per channel
    channels: tuple[str, ...]    # channel labels in ingest order

    @property
    def n_channels(self) -> int:
        return len(self.channels)

    @property
    def size(self) -> int:
        return self.m * self.n_channels

    def word_index(self, channel: int, bin: int) -> int:
        if not (0 <= channel < self.n_channels and 0 <= bin < self.m):
            raise ValidationError(f"no word for channel={channel}, bin={bin}")
        return channel * self.m + bin

    def word_of(self, index: int) -> tuple[int, int]:
        if not (0 <= index < self.size):
            raise ValidationError(f"word index {index} out of range")
        return divmod(index, self.m)


@dataclass
class DocumentSeries:
    """T documents for one record, one per analysis window."""

    record_id: str
    times_s: np.ndarray          # (T,) window start times
    docs: np.ndarray             # (T, |W|) non-negative weights
    vocabulary: Vocabulary

    def __post_init__(self):
        self.times_s = np.asarray(self.times_s, dtype=float)
        self.docs = np.asarray(self.docs, dtype=float)
        if self.docs.ndim != 2 or self.docs.shape[1] != self.vocabulary.size:
            raise ValidationError(
                f"docs shape {self.docs.shape} does not match vocabulary size "
                f"{self.vocabulary.size}"
            )
        if self.times_s.shape != (self.docs.shape[0],):
            raise ValidationError("times_s length must equal document count")
        if np.any(self.docs < 0):
            raise ValidationError("document weights must be >= 0")

    @property
    def n_docs(self) -> int:
        return self.docs.shape[0]

    @property
    def zero_doc_mask(self) -> np.ndarray:
        """Windows with no in-band energy; retained to keep time alignment."""
        return self.docs.sum(axis=1) == 0.0


@dataclass
class Corpus:
    """All records' documents stacked, with back-pointers into the sources."""

    vocabulary: Vocabulary
    docs: np.ndarray                       # (D, |W|)
    sources: list[tuple[str, int]]         # row -> (record_id, window index)

    def __post_init__(self):
        if len(self.sources) != self.docs.shape[0]:
            raise ValidationError("one back-pointer per document required")

    @property
    def n_docs(self) -> int:
        return self.docs.shape[0]

    def rows_for(self, record_id: str) -> slice:
        indices = [i for i, (rid, _) in enumerate(self.sources) if rid == record_id]
        if not indices:
            raise KeyError(record_id)
        lo, hi = indices[0], indices[-1]
        if indices != list(range(lo, hi + 1)):
            raise ValidationError(f"documents of {record_id!r} are not contiguous")
        return slice(lo, hi + 1)


def build_documents(
    binned: Mapping[str, BinnedSpectrogram],
    vocab: Vocabulary,
    record_id: str,
    times_s: np.ndarray | None = None,
) -> DocumentSeries:
    """Cascade per-channel binned frames into per-window documents.

    times_s are the window start times (each record counts from its own
    t = 0); defaults to the window index when not given.
    """
    if set(binned) != set(vocab.channels):
        missing = sorted(set(vocab.channels) - set(binned))
        extra = sorted(set(binned) - set(vocab.channels))
        raise ValidationError(
            f"channel mismatch with vocabulary (missing={missing}, extra={extra})"
        )
    specs = [binned[label] for label in vocab.channels]
    n_frames = {s.n_frames for s in specs}
    ms = {s.m for s in specs}
    if len(n_frames) != 1 or ms != {vocab.m}:
        raise ValidationError("all channels must share frame count and bin count m")
    docs = np.concatenate([s.frames for s in specs], axis=1)
    t = n_frames.pop()
    return DocumentSeries(
        record_id=record_id,
        times_s=np.arange(t, dtype=float) if times_s is None else times_s,
        docs=docs,
        vocabulary=vocab,
    )


def assemble_corpus(series: Sequence[DocumentSeries]) -> Corpus:
    """Pool document series from all records into one training corpus."""
    if not series:
        raise ValidationError("cannot assemble an empty corpus")
    vocab = series[0].vocabulary
    for s in series[1:]:
        if s.vocabulary != vocab:
            raise ValidationError(
                f"vocabulary mismatch: {s.record_id!r} differs from "
                f"{series[0].record_id!r}"
            )
    docs = np.concatenate([s.docs for s in series], axis=0)
    sources = [(s.record_id, t) for s in series for t in range(s.n_docs)]
    return Corpus(vocabulary=vocab, docs=docs, sources=sources)


def export_triplets(corpus: Corpus, path) -> None:
    """Write nonzero weights as `doc,word,weight` rows for external checks."""
    rows, cols = np.nonzero(corpus.docs)
    with Path(path).open("w") as fh:
        fh.write("doc,word,weight\n")
        for d, w in zip(rows, cols):
            fh.write(f"{d},{w},{float(corpus.docs[d, w])!r}\n")

"""Sliding-window Fourier magnitudes and uniform frequency binning.

Frame t covers samples [t*H, t*H + W); trailing samples shorter than one
window are dropped, so T = floor((L - W) / H) + 1.  Magnitudes are |DFT|
of the windowed segment (not power); scaling the input by c >= 0 scales
every magnitude by c.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import ValidationError

WINDOW_FUNCTIONS = ("hann", "rect")


def _window(name: str, n: int) -> np.ndarray:
    if name == "hann":
        # Periodic form, the usual choice for spectral analysis.
        return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)
    if name == "rect":
        return np.ones(n)
    raise ValidationError(f"unknown window function {name!r}")


def frame_count(n_samples: int, window_samples: int, hop_samples: int) -> int:
    return (n_samples - window_samples) // hop_samples + 1


@dataclass
class Spectrogram:
    """Per-frame DFT magnitudes of one channel, DC bin included."""

    frames: np.ndarray          # (T, F) magnitudes, F = W//2 + 1
    freqs_hz: np.ndarray        # (F,) bin center frequencies
    sample_rate_hz: float
    window_s: float
    hop_s: float
    window_fn: str

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def freq_resolution_hz(self) -> float:
        window_samples = int(round(self.window_s * self.sample_rate_hz))
        return self.sample_rate_hz / window_samples

    def frame_start_times_s(self) -> np.ndarray:
        return np.arange(self.n_frames) * self.hop_s


@dataclass
class BinnedSpectrogram:
    """Spectrogram magnitudes regrouped into m uniform bins over (0, f_max]."""

    frames: np.ndarray          # (T, m)
    bin_edges_hz: np.ndarray    # (m + 1,)
    f_max_hz: float
    m: int

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]


def stft(
    series: np.ndarray,
    sample_rate_hz: float,
    window_s: float = 5.0,
    hop_s: float = 0.125,
    window_fn: str = "hann",
) -> Spectrogram:
    """Magnitude spectrogram of a single series.

    Raises if the series is shorter than one window or the hop is not
    positive.
    """
    series = np.asarray(series, dtype=float)
    if series.ndim != 1:
        raise ValidationError("series must be 1-d")
    if hop_s <= 0 or window_s <= 0:
        raise ValidationError("window_s and hop_s must be > 0")
    window_samples = int(round(window_s * sample_rate_hz))
    hop_samples = int(round(hop_s * sample_rate_hz))
    if window_samples < 1 or hop_samples < 1:
        raise ValidationError("window and hop must each cover at least one sample")
    if series.size < window_samples:
        raise ValidationError(
            f"series of {series.size} samples is shorter than one "
            f"{window_samples}-sample window"
        )
    segments = sliding_window_view(series, window_samples)[::hop_samples]
    magnitudes = np.abs(np.fft.rfft(segments * _window(window_fn, window_samples), axis=1))
    return Spectrogram(
        frames=magnitudes,
        freqs_hz=np.fft.rfftfreq(window_samples, 1.0 / sample_rate_hz),
        sample_rate_hz=sample_rate_hz,
        window_s=window_s,
        hop_s=hop_s,
        window_fn=window_fn,
    )


def bin_spectrogram(spec: Spectrogram, f_max_hz: float = 16.0, m: int = 80) -> BinnedSpectrogram:
    """Sum magnitudes into m uniform bins over (0, f_max]; DC is discarded.

    Native bin k (center frequency f) lands in output bin
    ceil(f * m / f_max) - 1, i.e. intervals are half-open on the left so a
    frequency exactly on an edge belongs to the bin below it.
    """
    if m < 1:
        raise ValidationError("m must be >= 1")
    nyquist = spec.sample_rate_hz / 2.0
    if f_max_hz > nyquist + 1e-12:
        raise ValidationError(f"f_max {f_max_hz} Hz above Nyquist {nyquist} Hz")
    freqs = spec.freqs_hz
    # Small slack keeps edge-centered native bins from hopping bins on
    # floating-point noise.
    idx = np.ceil(freqs * m / f_max_hz - 1e-9).astype(int) - 1
    keep = (freqs > f_max_hz * 1e-12) & (idx >= 0) & (idx < m)
    binned = np.zeros((spec.n_frames, m))
    np.add.at(binned.T, idx[keep], spec.frames[:, keep].T)
    return BinnedSpectrogram(
        frames=binned,
        bin_edges_hz=np.linspace(0.0, f_max_hz, m + 1),
        f_max_hz=f_max_hz,
        m=m,
    )


def bin_center_hz(binned: BinnedSpectrogram, index: int) -> float:
    edges = binned.bin_edges_hz
    return float((edges[index] + edges[index + 1]) / 2.0)


def dump_csv(spec: Spectrogram | BinnedSpectrogram, path) -> None:
    """Debug dump: one row per frame, one column per bin."""
    np.savetxt(Path(path), spec.frames, delimiter=",")

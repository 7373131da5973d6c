"""Ground-truth synthetic ensembles for tests, benchmarks and demos.

Each channel is a sum of sinusoids whose frequency mix changes between
phases: value(t) = sum_f A[channel, f] * sin(2*pi*f*t + offset), evaluated
on the global time axis.  Defaults give amplitude 1/floor so upper floors
respond more weakly, mimicking decaying mode shapes.
"""

from __future__ import annotations

from dataclasses import dataclass
import json

import numpy as np

from .errors import ValidationError
from .ingest import Attribute, ChannelSeries, SimulationRecord


@dataclass
class PhaseSpec:
    """One constant-frequency-mix span of a generated signal.

    amplitudes has shape (n_channels, n_frequencies); None means the
    1/(channel index + 1) default profile.  phase_offsets (same shape,
    radians) defaults to zero so values are exactly reproducible from the
    closed form.
    """

    duration_s: float
    frequencies_hz: tuple[float, ...]
    amplitudes: np.ndarray | None = None
    phase_offsets: np.ndarray | None = None

    def __post_init__(self):
        self.frequencies_hz = tuple(float(f) for f in self.frequencies_hz)
        if self.duration_s <= 0:
            raise ValidationError(f"phase duration must be > 0, got {self.duration_s}")
        if not self.frequencies_hz:
            raise ValidationError("phase needs at least one frequency")
        if any(f <= 0 for f in self.frequencies_hz):
            raise ValidationError("frequencies must be positive")


def _phase_amplitudes(phase: PhaseSpec, n_channels: int) -> np.ndarray:
    n_freqs = len(phase.frequencies_hz)
    if phase.amplitudes is None:
        base = 1.0 / (np.arange(n_channels) + 1.0)
        return np.repeat(base[:, None], n_freqs, axis=1)
    amps = np.asarray(phase.amplitudes, dtype=float)
    if amps.shape != (n_channels, n_freqs):
        raise ValidationError(
            f"amplitudes shape {amps.shape} != ({n_channels}, {n_freqs})"
        )
    if np.any(amps < 0):
        raise ValidationError("amplitudes must be >= 0")
    return amps


def generate_phased(
    record_id: str,
    sample_rate_hz: float,
    n_channels: int,
    phases: list[PhaseSpec],
    seed: int = 0,
    attribute: Attribute = Attribute.SHEAR,
    design_limit: float = 1.0,
) -> SimulationRecord:
    """Build a record whose channels step through the given phases.

    Phase boundaries sit at cumulative durations; sample i belongs to the
    phase covering time i/sample_rate_hz.  Ground acceleration is the mean
    over channels.  The seed is accepted for interface symmetry with
    generate_ensemble; phased generation itself is deterministic.
    """
    if n_channels < 1:
        raise ValidationError("n_channels must be >= 1")
    if not phases:
        raise ValidationError("need at least one phase")
    nyquist = sample_rate_hz / 2.0
    for phase in phases:
        for f in phase.frequencies_hz:
            if f >= nyquist:
                raise ValidationError(f"frequency {f} Hz >= Nyquist {nyquist} Hz")

    total_s = sum(p.duration_s for p in phases)
    n_samples = int(round(total_s * sample_rate_hz))
    if n_samples < 1:
        raise ValidationError("total duration too short for one sample")
    t = np.arange(n_samples) / sample_rate_hz

    values = np.zeros((n_channels, n_samples))
    start_s = 0.0
    for phase in phases:
        end_s = start_s + phase.duration_s
        mask = (t >= start_s) & (t < end_s)
        amps = _phase_amplitudes(phase, n_channels)
        if phase.phase_offsets is None:
            offsets = np.zeros_like(amps)
        else:
            offsets = np.asarray(phase.phase_offsets, dtype=float)
            if offsets.shape != amps.shape:
                raise ValidationError(
                    f"phase_offsets shape {offsets.shape} != {amps.shape}"
                )
        for j, freq in enumerate(phase.frequencies_hz):
            wave = np.sin(2.0 * np.pi * freq * t[mask] + offsets[:, j, None])
            values[:, mask] += amps[:, j, None] * wave
        start_s = end_s

    channels = [
        ChannelSeries(floor=i + 1, attribute=attribute, values=values[i],
                      design_limit=design_limit)
        for i in range(n_channels)
    ]
    return SimulationRecord(
        id=record_id,
        sample_rate_hz=sample_rate_hz,
        ground_accel=values.mean(axis=0),
        channels=channels,
        normalized=True,
    )


def four_phase_demo(record_id: str = "demo") -> SimulationRecord:
    """The 13-channel, 50 s, 400 Hz reference signal with four frequency regimes.

    Phases: 0.4 Hz, then 3.2 Hz, then a 0.4 + 1.6 Hz mixture, then 1.6 Hz,
    12.5 s each.  The mixture weights its components 60/40 so that both
    are clearly present but exactly one dominates; a 50/50 split would
    leave the dominant topic to numerical noise.  Used by the acceptance
    suite as ground truth for topic recovery and transition timing.
    """
    quarter = 12.5
    n = 13
    profile = 1.0 / (np.arange(n) + 1.0)
    mix_amps = np.stack([1.2 * profile, 0.8 * profile], axis=1)
    phases = [
        PhaseSpec(quarter, (0.4,)),
        PhaseSpec(quarter, (3.2,)),
        PhaseSpec(quarter, (0.4, 1.6), amplitudes=mix_amps),
        PhaseSpec(quarter, (1.6,)),
    ]
    return generate_phased(record_id, sample_rate_hz=400.0, n_channels=n, phases=phases)


FOUR_PHASE_BOUNDARIES_S = (12.5, 25.0, 37.5)
FOUR_PHASE_FREQS_HZ = (0.4, 3.2, 1.6)


@dataclass
class EnsembleTemplate:
    """Knobs for the random ensemble generator; serializable as JSON."""

    n_channels: int = 13
    sample_rate_hz: float = 400.0
    attribute: str = Attribute.SHEAR.value
    duration_range_s: tuple[float, float] = (30.0, 60.0)
    n_phases_range: tuple[int, int] = (2, 4)
    freq_pool_hz: tuple[float, ...] = (0.4, 0.8, 1.6, 2.4, 3.2, 4.0, 6.4)
    max_freqs_per_phase: int = 2
    amplitude_scale_range: tuple[float, float] = (0.5, 1.5)
    random_phase_offsets: bool = True
    id_prefix: str = "eq"

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "EnsembleTemplate":
        raw = json.loads(text)
        known = {f for f in cls.__dataclass_fields__}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ValidationError(f"unknown template keys: {', '.join(unknown)}")
        for key in ("duration_range_s", "n_phases_range", "freq_pool_hz",
                    "amplitude_scale_range"):
            if key in raw:
                raw[key] = tuple(raw[key])
        return cls(**raw)


def generate_ensemble(
    count: int,
    seed: int,
    template: EnsembleTemplate | None = None,
) -> list[SimulationRecord]:
    """Generate ``count`` records, reproducible byte-for-byte from the seed.

    Records differ in length, phase timing, frequency mix and amplitude
    scaling.  Child RNG streams are spawned per record, so record i does
    not depend on how many records precede it.
    """
    if count < 1:
        raise ValidationError("count must be >= 1")
    template = template or EnsembleTemplate()
    children = np.random.SeedSequence(seed).spawn(count)
    records = []
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        records.append(_random_record(f"{template.id_prefix}{i:03d}", rng, template))
    return records


def _random_record(record_id: str, rng: np.random.Generator,
                   template: EnsembleTemplate) -> SimulationRecord:
    lo, hi = template.duration_range_s
    duration = float(rng.integers(int(lo), int(hi) + 1))
    n_phases = int(rng.integers(template.n_phases_range[0],
                                template.n_phases_range[1] + 1))
    # Split the duration into n_phases spans, each at least 10% of the total.
    cuts = np.sort(rng.uniform(0.1, 0.9, size=n_phases - 1)) if n_phases > 1 else np.array([])
    edges = np.concatenate([[0.0], cuts, [1.0]]) * duration
    durations = np.maximum(np.diff(edges), 0.1 * duration / n_phases)

    n = template.n_channels
    base = 1.0 / (np.arange(n) + 1.0)
    phases = []
    for span in durations:
        k = int(rng.integers(1, template.max_freqs_per_phase + 1))
        freqs = tuple(sorted(rng.choice(template.freq_pool_hz, size=k, replace=False)))
        scale = rng.uniform(*template.amplitude_scale_range, size=(1, k))
        amps = base[:, None] * scale
        offsets = (rng.uniform(0.0, 2.0 * np.pi, size=(n, k))
                   if template.random_phase_offsets else None)
        phases.append(PhaseSpec(float(span), freqs, amplitudes=amps,
                                phase_offsets=offsets))
    return generate_phased(
        record_id,
        sample_rate_hz=template.sample_rate_hz,
        n_channels=n,
        phases=phases,
        attribute=Attribute(template.attribute),
    )

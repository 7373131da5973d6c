import json

import numpy as np
import pytest

from quakescope.errors import ValidationError
from quakescope.ingest import save_simulation
from quakescope.synth import (
    EnsembleTemplate,
    PhaseSpec,
    four_phase_demo,
    generate_ensemble,
    generate_phased,
)


class TestGeneratePhased:
    def test_closed_form_single_sinusoid(self):
        # 1 Hz for 1 s at 400 Hz: value(t) = A * sin(2 pi t)
        amp = 0.7
        rec = generate_phased(
            "one", 400.0, 1,
            [PhaseSpec(1.0, (1.0,), amplitudes=np.array([[amp]]))],
        )
        assert rec.n_samples == 400
        t = np.arange(400) / 400.0
        np.testing.assert_allclose(rec.channels[0].values,
                                   amp * np.sin(2 * np.pi * t), atol=1e-12)
        # t = 0.25 s hits the sine peak
        assert rec.channels[0].values[100] == pytest.approx(amp, abs=1e-12)

    def test_zero_amplitude_gives_zero_channels(self):
        rec = generate_phased(
            "z", 100.0, 2, [PhaseSpec(1.0, (2.0,), amplitudes=np.zeros((2, 1)))]
        )
        for ch in rec.channels:
            np.testing.assert_array_equal(ch.values, 0.0)
        np.testing.assert_array_equal(rec.ground_accel, 0.0)

    def test_frequency_at_or_above_nyquist_rejected(self):
        with pytest.raises(ValidationError, match="Nyquist"):
            generate_phased("x", 100.0, 1, [PhaseSpec(1.0, (50.0,))])

    def test_ground_accel_is_mean_channel(self):
        rec = generate_phased("x", 200.0, 3, [PhaseSpec(0.5, (1.0, 3.0))])
        stacked = np.stack([ch.values for ch in rec.channels])
        np.testing.assert_allclose(rec.ground_accel, stacked.mean(axis=0), atol=1e-15)

    def test_phase_boundaries_at_cumulative_durations(self):
        # second phase silent: samples at t >= 0.5 s must all be zero
        rec = generate_phased(
            "x", 100.0, 1,
            [PhaseSpec(0.5, (2.0,)),
             PhaseSpec(0.5, (5.0,), amplitudes=np.zeros((1, 1)))],
        )
        assert rec.n_samples == 100
        assert np.any(rec.channels[0].values[:50] != 0.0)
        np.testing.assert_array_equal(rec.channels[0].values[50:], 0.0)


class TestFourPhaseDemo:
    def test_shape(self):
        rec = four_phase_demo()
        assert rec.n_samples == 20000
        assert len(rec.channels) == 13
        assert rec.sample_rate_hz == 400.0
        assert rec.duration_s == 50.0

    def test_amplitude_decays_with_floor(self):
        rec = four_phase_demo()
        peaks = [np.abs(ch.values[:5000]).max() for ch in rec.channels]
        assert all(a > b for a, b in zip(peaks, peaks[1:]))


class TestEnsemble:
    def test_same_seed_identical(self):
        a = generate_ensemble(3, seed=42)
        b = generate_ensemble(3, seed=42)
        for ra, rb in zip(a, b):
            assert ra.id == rb.id
            np.testing.assert_array_equal(ra.ground_accel, rb.ground_accel)
            for ca, cb in zip(ra.channels, rb.channels):
                np.testing.assert_array_equal(ca.values, cb.values)

    def test_byte_identical_when_saved(self, tmp_path):
        for run in ("a", "b"):
            out = tmp_path / run
            out.mkdir()
            for rec in generate_ensemble(3, seed=9):
                save_simulation(rec, out / f"{rec.id}.json")
        for name in ("eq000.json", "eq001.json", "eq002.json"):
            assert (tmp_path / "a" / name).read_bytes() == \
                (tmp_path / "b" / name).read_bytes()

    def test_records_distinct(self):
        records = generate_ensemble(50, seed=1, template=EnsembleTemplate(
            n_channels=2, sample_rate_hz=50.0, duration_range_s=(5.0, 10.0)))
        assert len(records) == 50
        assert len({r.id for r in records}) == 50
        fingerprints = {r.channels[0].values[:40].tobytes() for r in records}
        assert len(fingerprints) == 50

    def test_count_one(self):
        assert len(generate_ensemble(1, seed=0)) == 1

    def test_count_zero_rejected(self):
        with pytest.raises(ValidationError):
            generate_ensemble(0, seed=0)

    def test_template_json_roundtrip(self):
        template = EnsembleTemplate(n_channels=4, freq_pool_hz=(1.0, 2.0))
        back = EnsembleTemplate.from_json(template.to_json())
        assert back == template

    def test_template_unknown_key_rejected(self):
        with pytest.raises(ValidationError, match="n_storeys"):
            EnsembleTemplate.from_json(json.dumps({"n_storeys": 3}))

import numpy as np
import pytest

from quakescope.errors import ValidationError
from quakescope.topics import (
    TopicTimeSeries,
    load_series,
    save_series,
    segment,
    to_json_dict,
    topic_colors,
    topic_series,
)


def make_series(t=10, k=3, seed=0):
    rng = np.random.default_rng(seed)
    w = rng.random((t, k))
    w /= w.sum(axis=1, keepdims=True)
    return TopicTimeSeries("r", np.arange(t) * 0.125, w, k)


class TestTopicSeries:
    def test_times_preserved_and_rows_simplex(self, four_phase_bundle):
        series = four_phase_bundle["series"]
        docs = four_phase_bundle["docs"]
        np.testing.assert_array_equal(series.times_s, docs.times_s)
        assert series.n_windows == docs.n_docs
        np.testing.assert_allclose(series.weights.sum(axis=1), 1.0, atol=1e-9)

    def test_single_window_record(self):
        from quakescope.corpus import DocumentSeries, Vocabulary, assemble_corpus
        from quakescope.lda import fit

        vocab = Vocabulary(m=2, channels=("c0",))
        one = DocumentSeries("one", np.array([0.0]), np.array([[3.0, 1.0]]), vocab)
        model = fit(assemble_corpus([one]), K=2, seed=0)
        series = topic_series(model, one)
        assert series.weights.shape == (1, 2)
        assert series.weights.sum() == pytest.approx(1.0, abs=1e-9)

    def test_vocabulary_mismatch_rejected(self, four_phase_bundle):
        from quakescope.corpus import DocumentSeries, Vocabulary

        other = DocumentSeries("x", np.array([0.0]), np.ones((1, 4)),
                               Vocabulary(m=2, channels=("a", "b")))
        with pytest.raises(ValidationError):
            topic_series(four_phase_bundle["model"], other)


class TestSegment:
    def test_full_range_is_identity(self):
        series = make_series()
        np.testing.assert_array_equal(segment(series, 0, series.n_windows),
                                      series.weights)

    def test_zero_length_rejected(self):
        with pytest.raises(ValidationError):
            segment(make_series(), 0, 0)

    def test_out_of_range_rejected(self):
        series = make_series(t=10)
        with pytest.raises(ValidationError):
            segment(series, 8, 3)
        with pytest.raises(ValidationError):
            segment(series, -1, 2)

    def test_slicing_semantics(self):
        series = make_series(t=361)
        np.testing.assert_array_equal(segment(series, 10, 5),
                                      series.weights[10:15])

    def test_rows_stay_simplex(self):
        part = segment(make_series(), 2, 4)
        np.testing.assert_allclose(part.sum(axis=1), 1.0, atol=1e-12)

    def test_concatenation_reconstructs(self):
        series = make_series(t=20)
        parts = [segment(series, 0, 7), segment(series, 7, 5), segment(series, 12, 8)]
        np.testing.assert_array_equal(np.concatenate(parts), series.weights)


class TestExport:
    def test_json_fields(self):
        series = make_series(t=4, k=2)
        obj = to_json_dict(series)
        assert set(obj) >= {"record_id", "times_s", "weights", "K", "colors"}
        assert len(obj["weights"]) == 4
        assert len(obj["weights"][0]) == 2

    def test_save_load_roundtrip(self, tmp_path):
        series = make_series()
        path = tmp_path / "series.json"
        save_series(series, path)
        back = load_series(path)
        assert back.record_id == series.record_id
        np.testing.assert_array_equal(back.weights, series.weights)
        np.testing.assert_array_equal(back.times_s, series.times_s)

    def test_colors_cycle(self):
        assert len(topic_colors(5)) == 5
        assert len(set(topic_colors(5))) == 5
        assert len(topic_colors(12)) == 12

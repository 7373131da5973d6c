import jsonschema
import numpy as np
import pytest
from fastapi.testclient import TestClient

from quakescope.service import SCHEMAS, SCHEMA_VERSION, create_app, \
    minmax_downsample, signed_peak_downsample


@pytest.fixture(scope="module")
def client(tiny_session):
    return TestClient(create_app(tiny_session))


@pytest.fixture()
def empty_client():
    return TestClient(create_app(None))


def get_json(client, url, **kwargs):
    resp = client.get(url, **kwargs)
    assert resp.status_code == 200, resp.text
    assert resp.headers["X-Schema-Version"] == str(SCHEMA_VERSION)
    return resp.json()


class TestRecords:
    def test_lists_every_record(self, client, tiny_session):
        body = get_json(client, "/api/records")
        jsonschema.validate(body, SCHEMAS["records"])
        assert len(body) == len(tiny_session.record_order)
        ids = [e["id"] for e in body]
        assert ids == tiny_session.record_order
        assert len(set(ids)) == len(ids)

    def test_503_before_pipeline(self, empty_client):
        for url in ("/api/records", "/api/matrix", "/api/config"):
            assert empty_client.get(url).status_code == 503

    def test_entry_fields(self, client, tiny_session):
        entry = get_json(client, "/api/records")[0]
        rid = entry["id"]
        assert entry["duration_s"] == pytest.approx(
            tiny_session.records[rid].duration_s)
        assert entry["n_windows"] == tiny_session.series[rid].n_windows


class TestTopicSeries:
    def test_rows_sum_to_one(self, client, tiny_session):
        rid = tiny_session.record_order[0]
        body = get_json(client, f"/api/records/{rid}/topic-series")
        jsonschema.validate(body, SCHEMAS["topic_series"])
        weights = np.asarray(body["weights"])
        np.testing.assert_allclose(weights.sum(axis=1), 1.0, atol=1e-9)

    def test_unknown_id_404(self, client):
        assert client.get("/api/records/nope/topic-series").status_code == 404

    def test_matches_module_export(self, client, tiny_session):
        from quakescope.topics import to_json_dict

        rid = tiny_session.record_order[1]
        body = get_json(client, f"/api/records/{rid}/topic-series")
        assert body == to_json_dict(tiny_session.series[rid])


class TestSpectrum:
    def test_grid_in_unit_interval_max_one(self, client):
        body = get_json(client, "/api/topics/0/spectrum")
        jsonschema.validate(body, SCHEMAS["spectrum"])
        grid = np.asarray(body["grid"])
        assert grid.min() >= 0.0
        assert grid.max() == 1.0

    def test_dims_match_config(self, client, tiny_session):
        body = get_json(client, "/api/topics/0/spectrum")
        grid = np.asarray(body["grid"])
        n_channels = len(tiny_session.vocabulary.channels)
        assert grid.shape == (n_channels, tiny_session.config.m)
        assert len(body["bin_edges_hz"]) == tiny_session.config.m + 1
        assert body["channel_labels"] == list(tiny_session.vocabulary.channels)

    def test_k_out_of_range_404(self, client, tiny_session):
        assert client.get(f"/api/topics/{tiny_session.model.K}/spectrum") \
            .status_code == 404


class TestSearch:
    def body(self, tiny_session, **overrides):
        rid = tiny_session.record_order[0]
        payload = {"record_id": rid, "start_index": 2, "length": 6, "top_n": 8}
        payload.update(overrides)
        return payload

    def test_basic_search(self, client, tiny_session):
        resp = client.post("/api/search", json=self.body(tiny_session))
        assert resp.status_code == 200
        body = resp.json()
        jsonschema.validate(body, SCHEMAS["search"])
        distances = [h["distance"] for h in body["hits"]]
        assert distances == sorted(distances)

    def test_hit_seconds_consistent_with_hop(self, client, tiny_session):
        hop = tiny_session.config.hop_s
        body = client.post("/api/search", json=self.body(tiny_session)).json()
        for hit in body["hits"]:
            assert hit["start_s"] == pytest.approx(hit["offset"] * hop)
            assert hit["end_s"] == pytest.approx(
                (hit["offset"] + hit["length"]) * hop)

    def test_planted_copy_found_first(self, tiny_session):
        # distinctive random stripes (the synthetic records are too
        # self-similar within a phase to make "the" match unambiguous)
        import copy

        session = copy.deepcopy(tiny_session)
        rng = np.random.default_rng(17)
        for rid in session.record_order:
            w = rng.random(session.series[rid].weights.shape) + 1e-9
            session.series[rid].weights = w / w.sum(axis=1, keepdims=True)
        src = session.record_order[0]
        dst = session.record_order[1]
        session.series[dst].weights[1:7] = session.series[src].weights[2:8]
        app_client = TestClient(create_app(session))
        body = app_client.post("/api/search", json={
            "record_id": src, "start_index": 2, "length": 6, "top_n": 5,
        }).json()
        first = body["hits"][0]
        assert first["record_id"] == dst
        assert first["offset"] == 1
        assert first["distance"] <= 1e-6
        assert first["align_shift_windows"] == -1

    def test_invalid_selection_400(self, client, tiny_session):
        resp = client.post("/api/search", json=self.body(tiny_session,
                                                         start_index=10**6))
        assert resp.status_code == 400

    def test_unknown_record_404(self, client, tiny_session):
        resp = client.post("/api/search", json=self.body(tiny_session,
                                                         record_id="nope"))
        assert resp.status_code == 404

    def test_bad_mask_400(self, client, tiny_session):
        resp = client.post("/api/search",
                           json=self.body(tiny_session, topic_mask=[99]))
        assert resp.status_code == 400

    def test_long_query_reports_skipped(self, client, tiny_session):
        longest = max(tiny_session.record_order,
                      key=lambda r: tiny_session.series[r].n_windows)
        t = tiny_session.series[longest].n_windows
        shorter = [r for r in tiny_session.record_order
                   if tiny_session.series[r].n_windows < t]
        body = client.post("/api/search", json={
            "record_id": longest, "start_index": 0, "length": t, "top_n": 5,
        }).json()
        skipped_ids = {s["record_id"] for s in body["skipped"]}
        assert skipped_ids == set(shorter)
        hit_ids = {h["record_id"] for h in body["hits"]}
        assert not hit_ids & skipped_ids


class TestMatrix:
    def test_schema_and_diagonal(self, client, tiny_session):
        body = get_json(client, "/api/matrix")
        jsonschema.validate(body, SCHEMAS["matrix"])
        values = np.asarray(body["values"])
        n = len(tiny_session.record_order)
        assert values.shape == (n, n)
        np.testing.assert_allclose(np.diag(values), 1.0, atol=1e-9)
        assert sorted(body["display_order"]) == list(range(n))


class TestDetails:
    def test_heatmap_dims(self, client, tiny_session):
        rid = tiny_session.record_order[0]
        record = tiny_session.records[rid]
        attr = record.channels[0].attribute.value
        body = get_json(client,
                        f"/api/records/{rid}/heatmap?attribute={attr}&width=64")
        jsonschema.validate(body, SCHEMAS["heatmap"])
        values = np.asarray(body["values"])
        n_floors = len({ch.floor for ch in record.channels
                        if ch.attribute.value == attr})
        assert values.shape[1] == n_floors
        assert values.shape[0] <= 64
        assert body["floors"] == sorted(body["floors"])

    def test_heatmap_values_signed(self, client, tiny_session):
        rid = tiny_session.record_order[0]
        attr = tiny_session.records[rid].channels[0].attribute.value
        body = get_json(client,
                        f"/api/records/{rid}/heatmap?attribute={attr}&width=32")
        values = np.asarray(body["values"])
        assert values.min() < 0 < values.max()

    def test_heatmap_unknown_attribute_404(self, client, tiny_session):
        rid = tiny_session.record_order[0]
        assert client.get(f"/api/records/{rid}/heatmap?attribute=wiggle") \
            .status_code == 404

    def test_ground_accel_bucket_cap(self, client, tiny_session):
        rid = tiny_session.record_order[0]
        for width in (16, 100, 10**5):
            body = get_json(client,
                            f"/api/records/{rid}/ground-accel?width={width}")
            jsonschema.validate(body, SCHEMAS["ground_accel"])
            assert len(body["times_s"]) <= width
            assert len(body["min"]) == len(body["max"]) == len(body["times_s"])

    def test_ground_accel_minmax_envelope(self, client, tiny_session):
        rid = tiny_session.record_order[0]
        record = tiny_session.records[rid]
        body = get_json(client, f"/api/records/{rid}/ground-accel?width=50")
        assert min(body["min"]) == record.ground_accel.min()
        assert max(body["max"]) == record.ground_accel.max()

    def test_time_slicing(self, client, tiny_session):
        rid = tiny_session.record_order[0]
        body = get_json(client,
                        f"/api/records/{rid}/ground-accel?width=20&start_s=2&end_s=4")
        times = body["times_s"]
        assert times[0] >= 2.0 - 1e-9
        assert times[-1] <= 4.0

    def test_empty_range_400(self, client, tiny_session):
        rid = tiny_session.record_order[0]
        resp = client.get(f"/api/records/{rid}/ground-accel?start_s=5&end_s=5")
        assert resp.status_code == 400


@pytest.fixture(scope="module")
def default_client(four_phase_bundle):
    from quakescope.pipeline import SessionState

    b = four_phase_bundle
    session = SessionState(
        config=b["cfg"],
        records={b["record"].id: b["record"]},
        record_order=[b["record"].id],
        model=b["model"],
        doc_series={b["record"].id: b["docs"]},
        series={b["record"].id: b["series"]},
        matrix=None,
    )
    return TestClient(create_app(session))


class TestDefaultScaleSession:
    def test_spectrum_grid_is_13_by_80(self, default_client):
        body = get_json(default_client, "/api/topics/0/spectrum")
        grid = np.asarray(body["grid"])
        assert grid.shape == (13, 80)
        assert len(body["bin_edges_hz"]) == 81

    def test_heatmap_has_13_floors(self, default_client):
        body = get_json(default_client,
                        "/api/records/demo/heatmap?attribute=shear&width=256")
        values = np.asarray(body["values"])
        assert values.shape == (256, 13)

    def test_matrix_requires_two_records(self, default_client):
        assert default_client.get("/api/matrix").status_code == 404


class TestIdempotence:
    def test_identical_responses(self, client):
        for url in ("/api/records", "/api/matrix", "/api/topics/0/spectrum"):
            assert client.get(url).content == client.get(url).content


class TestStaticBundle:
    def test_ui_bundle_served_at_root(self, tiny_session, tmp_path):
        (tmp_path / "index.html").write_text("<!doctype html><title>ui</title>")
        client = TestClient(create_app(tiny_session, static_dir=tmp_path))
        page = client.get("/")
        assert page.status_code == 200
        assert "ui" in page.text
        assert client.get("/api/records").status_code == 200

    def test_no_bundle_no_root(self, tiny_session):
        client = TestClient(create_app(tiny_session))
        assert client.get("/").status_code == 404


class TestDownsampleHelpers:
    def test_minmax_preserves_peaks(self):
        values = np.zeros(1000)
        values[123] = 9.0
        values[777] = -4.0
        t, mins, maxs = minmax_downsample(values, np.arange(1000.0), 10)
        assert maxs.max() == 9.0
        assert mins.min() == -4.0
        assert len(t) == 10

    def test_no_downsampling_needed(self):
        values = np.arange(5.0)
        t, mins, maxs = minmax_downsample(values, np.arange(5.0), 10)
        np.testing.assert_array_equal(mins, values)
        np.testing.assert_array_equal(maxs, values)

    def test_signed_peak_keeps_sign(self):
        values = np.zeros((100, 2))
        values[10, 0] = -7.0
        values[60, 1] = 3.0
        out = signed_peak_downsample(values, 4)
        assert out.min() == -7.0
        assert out.max() == 3.0

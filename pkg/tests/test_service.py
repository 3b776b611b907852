import json

import pytest
from fastapi.testclient import TestClient

from psob.attention import Stroke, rasterize
from psob.dataset import canonical_json, split_from_json
from psob.geometry import Ring
from psob.service import (
    PREDICT_STUB_DETAIL,
    Session,
    analyze_session,
    create_app,
    export_fragment,
)

SQUARE = [[50.0, 50.0], [150.0, 50.0], [150.0, 150.0], [50.0, 150.0]]


@pytest.fixture()
def client(tmp_path):
    app = create_app(data_root=tmp_path)
    with TestClient(app) as c:
        c.data_root = tmp_path
        yield c


def new_session(client, width=256, height=256, gt_rings=None, image_path=None):
    body = {"width": width, "height": height}
    if gt_rings is not None:
        body["gt_rings"] = gt_rings
    if image_path is not None:
        body["image_path"] = image_path
    resp = client.post("/sessions", json=body)
    assert resp.status_code == 201
    return resp.json()["session_id"]


def add_stroke(client, sid, points, start_time=0.0, duration=0.0):
    resp = client.post(
        f"/sessions/{sid}/strokes",
        json={"points": points, "start_time": start_time, "duration": duration},
    )
    assert resp.status_code == 201
    return resp.json()["stroke_count"]


class TestBasics:
    def test_healthz(self, client):
        resp = client.get("/healthz")
        assert resp.status_code == 200
        assert resp.text == "ok"

    def test_create_session(self, client):
        sid = new_session(client)
        assert isinstance(sid, str) and len(sid) == 32

    def test_bad_dimensions_rejected(self, client):
        resp = client.post("/sessions", json={"width": 0, "height": 10})
        assert resp.status_code == 400

    def test_bad_gt_ring_rejected(self, client):
        resp = client.post(
            "/sessions",
            json={"width": 10, "height": 10, "gt_rings": [[[0, 0], [1, 1]]]},
        )
        assert resp.status_code == 400

    def test_unknown_session_404(self, client):
        for method, url in (
            ("post", "/sessions/nope/strokes"),
            ("get", "/sessions/nope/attention-map"),
            ("get", "/sessions/nope/analysis"),
            ("get", "/sessions/nope/export"),
        ):
            resp = getattr(client, method)(
                url, **({"json": {"points": [[0, 0]]}} if method == "post" else {})
            )
            assert resp.status_code == 404

    def test_stroke_count_increments(self, client):
        sid = new_session(client)
        assert add_stroke(client, sid, [[0, 0], [5, 5]]) == 1
        assert add_stroke(client, sid, [[5, 5], [9, 2]]) == 2

    def test_empty_stroke_rejected(self, client):
        sid = new_session(client)
        resp = client.post(f"/sessions/{sid}/strokes", json={"points": []})
        assert resp.status_code == 400

    def test_sessions_isolated(self, client):
        s1 = new_session(client)
        s2 = new_session(client)
        add_stroke(client, s1, [[0, 0], [5, 5]])
        a1 = json.loads(client.get(f"/sessions/{s1}/analysis").content)
        a2 = json.loads(client.get(f"/sessions/{s2}/analysis").content)
        assert a1["stroke_count"] == 1
        assert a2 == {"empty": True}

    def test_predict_is_an_explicit_stub(self, client):
        resp = client.post("/predict")
        assert resp.status_code == 501
        assert resp.json()["detail"] == PREDICT_STUB_DETAIL


class TestAttentionMapEndpoint:
    def test_png_bytes_match_library_call(self, client):
        sid = new_session(client, width=64, height=48)
        pts = [[3.0, 4.0], [40.0, 30.0], [60.0, 10.0]]
        add_stroke(client, sid, pts)
        resp = client.get(f"/sessions/{sid}/attention-map")
        assert resp.status_code == 200
        assert resp.headers["content-type"] == "image/png"
        expected = rasterize(
            (Stroke([(x, y) for x, y in pts]),), 64, 48
        ).to_png()
        assert resp.content == expected

    def test_blank_map_without_strokes(self, client):
        sid = new_session(client, width=32, height=32)
        resp = client.get(f"/sessions/{sid}/attention-map")
        assert resp.content == rasterize((), 32, 32).to_png()


def local_session(width=256, height=256, gt=None, strokes=()):
    return Session(
        session_id="local",
        width=width,
        height=height,
        gt_rings=tuple(Ring(r) for r in (gt or [])),
        strokes=list(strokes),
    )


class TestAnalysis:
    def test_empty_marker(self, client):
        sid = new_session(client)
        resp = client.get(f"/sessions/{sid}/analysis")
        assert resp.headers["content-type"].startswith("application/json")
        assert resp.content == b'{"empty":true}\n'

    def test_gt_square_without_strokes(self, client):
        sid = new_session(client, gt_rings=[SQUARE])
        record = json.loads(client.get(f"/sessions/{sid}/analysis").content)
        assert record["empty"] is False
        assert record["basis"] == "ground_truth"
        assert record["stroke_count"] == 0
        assert record["curvature_count"] == 4
        assert record["curvature_class"] == "low"
        assert record["scale_class"] == "large"
        assert record["coverage_ratio"] == 0.0
        assert record["assistance_class"] == "minor"
        assert "preview_iou" not in record

    def test_thirty_percent_coverage_is_medium(self, client):
        sid = new_session(client, gt_rings=[SQUARE])
        add_stroke(client, sid, [[50.0, 50.0], [170.0, 50.0]])  # 120 / 400 = 0.3
        record = json.loads(client.get(f"/sessions/{sid}/analysis").content)
        assert record["coverage_ratio"] == pytest.approx(0.3)
        assert record["assistance_class"] == "medium"

    def test_preview_iou_present_with_gt_and_closure(self, client):
        sid = new_session(client, gt_rings=[SQUARE])
        add_stroke(client, sid, [[50.0, 50.0], [150.0, 50.0], [150.0, 150.0]])
        record = json.loads(client.get(f"/sessions/{sid}/analysis").content)
        assert 0.0 < record["preview_iou"] < 1.0
        assert "not a model prediction" in record["preview_note"]

    def test_stroke_closure_basis_without_gt(self, client):
        sid = new_session(client)
        add_stroke(client, sid, [[10.0, 10.0], [60.0, 10.0], [60.0, 60.0], [10.0, 60.0]])
        record = json.loads(client.get(f"/sessions/{sid}/analysis").content)
        assert record["basis"] == "stroke_closure"
        assert record["scale_class"] == "medium"  # 50 x 50 = 2500
        assert "preview_iou" not in record

    def test_no_closure_from_collinear_strokes(self, client):
        sid = new_session(client)
        add_stroke(client, sid, [[10.0, 10.0], [60.0, 10.0]])
        record = json.loads(client.get(f"/sessions/{sid}/analysis").content)
        assert record["stroke_count"] == 1
        assert "basis" not in record

    def test_sketch_time_sums_durations(self, client):
        sid = new_session(client, gt_rings=[SQUARE])
        add_stroke(client, sid, [[50.0, 50.0], [100.0, 50.0]], start_time=1.0, duration=2.0)
        add_stroke(client, sid, [[100.0, 50.0], [150.0, 50.0]], start_time=4.0, duration=1.5)
        record = json.loads(client.get(f"/sessions/{sid}/analysis").content)
        assert record["sketch_time"] == pytest.approx(3.5)
        assert record["sketch_length"] == pytest.approx(100.0)

    def test_bytes_delegate_to_library(self, client):
        sid = new_session(client, gt_rings=[SQUARE])
        pts = [[50.0, 50.0], [150.0, 50.0], [150.0, 150.0]]
        add_stroke(client, sid, pts, start_time=0.5, duration=2.0)
        resp = client.get(f"/sessions/{sid}/analysis")
        mirror = local_session(
            gt=[SQUARE],
            strokes=[Stroke([(x, y) for x, y in pts], start_time=0.5, duration=2.0)],
        )
        assert resp.content == canonical_json(analyze_session(mirror)).encode()


class TestExport:
    def test_document_shape_and_bytes(self, client):
        sid = new_session(client, gt_rings=[SQUARE], image_path="scene.png")
        pts = [[50.0, 50.0], [150.0, 50.0]]
        add_stroke(client, sid, pts, start_time=1.0, duration=2.0)
        resp = client.get(f"/sessions/{sid}/export")
        mirror = local_session(
            gt=[SQUARE],
            strokes=[Stroke([(x, y) for x, y in pts], start_time=1.0, duration=2.0)],
        )
        mirror.image_path = "scene.png"
        assert resp.content == canonical_json(export_fragment(mirror)).encode()

        doc = json.loads(resp.content)
        assert doc["split"] == "train"
        assert doc["images"][0] == {
            "id": 1, "width": 256, "height": 256, "file_name": "scene.png"
        }
        ann = doc["annotations"][0]
        assert ann["bbox"] == [50.0, 50.0, 100.0, 100.0]
        assert ann["sketch_time"] == 2.0
        assert ann["interaction_time"] == 2.0  # single stroke: span == sketch time
        split = split_from_json(doc)
        assert split.annotations[0].rings[0] == Ring(SQUARE)

    def test_interaction_time_is_span_or_sketch_max(self, client):
        sid = new_session(client, gt_rings=[SQUARE])
        add_stroke(client, sid, [[50.0, 50.0], [100.0, 50.0]], start_time=0.0, duration=1.0)
        add_stroke(client, sid, [[100.0, 50.0], [150.0, 50.0]], start_time=5.0, duration=1.0)
        doc = json.loads(client.get(f"/sessions/{sid}/export").content)
        ann = doc["annotations"][0]
        assert ann["sketch_time"] == 2.0
        assert ann["interaction_time"] == 6.0  # span 0.0 -> 6.0

    def test_no_annotation_without_geometry(self, client):
        sid = new_session(client)
        add_stroke(client, sid, [[10.0, 10.0], [60.0, 10.0]])
        doc = json.loads(client.get(f"/sessions/{sid}/export").content)
        assert doc["annotations"] == []

    def test_snapshot_written(self, client):
        sid = new_session(client, gt_rings=[SQUARE])
        resp = client.get(f"/sessions/{sid}/export", params={"snapshot": "true"})
        target = client.data_root / f"{sid}.json"
        assert target.exists()
        assert target.read_bytes() == resp.content

    def test_no_snapshot_by_default(self, client):
        sid = new_session(client, gt_rings=[SQUARE])
        client.get(f"/sessions/{sid}/export")
        assert not (client.data_root / f"{sid}.json").exists()


class TestStaticUi:
    def test_ui_mounted_when_directory_given(self, tmp_path):
        ui = tmp_path / "ui"
        ui.mkdir()
        (ui / "index.html").write_text("<html><body>annotator</body></html>")
        app = create_app(ui_dir=ui)
        with TestClient(app) as c:
            resp = c.get("/ui/")
            assert resp.status_code == 200
            assert "annotator" in resp.text

    def test_no_ui_mount_without_directory(self, client):
        resp = client.get("/ui/")
        assert resp.status_code == 404

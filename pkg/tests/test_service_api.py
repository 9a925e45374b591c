import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from corgie.model import serialize_dataset
from corgie.server import create_app
from corgie.service import Workspace


@pytest.fixture(scope="module")
def workspace(small_movie_dir):
    ws = Workspace(small_movie_dir, k=2, seed=7, layout_iterations=50)
    ws.precompute()
    yield ws
    ws.shutdown()


@pytest.fixture(scope="module")
def client(workspace):
    return TestClient(create_app(workspace))


def wait_for_layout(client, session="default", timeout=60.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        r = client.get(f"/api/session/{session}/khop-layout")
        if r.status_code == 200:
            return r.json()
        assert r.status_code == 202, r.text
        time.sleep(0.05)
    raise TimeoutError("layout never became ready")


def focus_nodes(workspace, count=10, cluster=0):
    ds = workspace.dataset
    users = [v for v in range(ds.graph.n_nodes) if ds.graph.nodes[v].type_index == 0]
    start = cluster * 30
    return users[start:start + count]


def test_dataset_summary(client, workspace):
    j = client.get("/api/dataset").json()
    assert j["schema"] == 1
    assert j["nNodes"] == workspace.dataset.graph.n_nodes
    assert j["nodeTypes"] == ["user", "movie"]
    assert j["predictionKind"] == "linkPrediction"
    assert len(j["types"]) == j["nNodes"]
    assert len(j["edges"]) == j["nEdges"]
    assert len(j["denseValues"]) == j["nNodes"]
    assert len(j["denseMask"]) == len(j["nodeTypes"])


def test_dataset_summary_classification_overlays(tmp_path_factory):
    from corgie.datasets import cora_like

    d = tmp_path_factory.mktemp("cls")
    serialize_dataset(cora_like(n_nodes=200, n_sparse=40, seed=5), d)
    ws = Workspace(d, k=1, seed=7, layout_iterations=20)
    ws.precompute()
    c = TestClient(create_app(ws))
    j = c.get("/api/dataset").json()
    assert len(j["predLabels"]) == 200
    assert len(j["correct"]) == 200
    assert all(isinstance(v, bool) for v in j["correct"][:5])
    ws.shutdown()


def test_latent_payload(client, workspace):
    j = client.get("/api/latent").json()
    n = workspace.dataset.graph.n_nodes
    assert len(j["positions"]) == n
    assert len(j["colors"]) == n
    assert all(c.startswith("#") for c in j["colors"][:5])
    blocks = j["blocks"]["blocks"]
    assert blocks and all(b["members"] for b in blocks)  # empty blocks omitted
    total = sum(sum(map(sum, b["cells"])) for b in blocks)
    hop1_total = sum(len(h[0]) for h in workspace.hop_index.hops)
    assert total == hop1_total


def test_global_layout_payload(client, workspace):
    j = client.get("/api/global-layout").json()
    pos = np.asarray(j["positions"])
    assert pos.shape == (workspace.dataset.graph.n_nodes, 2)
    assert pos.min() >= 0.0 and pos.max() <= 1.0


def test_khop_404_before_focus(client):
    r = client.get("/api/session/default/khop-layout")
    assert r.status_code == 404


def test_unknown_session_404(client):
    assert client.get("/api/session/nope/khop-layout").status_code == 404
    assert client.post("/api/session/nope/focus", json={"kind": "clear"}).status_code == 404


def test_malformed_focus_400(client):
    r = client.post("/api/session/default/focus", json={"kind": "explode"})
    assert r.status_code == 400


def test_focus_poll_cycle(client, workspace):
    r = client.post("/api/session", json={})
    session = r.json()["id"]
    ids = focus_nodes(workspace)
    r = client.post(f"/api/session/{session}/focus", json={"kind": "createNew", "nodeIds": ids})
    assert r.status_code == 202
    assert r.json()["jobId"] is not None
    layout = wait_for_layout(client, session)
    tags = [b["group"] for b in layout["boxes"]]
    assert tags[0] == "foc-0"
    assert set(layout["boxes"][0]["nodes"]) == set(ids)
    assert layout["schema"] == 1
    # layout positions only for kept nodes, and every edge endpoint is kept
    kept = {p[0] for p in layout["positions"]}
    assert all(a in kept and b in kept for a, b in layout["edges"])

    # clear removes the artifact
    r = client.post(f"/api/session/{session}/focus", json={"kind": "clear"})
    assert r.status_code == 202
    assert r.json()["jobId"] is None
    assert client.get(f"/api/session/{session}/khop-layout").status_code == 404


def test_distance_chart_conservation(client):
    j = client.get("/api/distances", params={"y": "topo", "scope": "all"}).json()
    total = sum(map(sum, j["cells"]))
    assert total == j["includedCount"] == sum(j["xHist"]) == sum(j["yHist"])
    assert j["sampleMeta"]["population"] >= j["includedCount"]


def test_distance_feature_excludes_cross_type(client, workspace):
    j = client.get("/api/distances", params={"y": "feature", "scope": "all"}).json()
    # user-movie pairs share no feature dimensions in this fixture
    assert j["excludedCount"] > 0
    assert j["includedCount"] + j["excludedCount"] == j["sampleMeta"]["population"]


def test_distances_validation(client):
    assert client.get("/api/distances", params={"y": "nope"}).status_code == 422
    assert client.get("/api/distances", params={"prediction": "FP", "connectivity": "connected"}).status_code == 200


def test_brush_roundtrip(client):
    j = client.post(
        "/api/distances/brush",
        json={"y": "topo", "scope": "all", "region": [0.0, 1.0, 0.0, 1.0]},
    ).json()
    chart = client.get("/api/distances", params={"y": "topo", "scope": "all"}).json()
    assert len(j["pairs"]) == chart["includedCount"]
    r = client.post("/api/distances/brush", json={"region": [0.5, 0.1, 0, 1]})
    assert r.status_code == 400


def test_recommendations_endpoint(client, workspace):
    j = client.get("/api/node/3/recommendations", params={"top": 5}).json()
    assert len(j["recommendations"]) == 5
    dists = [r["latentDistance"] for r in j["recommendations"]]
    assert dists == sorted(dists)
    edge_set = workspace.dataset.graph.edge_key_set()
    for rec in j["recommendations"]:
        pair = (min(3, rec["node"]), max(3, rec["node"]))
        assert pair not in edge_set
    assert client.get("/api/node/999999/recommendations").status_code == 404


def test_features_scopes(client):
    session = client.post("/api/session", json={}).json()["id"]
    ids = list(range(10))
    client.post(f"/api/session/{session}/focus", json={"kind": "createNew", "nodeIds": ids})
    j = client.get("/api/features", params={"scopes": "all,foc-0", "session": session}).json()
    assert [row["scope"] for row in j["dense"]] == ["all", "foc-0"]
    all_row = j["dense"][0]
    # conservation: counts sum to the number of possessing nodes per feature
    for hist in all_row["histograms"]:
        assert sum(hist["counts"]) > 0


def test_settings_update(client):
    session = client.post("/api/session", json={}).json()["id"]
    r = client.post(f"/api/session/{session}/settings", json={"edgeBundling": True, "distanceMode": "local"})
    assert r.status_code == 200
    j = client.get(f"/api/session/{session}").json()
    assert j["settings"]["edgeBundling"] is True
    assert j["settings"]["distanceMode"] == "local"
    r = client.post(f"/api/session/{session}/settings", json={"distanceMode": "bogus"})
    assert r.status_code == 400


def test_cache_hits_and_k_invalidation(tmp_path_factory, small_movie_dataset):
    d = tmp_path_factory.mktemp("cache-audit")
    serialize_dataset(small_movie_dataset, d)
    ws1 = Workspace(d, k=2, seed=7, layout_iterations=30)
    r1 = ws1.precompute()["artifacts"]
    assert all(v == "computed" for v in r1.values())
    ws1.shutdown()

    ws2 = Workspace(d, k=2, seed=7, layout_iterations=30)
    r2 = ws2.precompute()["artifacts"]
    assert all(v == "hit" for v in r2.values())
    ws2.shutdown()

    ws3 = Workspace(d, k=3, seed=7, layout_iterations=30)
    r3 = ws3.precompute()["artifacts"]
    assert r3["hop-index"] == "computed"          # K changed: invalidated
    assert r3["neighbor-blocks"] == "computed"    # derived from hop index
    assert r3["global-layout"] == "hit"           # independent of K: reused
    assert r3["projection"] == "hit"
    ws3.shutdown()


def test_cached_artifact_equals_recompute(tmp_path_factory, small_movie_dataset):
    d = tmp_path_factory.mktemp("cache-consistency")
    serialize_dataset(small_movie_dataset, d)
    ws1 = Workspace(d, k=2, seed=7, layout_iterations=30)
    ws1.precompute()
    fresh = ws1.global_positions.copy()
    proj_fresh = ws1.projection.positions.copy()
    ws1.shutdown()

    ws2 = Workspace(d, k=2, seed=7, layout_iterations=30)
    report = ws2.precompute()["artifacts"]
    assert report["global-layout"] == "hit"
    assert np.allclose(ws2.global_positions, fresh)
    assert np.allclose(ws2.projection.positions, proj_fresh)
    ws2.shutdown()

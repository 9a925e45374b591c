"""Acceptance suite: one test per criterion, at the stated tolerance.

The conftest reporter prints a PASS/FAIL line per criterion at the end of
the run.  Oracles here are deliberately independent re-implementations
(Floyd-Warshall buckets, set-arithmetic Jaccard, naive binning, direct
energy re-evaluation) of the code paths they check.
"""

import itertools
import json
import subprocess
import sys
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from conftest import bfs_distance_oracle
from corgie.datasets import random_gnp
from corgie.distances import brush_pairs, build_chart
from corgie.features import build_strip, dense_histograms, feature_diff
from corgie.latent import grid_bin, neighbor_blocks
from corgie.layout_khop import (
    LOG_EPSILON,
    TRANSFORMS,
    _between_box_pairs,
    _sample_between_pairs,
    apply_transform,
    compute_khop_layout,
    to_world,
)
from corgie.metrics import DistanceContext, WithinPairs, sample_pairs
from corgie.model import FeatureTable
from corgie.neighborhoods import build_hop_index, partition_for_focus
from corgie.server import create_app
from corgie.service import Workspace

CORPUS = [(40, p, seed) for seed, p in enumerate([0.05, 0.1, 0.2] * 17)][:50]


def corpus_graphs():
    for n, p, seed in CORPUS:
        yield random_gnp(n, p, seed=seed)


@pytest.mark.criterion(1, "Jaccard oracle equivalence on 50 random graphs, K in 1..3, exact")
def test_jaccard_oracle_equivalence():
    checked = 0
    for graph in corpus_graphs():
        dist = bfs_distance_oracle(graph)
        n = graph.n_nodes
        for k in (1, 2, 3):
            idx = build_hop_index(graph, k)
            flats = [set(np.flatnonzero((dist[v] >= 1) & (dist[v] <= k)).tolist()) for v in range(n)]
            ctx = DistanceContext(graph, hop_index=idx)
            pairs = np.array(list(itertools.combinations(range(n), 2)))
            got, _ = ctx.topo_pairs(pairs)
            for (u, v), d in zip(pairs, got):
                a, b = flats[u], flats[v]
                want = 0.0 if not a and not b else 1.0 - len(a & b) / len(a | b)
                assert d == want, f"graph seed mismatch at pair ({u},{v})"
                checked += 1
    assert checked == 50 * 3 * (40 * 39 // 2)


@pytest.mark.criterion(2, "Hop partition matches BFS buckets with leftmost priority, 0 violations")
def test_hop_partition_correctness():
    rng = np.random.default_rng(99)
    violations = 0
    for graph in corpus_graphs():
        dist = bfs_distance_oracle(graph)
        n = graph.n_nodes
        k = int(rng.integers(1, 4))
        n_groups = int(rng.integers(1, 3))
        chosen = rng.choice(n, size=n_groups * 3, replace=False)
        focal = [np.sort(chosen[i * 3:(i + 1) * 3]) for i in range(n_groups)]
        assign = partition_for_focus(graph, focal, k)

        union = np.concatenate(focal)
        to_focal = dist[:, union].min(axis=1)
        for h in range(k):
            expected = set(np.flatnonzero(to_focal == h + 1).tolist())
            if set(assign.hop_groups[h].tolist()) != expected:
                violations += 1
        # partition: every node in exactly one bucket
        seen = np.zeros(n, dtype=int)
        for _, members in assign.groups():
            seen[members] += 1
        seen[assign.discarded] += 1
        if not (seen == 1).all():
            violations += 1
        # leftmost priority: focal nodes keep their groups
        for gi, members in enumerate(focal):
            if not (assign.group_of[members] == gi).all():
                violations += 1
        # discarded nodes are exactly those beyond K hops
        if set(assign.discarded.tolist()) != set(np.flatnonzero(to_focal > k).tolist()):
            violations += 1
    assert violations == 0


@pytest.mark.criterion(3, "Transform optimizer: 6^4 tuples, exhaustive minimum, rigid within 1e-9")
def test_transform_optimizer_exhaustive():
    graph = random_gnp(60, 0.08, seed=13)
    idx = build_hop_index(graph, 2)
    assign = partition_for_focus(graph, [np.array([0, 1, 2]), np.array([30, 31])], 2)
    layout = compute_khop_layout(graph, assign, idx, seed=21)
    assert len(layout.boxes) == 4
    assert layout.tuples_evaluated == 6 ** 4 == 1296

    # independent re-evaluation of every tuple's energy
    boxes = layout.boxes
    rng = np.random.default_rng(21)
    edge_chunks = _between_box_pairs(boxes, graph)
    rep_chunks = _sample_between_pairs(boxes, 10_000, rng)
    rep_by_block = {(a, b): (i, j) for a, b, i, j in rep_chunks}

    def direct_energy(tup):
        total = 0.0
        for b1, b2, ei, ej in edge_chunks:
            w1 = to_world(apply_transform(boxes[b1].local_positions, TRANSFORMS[tup[b1]]), boxes[b1].rect)
            w2 = to_world(apply_transform(boxes[b2].local_positions, TRANSFORMS[tup[b2]]), boxes[b2].rect)
            if len(ei):
                total += float(np.linalg.norm(w1[ei] - w2[ej], axis=1).sum())
            ri, rj = rep_by_block.get((b1, b2), (np.zeros(0, np.int64),) * 2)
            if len(ri):
                total -= float(np.log(np.linalg.norm(w1[ri] - w2[rj], axis=1) + LOG_EPSILON).sum())
        return total

    chosen = tuple(TRANSFORMS.index(t) for t in layout.transforms)
    assert abs(direct_energy(chosen) - layout.energy) <= 1e-9
    for tup in itertools.product(range(6), repeat=4):
        assert layout.energy <= direct_energy(tup) + 1e-9

    for box, t in zip(boxes, layout.transforms):
        if len(box.node_ids) < 2:
            continue
        before = box.local_positions
        after = apply_transform(before, t)
        d0 = np.linalg.norm(before[:, None] - before[None, :], axis=2)
        d1 = np.linalg.norm(after[:, None] - after[None, :], axis=2)
        assert np.abs(d0 - d1).max() <= 1e-9


@pytest.mark.criterion(4, "Neighbor-block conservation on 20 random fixtures, exact")
def test_neighbor_block_conservation():
    rng = np.random.default_rng(4)
    for trial in range(20):
        n = int(rng.integers(20, 120))
        graph = random_gnp(n, float(rng.uniform(0.02, 0.15)), seed=trial)
        idx = build_hop_index(graph, 1)
        hop1 = [h[0] for h in idx.hops]
        positions = rng.random((n, 2))
        grid = neighbor_blocks(positions, hop1)
        assert grid.total_cell_count() == sum(len(h) for h in hop1)
        assert all(len(b.member_nodes) > 0 for b in grid.blocks)
        occupied = {(r, c) for r, c in zip(*[
            grid_bin(positions, 8)[:, 1], grid_bin(positions, 8)[:, 0]
        ])}
        assert {(b.row, b.col) for b in grid.blocks} == occupied


@pytest.mark.criterion(5, "Strip and histogram oracles exact on 100 random fixtures; diff(A,A)=0")
def test_strip_and_histogram_oracles():
    rng = np.random.default_rng(5)
    from corgie.datasets import _graph_from_edges

    for trial in range(100):
        f = int(rng.integers(1, 80))
        p = int(rng.integers(1, 25))
        counts = rng.integers(0, 40, f).astype(float)
        strip = build_strip(counts, pixel_budget=p)
        chunk = -(-f // p)
        naive = [counts[i:i + chunk].max() for i in range(0, f, chunk)]
        assert strip.tolist() == naive

        n = int(rng.integers(3, 40))
        values = rng.normal(size=(n, 2)) * rng.uniform(0.1, 10)
        table = FeatureTable(
            dense_names=["a", "b"],
            dense_values=values,
            sparse_values=__import__("scipy.sparse", fromlist=["csr_matrix"]).csr_matrix((n, 0)),
            sparse_names=[],
            dense_mask=np.ones((1, 2), dtype=bool),
            sparse_mask=np.ones((1, 0), dtype=bool),
        )
        graph = _graph_from_edges(n, np.zeros((0, 2), dtype=np.int64), np.zeros(n, dtype=np.int64), ["node"])
        scope = rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False)
        rows = dense_histograms(table, graph, {"s": scope}, bin_count=10)
        for fi in range(2):
            lo, hi = values[:, fi].min(), values[:, fi].max()
            if hi == lo:
                continue
            naive_bins = np.zeros(10, dtype=int)
            for v in values[scope, fi]:
                naive_bins[min(int((v - lo) / (hi - lo) * 10), 9)] += 1
            assert rows[0].histograms[fi].counts.tolist() == naive_bins.tolist()

        c = rng.integers(0, 20, f).astype(float)
        assert (feature_diff(c, c, 7, 7) == 0).all()


@pytest.mark.criterion(6, "Distance chart conservation; sampling triggers exactly above budget")
def test_distance_chart_conservation_and_sampling():
    graph = random_gnp(60, 0.1, seed=6)
    idx = build_hop_index(graph, 2)
    rng = np.random.default_rng(6)
    from corgie.model import Embedding

    ctx = DistanceContext(graph, Embedding(rng.normal(size=(60, 6)) + 2.0), idx)

    pop = WithinPairs(np.arange(46))  # C(46,2) = 1035 pairs
    assert pop.size == 1035
    exact = sample_pairs(pop, ctx, budget=1035, seed=0)
    assert not exact.sampled and len(exact) == 1035
    sampled = sample_pairs(pop, ctx, budget=1000, seed=0)
    assert sampled.sampled and len(sampled) == 1000  # same code path as the 1e6 default

    for sample, scale in ((exact, "linear"), (exact, "log"), (sampled, "linear")):
        chart = build_chart(sample, y_space="topo", scale=scale)
        total = chart.cells.sum()
        assert total == chart.included_count == len(sample)
        assert chart.x_hist.sum() == total
        assert chart.y_hist.sum() == total


@pytest.mark.criterion(7, "Metric axioms over 1e4 random pairs; cosine scale invariance 1e-12")
def test_metric_axioms(small_movie_dataset):
    ds = small_movie_dataset
    idx = build_hop_index(ds.graph, 2)
    ctx = DistanceContext(ds.graph, ds.embedding, idx, ds.features)
    rng = np.random.default_rng(7)
    n = ds.graph.n_nodes
    m = 10_000
    a = rng.integers(0, n, m)
    b = rng.integers(0, n, m)
    fwd = np.stack([a, b], 1)
    rev = np.stack([b, a], 1)

    lat_f, lat_r = ctx.latent_pairs(fwd), ctx.latent_pairs(rev)
    topo_f, topo_r = ctx.topo_pairs(fwd)[0], ctx.topo_pairs(rev)[0]
    feat_f, feat_r = ctx.feature_pairs(fwd), ctx.feature_pairs(rev)
    for d_f, d_r in ((lat_f, lat_r), (topo_f, topo_r), (feat_f, feat_r)):
        present = ~np.isnan(d_f)
        assert np.array_equal(present, ~np.isnan(d_r))
        assert np.abs(d_f[present] - d_r[present]).max() <= 1e-12       # symmetry
        assert d_f[present].min() >= 0.0 and d_f[present].max() <= 1.0  # range
        same = (a == b) & present
        if same.any():
            assert np.abs(d_f[same]).max() <= 1e-12                     # identity

    # cosine scale invariance under random positive rescaling
    from corgie.model import Embedding

    scales = rng.uniform(0.01, 100.0, size=(n, 1))
    scaled_ctx = DistanceContext(ds.graph, Embedding(ds.embedding.vectors * scales), idx)
    assert np.abs(ctx.latent_pairs(fwd) - scaled_ctx.latent_pairs(fwd)).max() <= 1e-12


@pytest.mark.criterion(8, "Layout CLI byte-identical across runs; parallel == sequential")
def test_layout_determinism_cli(movie_dir, movie_focus, tmp_path):
    focus_file = tmp_path / "focal.json"
    focus_file.write_text(json.dumps({"focalGroups": [g.tolist() for g in movie_focus]}))
    outs = [tmp_path / f"layout-{i}.json" for i in range(3)]
    base = [
        sys.executable, "-m", "corgie", "layout", str(movie_dir),
        "--focus", str(focus_file), "--k", "2", "--seed", "7",
    ]
    for i, out in enumerate(outs):
        cmd = base + ["--out", str(out)] + (["--sequential"] if i == 2 else [])
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=300)
        assert proc.returncode == 0, proc.stderr
    run1, run2, run_seq = (o.read_bytes() for o in outs)
    assert run1 == run2, "two parallel runs differ"
    assert run1 == run_seq, "sequential run differs from parallel"


@pytest.mark.criterion(9, "Bench envelope: B=4, max box ~600, < 60 s, DR step > 50% of total")
def test_bench_envelope(movie_dir, movie_focus, tmp_path):
    focus_file = tmp_path / "focal.json"
    focus_file.write_text(json.dumps({"focalGroups": [g.tolist() for g in movie_focus]}))
    cmd = [
        sys.executable, "-m", "corgie", "bench", str(movie_dir),
        "--focus", str(focus_file), "--k", "2", "--seed", "7", "--json",
    ]
    proc = subprocess.run(cmd, capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr
    row = json.loads(proc.stdout)
    assert row["n"] == 1000 and row["e"] == 4900
    assert row["b"] == 4
    assert 400 <= row["maxBox"] <= 800  # ~600
    assert row["totalSeconds"] < 60.0
    assert row["drSeconds"] / row["totalSeconds"] > 0.5  # DR dominates


@pytest.mark.criterion(10, "Brushing the bottom-right quadrant returns exactly the planted pair")
def test_anomalous_pair_retrieval(anomaly_dataset):
    ds = anomaly_dataset
    idx = build_hop_index(ds.graph, 1)
    ctx = DistanceContext(ds.graph, ds.embedding, idx, ds.features)
    sample = sample_pairs(WithinPairs(np.arange(ds.graph.n_nodes)), ctx, budget=10 ** 6, seed=0)
    chart = build_chart(sample, y_space="topo")
    pairs, xs, ys = brush_pairs(chart, (0.5, 1.0, 0.0, 0.5))
    assert pairs.tolist() == [[10, 11]]
    assert xs[0] > 0.9 and ys[0] < 0.1


@pytest.mark.criterion(11, "10 rapid focus actions publish exactly the last layout, never torn")
def test_cancellation_safety(small_movie_dir):
    ws = Workspace(small_movie_dir, k=2, seed=7, layout_iterations=30)
    ws.precompute()
    client = TestClient(create_app(ws))
    n = ws.dataset.graph.n_nodes

    def check_well_formed(payload):
        tags = [b["group"] for b in payload["boxes"]]
        assert len(set(tags)) == len(tags)
        box_nodes = [v for b in payload["boxes"] for v in b["nodes"]]
        assert len(set(box_nodes)) == len(box_nodes)
        positioned = {p[0] for p in payload["positions"]}
        assert positioned == set(box_nodes)
        assert all(a in positioned and b in positioned for a, b in payload["edges"])
        assert all(b["transform"] in TRANSFORMS for b in payload["boxes"])

    job_ids = []
    focal_sets = [list(range(i * 5, i * 5 + 5)) for i in range(10)]
    t0 = time.time()
    for i, ids in enumerate(focal_sets):
        action = (
            {"kind": "createNew", "nodeIds": ids}
            if i == 0
            else {"kind": "singleOut", "nodeIds": ids, "group": 0}
        )
        r = client.post("/api/session/default/focus", json=action)
        assert r.status_code == 202, r.text
        job_ids.append(r.json()["jobId"])
        r = client.get("/api/session/default/khop-layout")
        if r.status_code == 200:
            check_well_formed(r.json())
        time.sleep(0.09)
    assert time.time() - t0 < 2.0
    assert len(set(job_ids)) == 10

    deadline = time.time() + 120
    final = None
    while time.time() < deadline:
        r = client.get("/api/session/default/khop-layout")
        if r.status_code == 200:
            final = r.json()
            break
        assert r.status_code == 202
        time.sleep(0.1)
    assert final is not None, "layout never published"
    check_well_formed(final)

    # exactly the last action's layout is the one published
    session = ws.get_session("default")
    assert session.layout_job_id == job_ids[-1]
    assert session.pending_job_id is None
    # createNew steals nodes: after all 10 actions the last 5 ids form foc-9's group
    last_group = sorted(session.focal_groups[-1].tolist())
    assert last_group == focal_sets[-1]
    foc_boxes = [b for b in final["boxes"] if b["group"].startswith("foc-")]
    assert sorted(foc_boxes[-1]["nodes"]) == focal_sets[-1]
    ws.shutdown()

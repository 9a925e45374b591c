import numpy as np
import pytest

from corgie.datasets import cora_like
from corgie.model import PredictionData
from corgie.predictions import label_correctness, link_confusion, recommendations


def test_identical_labels_all_correct():
    labels = np.array([0, 1, 2, 1])
    assert label_correctness(labels, labels).all()


def test_single_wrong_node():
    true = np.array([0, 1, 2, 1, 0])
    pred = true.copy()
    pred[3] = 2
    correct = label_correctness(true, pred)
    assert np.flatnonzero(~correct).tolist() == [3]


def test_length_mismatch_raises():
    with pytest.raises(ValueError, match="differ in length"):
        label_correctness(np.zeros(3), np.zeros(4))


def test_accuracy_matches_independent_recount():
    ds = cora_like(n_nodes=500, n_sparse=60, seed=8)
    correct = label_correctness(ds.predictions.true_labels, ds.predictions.pred_labels)
    recount = sum(
        1 for t, p in zip(ds.predictions.true_labels, ds.predictions.pred_labels) if t == p
    )
    assert correct.sum() == recount


def test_relabeling_permutation_invariance():
    rng = np.random.default_rng(0)
    true = rng.integers(0, 5, 100)
    pred = rng.integers(0, 5, 100)
    perm = rng.permutation(5)
    assert np.array_equal(
        label_correctness(true, pred), label_correctness(perm[true], perm[pred])
    )


def test_all_edges_predicted_connected_all_tp(gnp40):
    preds = PredictionData(
        kind="linkPrediction",
        predicted_pairs=gnp40.edges.copy(),
        predicted_connected=np.ones(gnp40.n_edges, dtype=bool),
    )
    conf = link_confusion(gnp40, preds)
    assert len(conf.tp) == gnp40.n_edges
    assert len(conf.fp) == len(conf.fn) == len(conf.tn) == 0


def test_single_false_positive(gnp40):
    edge_set = gnp40.edge_key_set()
    non_edge = next(
        (a, b) for a in range(40) for b in range(a + 1, 40) if (a, b) not in edge_set
    )
    preds = PredictionData(
        kind="linkPrediction",
        predicted_pairs=np.array([non_edge]),
        predicted_connected=np.array([True]),
    )
    conf = link_confusion(gnp40, preds)
    assert conf.fp.tolist() == [list(non_edge)]


def test_confusion_partitions_predicted_pairs(gnp40):
    rng = np.random.default_rng(1)
    pairs = []
    seen = set()
    while len(pairs) < 120:
        a, b = sorted(rng.integers(0, 40, 2).tolist())
        if a == b or (a, b) in seen:
            continue
        seen.add((a, b))
        pairs.append((a, b))
    preds = PredictionData(
        kind="linkPrediction",
        predicted_pairs=np.array(pairs, dtype=np.int64),
        predicted_connected=rng.random(120) < 0.5,
    )
    conf = link_confusion(gnp40, preds)
    assert conf.total() == 120
    all_pairs = np.concatenate([conf.fp, conf.fn, conf.tp, conf.tn])
    assert len(np.unique(all_pairs, axis=0)) == 120
    edge_set = gnp40.edge_key_set()
    assert all(tuple(p) not in edge_set for p in conf.fp.tolist())
    assert all(tuple(p) in edge_set for p in conf.fn.tolist())


def test_recommendations_contract(movie_dataset):
    ds = movie_dataset
    unit = ds.embedding.unit_vectors()
    adj = ds.graph.adjacency()
    for node in (0, 5, 350):
        recs = recommendations(ds.graph, unit, node, top=5)
        assert len(recs) == 5
        dists = [d for _, d in recs]
        assert dists == sorted(dists)
        neighbors = set(adj.indices[adj.indptr[node]:adj.indptr[node + 1]].tolist())
        for v, d in recs:
            assert v != node and v not in neighbors
        # nothing unconnected is closer than the returned worst
        cos = unit @ unit[node]
        all_d = np.clip((1 - cos) / 2, 0, 1)
        mask = np.ones(ds.graph.n_nodes, dtype=bool)
        mask[node] = False
        mask[list(neighbors)] = False
        assert dists[-1] <= np.sort(all_d[mask])[5 - 1] + 1e-12

"""Label correctness and link-prediction confusion categories.

These drive the "correctness" node color channel and the prediction pair
filters: false positives are unconnected pairs predicted connected (i.e.
recommendations), false negatives are edges predicted disconnected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Graph, PredictionData


@dataclass
class LinkConfusion:
    """Disjoint pair sets partitioning the predicted pairs."""

    fp: np.ndarray
    fn: np.ndarray
    tp: np.ndarray
    tn: np.ndarray

    def total(self) -> int:
        return len(self.fp) + len(self.fn) + len(self.tp) + len(self.tn)


def label_correctness(true_labels: np.ndarray, pred_labels: np.ndarray) -> np.ndarray:
    """Per-node boolean: prediction equals ground truth."""
    true_labels = np.asarray(true_labels)
    pred_labels = np.asarray(pred_labels)
    if true_labels.shape != pred_labels.shape:
        raise ValueError(
            f"label vectors differ in length: {true_labels.shape} vs {pred_labels.shape}"
        )
    return true_labels == pred_labels


def link_confusion(graph: Graph, predictions: PredictionData) -> LinkConfusion:
    """Classify every predicted pair against edge membership."""
    if predictions.kind != "linkPrediction":
        raise ValueError("link confusion requires link-prediction data")
    pairs = predictions.predicted_pairs
    connected = predictions.predicted_connected
    if len(pairs) and (pairs.min() < 0 or pairs.max() >= graph.n_nodes):
        raise ValueError("predicted pair references unknown node id")

    n = graph.n_nodes
    lo = np.minimum(pairs[:, 0], pairs[:, 1])
    hi = np.maximum(pairs[:, 0], pairs[:, 1])
    canonical = np.stack([lo, hi], axis=1)
    codes = lo * n + hi
    edge_codes = (
        graph.edges[:, 0] * n + graph.edges[:, 1] if len(graph.edges) else np.zeros(0, dtype=np.int64)
    )
    is_edge = np.isin(codes, edge_codes)

    return LinkConfusion(
        fp=canonical[connected & ~is_edge],
        fn=canonical[~connected & is_edge],
        tp=canonical[connected & is_edge],
        tn=canonical[~connected & ~is_edge],
    )


def recommendations(
    graph: Graph,
    unit_vectors: np.ndarray,
    node_id: int,
    top: int = 5,
) -> list[tuple[int, float]]:
    """Top-k unconnected nodes by ascending latent (cosine) distance; the
    natural decoder stand-in for ranked link predictions."""
    n = graph.n_nodes
    if not 0 <= node_id < n:
        raise ValueError(f"unknown node id {node_id}")
    cos = unit_vectors @ unit_vectors[node_id]
    dist = np.clip((1.0 - cos) / 2.0, 0.0, 1.0)
    excluded = np.zeros(n, dtype=bool)
    excluded[node_id] = True
    adj = graph.adjacency()
    excluded[adj.indices[adj.indptr[node_id]:adj.indptr[node_id + 1]]] = True
    candidates = np.flatnonzero(~excluded)
    order = candidates[np.argsort(dist[candidates], kind="stable")][:top]
    return [(int(v), float(dist[v])) for v in order]

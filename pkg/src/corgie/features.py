"""Feature-space aggregation: dense histogram rows, sparse presence counts,
pixel-budgeted feature strips, and the focal-group diff row.

Dense histograms share global bin edges across scopes so rows are directly
comparable; a scope with no node possessing a feature yields an all-zero
(empty) histogram rather than being dropped.  Sparse rows count the nodes
possessing each feature; the diff row is the absolute difference of the two
focal groups' presence *rates* so unequal group sizes compare fairly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import FeatureTable, Graph

DEFAULT_BIN_COUNT = 10
DEFAULT_PIXEL_BUDGET = 200


@dataclass
class DenseHistogram:
    feature: str
    bin_edges: np.ndarray  # shared across scopes for the same feature
    counts: np.ndarray


@dataclass
class DenseHistogramRow:
    scope: str
    histograms: list[DenseHistogram]


@dataclass
class SparseFeatureRow:
    scope: str
    counts: np.ndarray  # length F
    strip: np.ndarray   # length <= pixel budget, chunked maxima
    row_max: float      # per-row normalization constant (legend)


def global_bin_edges(
    features: FeatureTable,
    graph: Graph,
    bin_count: int = DEFAULT_BIN_COUNT,
) -> list[np.ndarray]:
    """Equal-width edges over [min, max] of all possessing nodes, per feature.
    Constant features degenerate to a single bin."""
    t_idx = graph.type_indices()
    lo, hi = features.dense_ranges(t_idx)
    edges = []
    for f in range(features.n_dense):
        if hi[f] > lo[f]:
            edges.append(np.linspace(lo[f], hi[f], bin_count + 1))
        else:
            edges.append(np.array([lo[f], hi[f]]))
    return edges


def dense_histograms(
    features: FeatureTable,
    graph: Graph,
    scopes: dict[str, np.ndarray],
    bin_count: int = DEFAULT_BIN_COUNT,
) -> list[DenseHistogramRow]:
    """One row per scope; ``scopes`` maps scope name to node id array."""
    t_idx = graph.type_indices()
    edges = global_bin_edges(features, graph, bin_count)
    rows = []
    for scope_name, nodes in scopes.items():
        nodes = np.asarray(nodes, dtype=np.int64)
        hists = []
        for f in range(features.n_dense):
            possessing = nodes[features.dense_mask[t_idx[nodes], f]] if len(nodes) else nodes
            n_bins = len(edges[f]) - 1
            if len(possessing) == 0:
                counts = np.zeros(n_bins, dtype=np.int64)
            elif n_bins == 1:
                counts = np.array([len(possessing)], dtype=np.int64)
            else:
                counts, _ = np.histogram(features.dense_values[possessing, f], bins=edges[f])
            hists.append(DenseHistogram(feature=features.dense_names[f], bin_edges=edges[f], counts=counts))
        rows.append(DenseHistogramRow(scope=scope_name, histograms=hists))
    return rows


def sparse_counts(features: FeatureTable, graph: Graph, scope: np.ndarray) -> np.ndarray:
    """counts[f] = number of scope nodes possessing feature f with value > 0.

    Presence only counts where the node's type possesses the feature, so the
    per-type mask is applied group-by-group.
    """
    nodes = np.asarray(scope, dtype=np.int64)
    f = features.sparse_count
    counts = np.zeros(f)
    if f == 0 or len(nodes) == 0:
        return counts
    t_idx = graph.type_indices()[nodes]
    for t in np.unique(t_idx):
        rows = nodes[t_idx == t]
        present = features.sparse_values[rows] > 0
        per_type = np.asarray(present.sum(axis=0)).ravel().astype(np.float64)
        counts += per_type * features.sparse_mask[t]
    return counts


def feature_diff(counts_a: np.ndarray, counts_b: np.ndarray, size_a: int, size_b: int) -> np.ndarray:
    """|rate_A - rate_B| per feature; rate-normalized so group sizes don't
    dominate the comparison."""
    if size_a <= 0 or size_b <= 0:
        raise ValueError("focal groups must be non-empty for a diff row")
    return np.abs(counts_a / size_a - counts_b / size_b)


def build_strip(counts: np.ndarray, pixel_budget: int = DEFAULT_PIXEL_BUDGET) -> np.ndarray:
    """Chunked maxima: consecutive features share one strip pixel, chunk size
    ceil(F / budget); the last chunk may be short."""
    if pixel_budget < 1:
        raise ValueError("pixel budget must be >= 1")
    counts = np.asarray(counts, dtype=np.float64)
    f = len(counts)
    if f == 0:
        return np.zeros(0)
    chunk = -(-f // pixel_budget)  # ceil
    n_chunks = -(-f // chunk)
    strip = np.zeros(n_chunks)
    for i in range(n_chunks):
        strip[i] = counts[i * chunk:(i + 1) * chunk].max()
    return strip


def sparse_rows(
    features: FeatureTable,
    graph: Graph,
    focal_groups: list[np.ndarray],
    pixel_budget: int = DEFAULT_PIXEL_BUDGET,
) -> list[SparseFeatureRow]:
    """Rows for all nodes, each focal group, and (with two or more groups)
    the diff of the first two."""
    all_nodes = np.arange(graph.n_nodes, dtype=np.int64)
    rows = []

    def make_row(scope_name: str, counts: np.ndarray) -> SparseFeatureRow:
        return SparseFeatureRow(
            scope=scope_name,
            counts=counts,
            strip=build_strip(counts, pixel_budget),
            row_max=float(counts.max()) if len(counts) else 0.0,
        )

    rows.append(make_row("all", sparse_counts(features, graph, all_nodes)))
    focal_counts = []
    for i, group in enumerate(focal_groups):
        counts = sparse_counts(features, graph, group)
        focal_counts.append(counts)
        rows.append(make_row(f"foc-{i}", counts))
    if len(focal_groups) >= 2:
        diff = feature_diff(
            focal_counts[0], focal_counts[1], len(focal_groups[0]), len(focal_groups[1])
        )
        rows.append(make_row("diff", diff))
    return rows

import numpy as np
import pytest
import scipy.sparse as sp

from corgie.datasets import _graph_from_edges, cora_like
from corgie.features import (
    build_strip,
    dense_histograms,
    feature_diff,
    sparse_counts,
    sparse_rows,
)
from corgie.model import FeatureTable


def make_table(dense=None, sparse=None, n_types=1, type_indices=None):
    if dense is None:
        dense = np.zeros((0, 0))
    dense = np.asarray(dense, dtype=np.float64)
    n = dense.shape[0] if dense.size else (sparse.shape[0] if sparse is not None else 0)
    if sparse is None:
        sparse = sp.csr_matrix((n, 0))
    table = FeatureTable(
        dense_names=[f"d{i}" for i in range(dense.shape[1])],
        dense_values=dense if dense.size else np.zeros((n, 0)),
        sparse_values=sparse,
        sparse_names=[f"s{i}" for i in range(sparse.shape[1])],
        dense_mask=np.ones((n_types, dense.shape[1] if dense.size else 0), dtype=bool),
        sparse_mask=np.ones((n_types, sparse.shape[1]), dtype=bool),
    )
    graph = _graph_from_edges(
        n, np.zeros((0, 2), dtype=np.int64),
        type_indices if type_indices is not None else np.zeros(n, dtype=np.int64),
        [f"t{i}" for i in range(n_types)],
    )
    return table, graph


def test_constant_feature_single_bin():
    table, graph = make_table(dense=np.full((9, 1), 4.2))
    rows = dense_histograms(table, graph, {"all": np.arange(9)})
    hist = rows[0].histograms[0]
    assert hist.counts.tolist() == [9]
    assert len(hist.bin_edges) == 2


def test_type_restricted_feature_empty_histogram():
    # feature 0 belongs to type 1 ("movie") only; a type-0 scope yields zeros
    table, graph = make_table(
        dense=np.arange(10, dtype=float).reshape(5, 2),
        n_types=2,
        type_indices=np.array([0, 0, 1, 1, 1]),
    )
    table.dense_mask[0] = [False, True]
    table.dense_mask[1] = [True, True]
    rows = dense_histograms(table, graph, {"foc-0": np.array([0, 1])})
    assert rows[0].histograms[0].counts.sum() == 0       # movie-only feature
    assert rows[0].histograms[1].counts.sum() == 2       # shared feature


def test_histogram_matches_naive_binning():
    rng = np.random.default_rng(0)
    values = rng.normal(size=(200, 3)) * np.array([1.0, 10.0, 0.1])
    table, graph = make_table(dense=values)
    scope = rng.choice(200, 60, replace=False)
    rows = dense_histograms(table, graph, {"s": scope}, bin_count=10)
    for f, hist in enumerate(rows[0].histograms):
        lo, hi = values[:, f].min(), values[:, f].max()
        edges = np.linspace(lo, hi, 11)
        naive = np.zeros(10, dtype=int)
        for v in values[scope, f]:
            b = min(int((v - lo) / (hi - lo) * 10), 9)
            naive[b] += 1
        assert hist.counts.tolist() == naive.tolist()
        assert hist.counts.sum() == 60
        assert np.array_equal(hist.bin_edges, edges)


def test_bin_edges_shared_across_scopes():
    rng = np.random.default_rng(1)
    table, graph = make_table(dense=rng.random((50, 2)))
    rows = dense_histograms(table, graph, {"all": np.arange(50), "foc-0": np.arange(5)})
    for f in range(2):
        assert np.array_equal(rows[0].histograms[f].bin_edges, rows[1].histograms[f].bin_edges)


def test_sparse_counts_single_node():
    mat = sp.csr_matrix((np.array([1.0]), (np.array([0]), np.array([3]))), shape=(4, 6))
    table, graph = make_table(dense=np.zeros((4, 0)), sparse=mat)
    counts = sparse_counts(table, graph, np.array([0]))
    expected = np.zeros(6)
    expected[3] = 1.0
    assert counts.tolist() == expected.tolist()


def test_sparse_counts_document_frequency():
    rng = np.random.default_rng(3)
    dense = (rng.random((30, 12)) < 0.3) * rng.random((30, 12))
    table, graph = make_table(dense=np.zeros((30, 0)), sparse=sp.csr_matrix(dense))
    counts = sparse_counts(table, graph, np.arange(30))
    assert counts.tolist() == (dense > 0).sum(axis=0).astype(float).tolist()


def test_sparse_counts_empty_scope():
    table, graph = make_table(dense=np.zeros((4, 0)), sparse=sp.csr_matrix(np.eye(4)))
    assert sparse_counts(table, graph, np.zeros(0, dtype=np.int64)).tolist() == [0, 0, 0, 0]


def test_diff_identical_groups_zero():
    counts = np.array([3.0, 1.0, 0.0])
    assert feature_diff(counts, counts, 5, 5).tolist() == [0.0, 0.0, 0.0]


def test_diff_full_presence_vs_absence():
    a = np.array([4.0, 0.0])
    b = np.array([0.0, 0.0])
    diff = feature_diff(a, b, 4, 7)
    assert diff[0] == 1.0 and diff[1] == 0.0


def test_diff_symmetric_and_rate_normalized():
    a = np.array([2.0, 1.0])
    b = np.array([1.0, 3.0])
    d1 = feature_diff(a, b, 4, 6)
    d2 = feature_diff(b, a, 6, 4)
    assert np.allclose(d1, d2)
    assert d1[0] == pytest.approx(abs(2 / 4 - 1 / 6))


def test_strip_identity_when_budget_covers():
    counts = np.array([1.0, 5.0, 2.0])
    assert build_strip(counts, pixel_budget=3).tolist() == [1.0, 5.0, 2.0]
    assert build_strip(counts, pixel_budget=10).tolist() == [1.0, 5.0, 2.0]


def test_strip_hand_chunking():
    counts = np.array([1.0, 5.0, 2.0, 2.0, 0.0, 9.0])
    assert build_strip(counts, pixel_budget=3).tolist() == [5.0, 2.0, 9.0]


def test_strip_all_zero():
    assert build_strip(np.zeros(7), pixel_budget=3).tolist() == [0.0, 0.0, 0.0]


def test_strip_dominance_property():
    rng = np.random.default_rng(5)
    for _ in range(100):
        f = int(rng.integers(1, 60))
        p = int(rng.integers(1, 20))
        counts = rng.integers(0, 50, f).astype(float)
        strip = build_strip(counts, pixel_budget=p)
        chunk = -(-f // p)
        assert len(strip) == -(-f // chunk)
        for i, v in enumerate(strip):
            seg = counts[i * chunk:(i + 1) * chunk]
            assert v == seg.max()
            assert (v >= seg).all()


def test_sparse_rows_include_diff_for_two_groups():
    ds = cora_like(n_nodes=60, n_sparse=40, seed=2)
    groups = [np.arange(10), np.arange(30, 45)]
    rows = sparse_rows(ds.features, ds.graph, groups)
    scopes = [r.scope for r in rows]
    assert scopes == ["all", "foc-0", "foc-1", "diff"]
    # row_max legend present and normalization is per row
    for row in rows:
        assert row.row_max == (row.counts.max() if len(row.counts) else 0.0)
    rows_one = sparse_rows(ds.features, ds.graph, [np.arange(10)])
    assert [r.scope for r in rows_one] == ["all", "foc-0"]

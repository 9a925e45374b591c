import numpy as np
import pytest

from conftest import bfs_distance_oracle
from corgie.datasets import cora_like, random_gnp, _graph_from_edges
from corgie.neighborhoods import build_hop_index, partition_for_focus


def path_graph(n):
    edges = np.array([[i, i + 1] for i in range(n - 1)])
    return _graph_from_edges(n, edges, np.zeros(n, dtype=np.int64), ["node"])


def star_graph(leaves):
    edges = np.array([[0, i] for i in range(1, leaves + 1)])
    return _graph_from_edges(leaves + 1, edges, np.zeros(leaves + 1, dtype=np.int64), ["node"])


def test_path_hops():
    g = path_graph(3)
    idx = build_hop_index(g, 2)
    assert idx.hops[0][0].tolist() == [1]
    assert idx.hops[0][1].tolist() == [2]
    assert idx.flat[0].tolist() == [1, 2]


def test_triangle_all_hop1():
    edges = np.array([[0, 1], [1, 2], [0, 2]])
    g = _graph_from_edges(3, edges, np.zeros(3, dtype=np.int64), ["node"])
    idx = build_hop_index(g, 2)
    assert idx.hops[0][0].tolist() == [1, 2]
    assert idx.hops[0][1].tolist() == []


def test_hop_index_matches_bfs_oracle(gnp40):
    dist = bfs_distance_oracle(gnp40)
    for k in (1, 2, 3):
        idx = build_hop_index(gnp40, k)
        for v in range(gnp40.n_nodes):
            for h in range(k):
                expected = set(np.flatnonzero(dist[v] == h + 1).tolist())
                assert set(idx.hops[v][h].tolist()) == expected
            flat_expected = set(np.flatnonzero((dist[v] >= 1) & (dist[v] <= k)).tolist())
            assert set(idx.flat[v].tolist()) == flat_expected


def test_hop_index_independent_of_edge_order():
    g1 = random_gnp(30, 0.15, seed=9)
    shuffled = g1.edges[np.random.default_rng(1).permutation(len(g1.edges))][:, ::-1]
    g2 = _graph_from_edges(30, shuffled, np.zeros(30, dtype=np.int64), ["node"])
    i1 = build_hop_index(g1, 2)
    i2 = build_hop_index(g2, 2)
    for v in range(30):
        assert np.array_equal(i1.flat[v], i2.flat[v])


def test_k_out_of_range(gnp40):
    with pytest.raises(ValueError):
        build_hop_index(gnp40, 0)
    with pytest.raises(ValueError):
        build_hop_index(gnp40, 4)


def test_star_partition():
    g = star_graph(6)
    assign = partition_for_focus(g, [np.array([0])], 1)
    assert assign.hop_groups[0].tolist() == [1, 2, 3, 4, 5, 6]
    assert len(assign.discarded) == 0
    assert assign.tag_of(0) == "foc-0"
    assert assign.tag_of(3) == "hop-1"


def test_partition_is_total_and_disjoint(gnp40):
    assign = partition_for_focus(gnp40, [np.array([0, 1, 2])], 2)
    seen = np.zeros(gnp40.n_nodes, dtype=int)
    for _, members in assign.groups():
        seen[members] += 1
    seen[assign.discarded] += 1
    assert (seen == 1).all()


def test_partition_matches_bfs_buckets(gnp40):
    focal = np.array([4, 17, 30])
    assign = partition_for_focus(gnp40, [focal], 3)
    dist = bfs_distance_oracle(gnp40)
    to_focal = dist[:, focal].min(axis=1)
    for h in range(3):
        expected = set(np.flatnonzero(to_focal == h + 1).tolist())
        assert set(assign.hop_groups[h].tolist()) == expected


def test_leftmost_priority_between_focal_groups(gnp40):
    idx = build_hop_index(gnp40, 1)
    foc0 = np.array([0, 1])
    # pick foc-1 inside hop-1 of foc-0
    hop1_of_0 = np.union1d(idx.flat[0], idx.flat[1])
    hop1_of_0 = hop1_of_0[~np.isin(hop1_of_0, foc0)]
    foc1 = hop1_of_0[:2]
    assign = partition_for_focus(gnp40, [foc0, foc1], 1)
    # direct set subtraction oracle: hop-1 = neighbors(focal union) minus focal
    union = np.union1d(foc0, foc1)
    neigh = np.unique(np.concatenate([
        np.union1d(idx.flat[v], np.zeros(0, dtype=np.int64)) for v in union
    ]))
    expected_hop1 = set(neigh.tolist()) - set(union.tolist())
    assert set(assign.focal_groups[1].tolist()) == set(foc1.tolist())
    assert set(assign.hop_groups[0].tolist()) == expected_hop1
    assert not set(assign.hop_groups[0].tolist()) & set(foc1.tolist())


def test_overlapping_focal_groups_error(gnp40):
    with pytest.raises(ValueError, match="overlapping focal groups.*\\[1\\]"):
        partition_for_focus(gnp40, [np.array([0, 1]), np.array([1, 2])], 2)


def test_monotone_growing_focal_group(gnp40):
    tags = {}
    for size in (2, 5, 9):
        assign = partition_for_focus(gnp40, [np.arange(size)], 2)
        for v in range(gnp40.n_nodes):
            order = {"foc-0": 0, "hop-1": 1, "hop-2": 2, "discarded": 3}[assign.tag_of(v)]
            if v in tags:
                assert order <= tags[v], f"node {v} moved later when focal grew"
            tags[v] = order


def test_khop_subgraph_size_consistency():
    # partition sizes sum to the k-hop subgraph node count
    ds = cora_like(n_nodes=400, n_sparse=50, seed=3)
    assign = partition_for_focus(ds.graph, [np.arange(25)], 2)
    group_total = sum(len(m) for _, m in assign.groups())
    assert group_total == ds.graph.n_nodes - len(assign.discarded)
    assert group_total == len(assign.kept_nodes())

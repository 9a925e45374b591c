import json

import numpy as np
import pytest

from corgie.datasets import cora_like
from corgie.model import (
    DatasetError,
    Graph,
    Node,
    canonicalize_edges,
    load_dataset,
    serialize_dataset,
    validate,
)


def write_minimal(path, graph=None, embedding=None):
    graph = graph if graph is not None else {
        "nodes": [{"id": 0, "type": 0}, {"id": 1, "type": 0}],
        "edges": [[0, 1]],
        "nodeTypes": ["node"],
    }
    embedding = embedding if embedding is not None else "1.0,0.0\n0.0,1.0\n"
    (path / "graph.json").write_text(json.dumps(graph))
    (path / "embedding.csv").write_text(embedding)


def test_smallest_valid_graph(tmp_path):
    write_minimal(tmp_path)
    ds = load_dataset(tmp_path)
    assert ds.graph.n_nodes == 2
    assert ds.graph.n_edges == 1
    assert ds.predictions.kind == "none"
    assert validate(ds.graph, ds.features, ds.embedding, ds.predictions) == []


def test_cora_format_fixture_loads(tmp_path):
    ds = cora_like(seed=1)
    serialize_dataset(ds, tmp_path)
    loaded = load_dataset(tmp_path)
    assert loaded.graph.n_nodes == 2708
    assert loaded.features.sparse_count == 1433
    assert loaded.embedding.dim == 7
    assert loaded.predictions.kind == "nodeClassification"
    assert validate(loaded.graph, loaded.features, loaded.embedding, loaded.predictions) == []


def test_unknown_node_id_in_edge(tmp_path):
    write_minimal(tmp_path, graph={
        "nodes": [{"id": 0, "type": 0}, {"id": 1, "type": 0}],
        "edges": [[0, 2]],
        "nodeTypes": ["node"],
    })
    with pytest.raises(DatasetError, match="unknown node id"):
        load_dataset(tmp_path)


def test_missing_embedding_row(tmp_path):
    write_minimal(tmp_path, embedding="1.0,0.0\n")
    with pytest.raises(DatasetError, match="missing embedding row"):
        load_dataset(tmp_path)


def test_non_finite_value_rejected(tmp_path):
    write_minimal(tmp_path, embedding="1.0,0.0\nnan,1.0\n")
    with pytest.raises(DatasetError, match="non-finite"):
        load_dataset(tmp_path)


def test_zero_embedding_vector_rejected(tmp_path):
    write_minimal(tmp_path, embedding="1.0,0.0\n0.0,0.0\n")
    with pytest.raises(DatasetError, match="all-zero"):
        load_dataset(tmp_path)


def test_sparse_node_ids_remapped(tmp_path):
    write_minimal(tmp_path, graph={
        "nodes": [{"id": 31, "type": 0}, {"id": 7, "type": 0}],
        "edges": [[31, 7]],
        "nodeTypes": ["node"],
    })
    ds = load_dataset(tmp_path)
    assert [n.id for n in ds.graph.nodes] == [0, 1]
    assert ds.graph.original_ids == ["31", "7"]
    assert ds.graph.display_label(1) == "7"


def test_directed_duplicates_symmetrized(tmp_path):
    write_minimal(tmp_path, graph={
        "nodes": [{"id": 0}, {"id": 1}],
        "edges": [[0, 1], [1, 0], [1, 1]],
        "nodeTypes": ["node"],
    })
    ds = load_dataset(tmp_path)
    assert ds.graph.n_edges == 1
    assert ds.graph.edges.tolist() == [[0, 1]]


def test_edge_canonicalization_idempotent():
    rng = np.random.default_rng(0)
    edges = rng.integers(0, 20, (60, 2))
    once, _, _ = canonicalize_edges(edges, 20)
    twice, loops, dupes = canonicalize_edges(once, 20)
    assert np.array_equal(once, twice)
    assert loops == 0 and dupes == 0


def test_validate_clean_movie_fixture(small_movie_dataset):
    ds = small_movie_dataset
    assert validate(ds.graph, ds.features, ds.embedding, ds.predictions) == []
    assert len(ds.graph.node_types) == 2


def test_validate_too_many_node_types():
    nodes = [Node(id=i, type_index=i) for i in range(7)]
    graph = Graph(nodes=nodes, edges=np.zeros((0, 2), dtype=np.int64),
                  node_types=[f"t{i}" for i in range(7)])
    diagnostics = validate(graph)
    assert any("exceeds design target of 6 node types" in d.message for d in diagnostics)
    assert all(d.severity == "warning" for d in diagnostics)


def test_validate_duplicate_edge():
    nodes = [Node(id=0, type_index=0), Node(id=1, type_index=0)]
    graph = Graph(nodes=nodes, edges=np.array([[0, 1], [0, 1]]), node_types=["node"])
    diagnostics = validate(graph)
    assert any("duplicate edge (0,1)" in d.message for d in diagnostics)


def test_round_trip_semantically_identical(tmp_path, small_movie_dataset):
    serialize_dataset(small_movie_dataset, tmp_path)
    loaded = load_dataset(tmp_path)
    a, b = small_movie_dataset, loaded
    assert np.array_equal(a.graph.edges, b.graph.edges)
    assert a.graph.node_types == b.graph.node_types
    assert [n.type_index for n in a.graph.nodes] == [n.type_index for n in b.graph.nodes]
    assert np.allclose(a.dense_values if hasattr(a, "dense_values") else a.features.dense_values,
                       b.features.dense_values)
    assert np.allclose(a.embedding.vectors, b.embedding.vectors)
    assert np.array_equal(a.features.dense_mask, b.features.dense_mask)
    assert (a.features.sparse_values != b.features.sparse_values).nnz == 0
    assert np.array_equal(a.predictions.predicted_pairs, b.predictions.predicted_pairs)
    assert np.array_equal(a.predictions.predicted_connected, b.predictions.predicted_connected)


def test_link_predictions_accept_scores(tmp_path):
    write_minimal(tmp_path)
    (tmp_path / "predictions.json").write_text(json.dumps({"pairs": [[0, 1, 0.8], [0, 1, 0.2]]}))
    ds = load_dataset(tmp_path)
    assert ds.predictions.kind == "linkPrediction"
    assert ds.predictions.predicted_connected.tolist() == [True, False]

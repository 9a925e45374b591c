"""Canonical in-memory representation of an input graph, its features, the
node embedding, and optional prediction results.

A dataset directory holds:

- ``graph.json``            {nodes:[{id,type,label?}], edges:[[a,b]], nodeTypes:[...]}
- ``features-dense.csv``    header row = feature names, one row per node
- ``features-sparse.txt``   lines of ``nodeId featureId value``
- ``feature-meta.json``     {perTypeMask: {...}, sparseNames: [...], sparseCount: F}
- ``embedding.csv``         one row per node, d columns
- ``predictions.json``      {trueLabels,predLabels} or {pairs:[[a,b,score|bool]]}

All numeric parsing uses ``.`` as the decimal separator regardless of locale.
Node ids in the input files may be sparse or string-valued; they are remapped
to dense ``0..N-1`` in order of appearance in ``graph.json`` and the original
ids are kept for display.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

MAX_NODES = 20_000
MAX_NODE_TYPES = 6
MAX_DENSE_FEATURES = 12
MAX_SPARSE_FEATURES = 2_000


class DatasetError(ValueError):
    """Raised when a dataset file is missing, malformed, or inconsistent."""

    def __init__(self, message: str, source: str | None = None, record: int | str | None = None):
        loc = source or ""
        if record is not None:
            loc += f":{record}"
        super().__init__(f"{loc}: {message}" if loc else message)
        self.source = source
        self.record = record


@dataclass(frozen=True)
class Node:
    id: int
    type_index: int
    label: str | None = None


@dataclass
class Graph:
    """Undirected graph with dense 0..N-1 node ids and canonical edges.

    Edges are stored as an ``E x 2`` int array with ``edges[:, 0] < edges[:, 1]``,
    deduplicated and free of self-loops.
    """

    nodes: list[Node]
    edges: np.ndarray
    node_types: list[str]
    original_ids: list[str] = field(default_factory=list)
    _adj: sp.csr_matrix | None = field(default=None, repr=False, compare=False)
    _neighbor_lists: list[np.ndarray] | None = field(default=None, repr=False, compare=False)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def type_indices(self) -> np.ndarray:
        return np.array([n.type_index for n in self.nodes], dtype=np.int32)

    def adjacency(self) -> sp.csr_matrix:
        """Boolean symmetric adjacency matrix (no diagonal)."""
        if self._adj is None:
            n = self.n_nodes
            if len(self.edges):
                a, b = self.edges[:, 0], self.edges[:, 1]
                rows = np.concatenate([a, b])
                cols = np.concatenate([b, a])
                data = np.ones(len(rows), dtype=bool)
                adj = sp.csr_matrix((data, (rows, cols)), shape=(n, n), dtype=bool)
            else:
                adj = sp.csr_matrix((n, n), dtype=bool)
            self._adj = adj
        return self._adj

    def neighbor_lists(self) -> list[np.ndarray]:
        """Sorted direct-neighbor id array per node."""
        if self._neighbor_lists is None:
            adj = self.adjacency()
            self._neighbor_lists = [
                adj.indices[adj.indptr[i]:adj.indptr[i + 1]].astype(np.int64)
                for i in range(self.n_nodes)
            ]
        return self._neighbor_lists

    def edge_key_set(self) -> set[tuple[int, int]]:
        return {(int(a), int(b)) for a, b in self.edges}

    def display_label(self, node_id: int) -> str:
        node = self.nodes[node_id]
        if node.label:
            return node.label
        if self.original_ids:
            return self.original_ids[node_id]
        return str(node_id)


@dataclass
class FeatureTable:
    """Dense and sparse per-node features with a per-type applicability mask.

    A node of type ``t`` has defined values exactly for the features enabled in
    ``dense_mask[t]`` / ``sparse_mask[t]``; everything else is *absent*, not
    zero, which matters for histogram scopes and feature distances.
    """

    dense_names: list[str]
    dense_values: np.ndarray            # N x D float64
    sparse_values: sp.csr_matrix        # N x F float64, nonnegative
    sparse_names: list[str]
    dense_mask: np.ndarray              # T x D bool
    sparse_mask: np.ndarray             # T x F bool

    @property
    def n_dense(self) -> int:
        return self.dense_values.shape[1]

    @property
    def sparse_count(self) -> int:
        return self.sparse_values.shape[1]

    def node_has_dense(self, type_indices: np.ndarray, feature: int) -> np.ndarray:
        """Boolean mask over nodes possessing the given dense feature."""
        return self.dense_mask[type_indices, feature]

    def dense_ranges(self, type_indices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Per-feature (min, max) over the nodes possessing each feature.

        Features possessed by no node get the degenerate range (0, 0).
        """
        d = self.n_dense
        lo = np.zeros(d)
        hi = np.zeros(d)
        for f in range(d):
            mask = self.node_has_dense(type_indices, f)
            if mask.any():
                col = self.dense_values[mask, f]
                lo[f], hi[f] = col.min(), col.max()
        return lo, hi

    @staticmethod
    def empty(n_nodes: int, n_types: int) -> "FeatureTable":
        return FeatureTable(
            dense_names=[],
            dense_values=np.zeros((n_nodes, 0)),
            sparse_values=sp.csr_matrix((n_nodes, 0)),
            sparse_names=[],
            dense_mask=np.zeros((n_types, 0), dtype=bool),
            sparse_mask=np.zeros((n_types, 0), dtype=bool),
        )


@dataclass
class Embedding:
    """Per-node latent vectors; rejects all-zero rows at construction."""

    vectors: np.ndarray  # N x d float64

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def n_nodes(self) -> int:
        return self.vectors.shape[0]

    def unit_vectors(self) -> np.ndarray:
        norms = np.linalg.norm(self.vectors, axis=1, keepdims=True)
        return self.vectors / norms


@dataclass
class PredictionData:
    """Optional downstream prediction results.

    ``kind`` is one of ``nodeClassification``, ``linkPrediction``, ``none``.
    Link-prediction pairs carry a predicted-connected flag; score inputs are
    thresholded at 0.5 during loading.
    """

    kind: str = "none"
    true_labels: np.ndarray | None = None
    pred_labels: np.ndarray | None = None
    predicted_pairs: np.ndarray | None = None      # P x 2 int
    predicted_connected: np.ndarray | None = None  # P bool

    @staticmethod
    def none() -> "PredictionData":
        return PredictionData(kind="none")


@dataclass
class Dataset:
    graph: Graph
    features: FeatureTable
    embedding: Embedding
    predictions: PredictionData


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.message}"


def canonicalize_edges(edges: np.ndarray, n_nodes: int) -> tuple[np.ndarray, int, int]:
    """Return (canonical edges, dropped self-loops, dropped duplicates).

    Canonical form: smaller id first, sorted lexicographically, deduplicated.
    Idempotent on already-canonical input.
    """
    if len(edges) == 0:
        return np.zeros((0, 2), dtype=np.int64), 0, 0
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    self_loops = int(np.sum(edges[:, 0] == edges[:, 1]))
    edges = edges[edges[:, 0] != edges[:, 1]]
    lo = np.minimum(edges[:, 0], edges[:, 1])
    hi = np.maximum(edges[:, 0], edges[:, 1])
    stacked = np.stack([lo, hi], axis=1)
    uniq = np.unique(stacked, axis=0)
    dupes = len(stacked) - len(uniq)
    return uniq, self_loops, dupes


def _parse_float(text: str, source: str, record: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DatasetError(f"not a number: {text!r}", source, record) from None
    if not np.isfinite(value):
        raise DatasetError(f"non-finite value: {text!r}", source, record)
    return value


def _load_graph_json(path: Path) -> tuple[Graph, dict[str, int], list[Diagnostic]]:
    source = path.name
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DatasetError(f"invalid JSON: {exc}", source) from None
    diagnostics: list[Diagnostic] = []

    node_types = list(raw.get("nodeTypes") or ["node"])
    type_by_name = {name: i for i, name in enumerate(node_types)}

    nodes: list[Node] = []
    original_ids: list[str] = []
    id_map: dict[str, int] = {}
    for rec, entry in enumerate(raw.get("nodes", [])):
        orig = str(entry["id"])
        if orig in id_map:
            raise DatasetError(f"duplicate node id {orig!r}", source, rec)
        idx = len(nodes)
        id_map[orig] = idx
        t = entry.get("type", 0)
        if isinstance(t, str):
            if t not in type_by_name:
                raise DatasetError(f"unknown node type {t!r}", source, rec)
            t = type_by_name[t]
        if not 0 <= int(t) < len(node_types):
            raise DatasetError(f"type index {t} out of range", source, rec)
        nodes.append(Node(id=idx, type_index=int(t), label=entry.get("label")))
        original_ids.append(orig)
    if not nodes:
        raise DatasetError("graph has no nodes", source)

    edges = []
    for rec, pair in enumerate(raw.get("edges", [])):
        a, b = str(pair[0]), str(pair[1])
        for v in (a, b):
            if v not in id_map:
                raise DatasetError(f"unknown node id {v!r} in edge", source, rec)
        edges.append((id_map[a], id_map[b]))
    edge_arr = np.array(edges, dtype=np.int64).reshape(-1, 2)
    canonical, self_loops, dupes = canonicalize_edges(edge_arr, len(nodes))
    if self_loops:
        diagnostics.append(Diagnostic("warning", f"dropped {self_loops} self-loop(s)"))
    if dupes:
        diagnostics.append(Diagnostic("warning", f"dropped {dupes} duplicate edge(s) after symmetrizing"))

    graph = Graph(nodes=nodes, edges=canonical, node_types=node_types, original_ids=original_ids)
    return graph, id_map, diagnostics


def _load_dense_csv(path: Path, n_nodes: int) -> tuple[list[str], np.ndarray]:
    source = path.name
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError("empty file", source) from None
        names = [h.strip() for h in header]
        rows: list[list[float]] = []
        for rec, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(names):
                raise DatasetError(f"expected {len(names)} columns, got {len(row)}", source, rec)
            rows.append([_parse_float(cell, source, rec) for cell in row])
    if len(rows) != n_nodes:
        raise DatasetError(f"expected {n_nodes} rows, got {len(rows)}", source)
    values = np.array(rows, dtype=np.float64).reshape(n_nodes, len(names))
    return names, values


def _load_sparse_txt(path: Path, n_nodes: int, id_map: dict[str, int], n_features: int | None) -> sp.csr_matrix:
    source = path.name
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    max_fid = -1
    with path.open() as fh:
        for rec, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise DatasetError("expected 'nodeId featureId value'", source, rec)
            nid, fid_s, val_s = parts
            if nid not in id_map:
                raise DatasetError(f"unknown node id {nid!r}", source, rec)
            fid = int(fid_s)
            if fid < 0:
                raise DatasetError(f"negative feature id {fid}", source, rec)
            val = _parse_float(val_s, source, rec)
            if val < 0:
                raise DatasetError(f"negative sparse value {val}", source, rec)
            rows.append(id_map[nid])
            cols.append(fid)
            vals.append(val)
            max_fid = max(max_fid, fid)
    width = n_features if n_features is not None else max_fid + 1
    if max_fid >= width:
        raise DatasetError(f"feature id {max_fid} exceeds declared count {width}", source)
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(n_nodes, max(width, 0)), dtype=np.float64)
    mat.sum_duplicates()
    return mat


def _resolve_mask(spec, names: list[str], width: int) -> np.ndarray:
    """Mask spec: true (all), false (none), or a list of names/indices."""
    mask = np.zeros(width, dtype=bool)
    if spec is True:
        mask[:] = True
    elif spec is False:
        pass
    elif isinstance(spec, list):
        index_of = {n: i for i, n in enumerate(names)}
        for item in spec:
            if isinstance(item, str):
                if item not in index_of:
                    raise DatasetError(f"unknown feature name {item!r} in perTypeMask", "feature-meta.json")
                mask[index_of[item]] = True
            else:
                mask[int(item)] = True
    else:
        raise DatasetError(f"bad mask spec {spec!r}", "feature-meta.json")
    return mask


def _load_feature_meta(
    path: Path | None,
    graph: Graph,
    dense_names: list[str],
    sparse_width: int,
) -> tuple[list[str], np.ndarray, np.ndarray]:
    t = len(graph.node_types)
    dense_mask = np.ones((t, len(dense_names)), dtype=bool)
    sparse_mask = np.ones((t, sparse_width), dtype=bool)
    sparse_names = [f"f{i}" for i in range(sparse_width)]
    if path is None or not path.exists():
        return sparse_names, dense_mask, sparse_mask
    raw = json.loads(path.read_text())
    if "sparseNames" in raw:
        declared = list(raw["sparseNames"])
        if len(declared) != sparse_width and sparse_width > 0:
            raise DatasetError(
                f"sparseNames has {len(declared)} entries, expected {sparse_width}", path.name
            )
        sparse_names = declared or sparse_names
    per_type = raw.get("perTypeMask", {})
    sparse_name_list = sparse_names
    for type_name, masks in per_type.items():
        if type_name not in graph.node_types:
            raise DatasetError(f"unknown node type {type_name!r} in perTypeMask", path.name)
        ti = graph.node_types.index(type_name)
        if "dense" in masks:
            dense_mask[ti] = _resolve_mask(masks["dense"], dense_names, len(dense_names))
        if "sparse" in masks:
            sparse_mask[ti] = _resolve_mask(masks["sparse"], sparse_name_list, sparse_width)
    return sparse_names, dense_mask, sparse_mask


def _load_embedding_csv(path: Path, n_nodes: int) -> Embedding:
    source = path.name
    rows: list[list[float]] = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        for rec, row in enumerate(reader, start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            rows.append([_parse_float(cell, source, rec) for cell in row])
    if len(rows) < n_nodes:
        raise DatasetError(f"missing embedding row: expected {n_nodes} rows, got {len(rows)}", source)
    if len(rows) > n_nodes:
        raise DatasetError(f"expected {n_nodes} rows, got {len(rows)}", source)
    vectors = np.array(rows, dtype=np.float64)
    if vectors.shape[1] < 2:
        raise DatasetError(f"embedding dimension must be >= 2, got {vectors.shape[1]}", source)
    zero_rows = np.flatnonzero(np.linalg.norm(vectors, axis=1) == 0)
    if len(zero_rows):
        raise DatasetError(f"all-zero embedding vector for node row {zero_rows[0]}", source, int(zero_rows[0]) + 1)
    return Embedding(vectors=vectors)


def _load_predictions(path: Path, n_nodes: int, id_map: dict[str, int]) -> PredictionData:
    source = path.name
    raw = json.loads(path.read_text())
    if "trueLabels" in raw or "predLabels" in raw:
        true_labels = np.asarray(raw["trueLabels"], dtype=np.int64)
        pred_labels = np.asarray(raw["predLabels"], dtype=np.int64)
        if len(true_labels) != n_nodes or len(pred_labels) != n_nodes:
            raise DatasetError(
                f"label vectors must have {n_nodes} entries "
                f"(got {len(true_labels)}/{len(pred_labels)})",
                source,
            )
        return PredictionData(kind="nodeClassification", true_labels=true_labels, pred_labels=pred_labels)
    if "pairs" in raw:
        pairs = []
        connected = []
        for rec, entry in enumerate(raw["pairs"]):
            a, b, value = str(entry[0]), str(entry[1]), entry[2]
            for v in (a, b):
                if v not in id_map:
                    raise DatasetError(f"unknown node id {v!r} in predicted pair", source, rec)
            ai, bi = id_map[a], id_map[b]
            if ai == bi:
                raise DatasetError("self-pair in predictions", source, rec)
            if isinstance(value, bool):
                flag = value
            else:
                flag = _parse_float(str(value), source, rec) >= 0.5
            pairs.append((min(ai, bi), max(ai, bi)))
            connected.append(flag)
        return PredictionData(
            kind="linkPrediction",
            predicted_pairs=np.array(pairs, dtype=np.int64).reshape(-1, 2),
            predicted_connected=np.array(connected, dtype=bool),
        )
    raise DatasetError("predictions.json needs trueLabels/predLabels or pairs", source)


def load_dataset(directory: str | Path) -> Dataset:
    """Load a dataset directory into validated in-memory objects.

    Missing optional files (features, predictions) yield empty tables; a
    missing ``graph.json`` or ``embedding.csv`` is an error.
    """
    directory = Path(directory)
    graph_path = directory / "graph.json"
    if not graph_path.exists():
        raise DatasetError("file not found", str(graph_path))
    graph, id_map, _ = _load_graph_json(graph_path)
    n = graph.n_nodes

    dense_path = directory / "features-dense.csv"
    if dense_path.exists():
        dense_names, dense_values = _load_dense_csv(dense_path, n)
    else:
        dense_names, dense_values = [], np.zeros((n, 0))

    meta_path = directory / "feature-meta.json"
    declared_sparse: int | None = None
    if meta_path.exists():
        meta_raw = json.loads(meta_path.read_text())
        if "sparseCount" in meta_raw:
            declared_sparse = int(meta_raw["sparseCount"])
        elif "sparseNames" in meta_raw:
            declared_sparse = len(meta_raw["sparseNames"])

    sparse_path = directory / "features-sparse.txt"
    if sparse_path.exists():
        sparse_values = _load_sparse_txt(sparse_path, n, id_map, declared_sparse)
    else:
        sparse_values = sp.csr_matrix((n, declared_sparse or 0), dtype=np.float64)

    sparse_names, dense_mask, sparse_mask = _load_feature_meta(
        meta_path if meta_path.exists() else None, graph, dense_names, sparse_values.shape[1]
    )
    features = FeatureTable(
        dense_names=dense_names,
        dense_values=dense_values,
        sparse_values=sparse_values,
        sparse_names=sparse_names,
        dense_mask=dense_mask,
        sparse_mask=sparse_mask,
    )

    embedding_path = directory / "embedding.csv"
    if not embedding_path.exists():
        raise DatasetError("file not found", str(embedding_path))
    embedding = _load_embedding_csv(embedding_path, n)

    predictions_path = directory / "predictions.json"
    if predictions_path.exists():
        predictions = _load_predictions(predictions_path, n, id_map)
    else:
        predictions = PredictionData.none()

    return Dataset(graph=graph, features=features, embedding=embedding, predictions=predictions)


def validate(
    graph: Graph,
    features: FeatureTable | None = None,
    embedding: Embedding | None = None,
    predictions: PredictionData | None = None,
) -> list[Diagnostic]:
    """Check every type invariant; returns an empty list iff all hold.

    Soft design limits (node count, type count, feature counts) produce
    warnings; structural violations produce errors.
    """
    out: list[Diagnostic] = []
    n = graph.n_nodes

    ids = [node.id for node in graph.nodes]
    if ids != list(range(n)):
        out.append(Diagnostic("error", "node ids are not dense 0..N-1"))
    for node in graph.nodes:
        if not 0 <= node.type_index < len(graph.node_types):
            out.append(Diagnostic("error", f"node {node.id} has type index {node.type_index} out of range"))
    if n > MAX_NODES:
        out.append(Diagnostic("warning", f"{n} nodes exceeds design target of {MAX_NODES}"))
    if len(graph.node_types) > MAX_NODE_TYPES:
        out.append(
            Diagnostic("warning", f"{len(graph.node_types)} node types exceeds design target of {MAX_NODE_TYPES} node types")
        )

    edges = graph.edges
    if len(edges):
        if edges.min() < 0 or edges.max() >= n:
            out.append(Diagnostic("error", "edge references unknown node id"))
        loops = edges[edges[:, 0] == edges[:, 1]]
        for a, _ in loops:
            out.append(Diagnostic("error", f"self-loop ({a},{a})"))
        noncanon = edges[edges[:, 0] > edges[:, 1]]
        for a, b in noncanon:
            out.append(Diagnostic("error", f"edge ({a},{b}) not in canonical order"))
        lo = np.minimum(edges[:, 0], edges[:, 1])
        hi = np.maximum(edges[:, 0], edges[:, 1])
        stacked = np.stack([lo, hi], axis=1)
        uniq, counts = np.unique(stacked, axis=0, return_counts=True)
        for (a, b) in uniq[counts > 1]:
            out.append(Diagnostic("error", f"duplicate edge ({a},{b})"))

    if features is not None:
        if features.dense_values.shape[0] != n:
            out.append(Diagnostic("error", "dense feature row count differs from node count"))
        elif features.dense_values.size and not np.isfinite(features.dense_values).all():
            out.append(Diagnostic("error", "non-finite dense feature value"))
        if features.sparse_values.shape[0] != n:
            out.append(Diagnostic("error", "sparse feature row count differs from node count"))
        elif features.sparse_values.nnz and features.sparse_values.data.min() < 0:
            out.append(Diagnostic("error", "negative sparse feature value"))
        if features.n_dense > MAX_DENSE_FEATURES:
            out.append(Diagnostic("warning", f"{features.n_dense} dense features exceeds design target of {MAX_DENSE_FEATURES}"))
        if features.sparse_count > MAX_SPARSE_FEATURES:
            out.append(Diagnostic("warning", f"{features.sparse_count} sparse features exceeds design target of {MAX_SPARSE_FEATURES}"))

    if embedding is not None:
        if embedding.n_nodes != n:
            out.append(Diagnostic("error", "embedding row count differs from node count"))
        else:
            if not np.isfinite(embedding.vectors).all():
                out.append(Diagnostic("error", "non-finite embedding value"))
            if embedding.dim < 2:
                out.append(Diagnostic("error", "embedding dimension must be >= 2"))
            norms = np.linalg.norm(embedding.vectors, axis=1)
            for idx in np.flatnonzero(norms == 0):
                out.append(Diagnostic("error", f"all-zero embedding vector for node {idx}"))

    if predictions is not None and predictions.kind == "nodeClassification":
        for name, labels in (("trueLabels", predictions.true_labels), ("predLabels", predictions.pred_labels)):
            if labels is None or len(labels) != n:
                out.append(Diagnostic("error", f"{name} not defined for all nodes"))
    if predictions is not None and predictions.kind == "linkPrediction":
        pairs = predictions.predicted_pairs
        if pairs is None or predictions.predicted_connected is None:
            out.append(Diagnostic("error", "link prediction data missing pairs"))
        elif len(pairs) and (pairs.min() < 0 or pairs.max() >= n):
            out.append(Diagnostic("error", "predicted pair references unknown node id"))

    return out


def serialize_dataset(dataset: Dataset, directory: str | Path) -> None:
    """Write a dataset back out in the directory format (round-trip aid)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    graph = dataset.graph
    graph_doc = {
        "nodes": [
            {"id": node.id, "type": node.type_index, **({"label": node.label} if node.label else {})}
            for node in graph.nodes
        ],
        "edges": [[int(a), int(b)] for a, b in graph.edges],
        "nodeTypes": graph.node_types,
    }
    (directory / "graph.json").write_text(json.dumps(graph_doc, indent=1, sort_keys=True))

    feats = dataset.features
    if feats.n_dense:
        with (directory / "features-dense.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(feats.dense_names)
            writer.writerows(feats.dense_values.tolist())
    if feats.sparse_count:
        coo = feats.sparse_values.tocoo()
        lines = [f"{r} {c} {v}" for r, c, v in zip(coo.row, coo.col, coo.data)]
        (directory / "features-sparse.txt").write_text("\n".join(lines) + ("\n" if lines else ""))
    meta: dict = {"sparseCount": feats.sparse_count, "sparseNames": feats.sparse_names, "perTypeMask": {}}
    for ti, type_name in enumerate(graph.node_types):
        meta["perTypeMask"][type_name] = {
            "dense": [feats.dense_names[i] for i in np.flatnonzero(feats.dense_mask[ti])],
            "sparse": True if feats.sparse_mask[ti].all() else [int(i) for i in np.flatnonzero(feats.sparse_mask[ti])],
        }
    (directory / "feature-meta.json").write_text(json.dumps(meta, indent=1, sort_keys=True))

    with (directory / "embedding.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerows(dataset.embedding.vectors.tolist())

    preds = dataset.predictions
    if preds.kind == "nodeClassification":
        doc = {"trueLabels": preds.true_labels.tolist(), "predLabels": preds.pred_labels.tolist()}
        (directory / "predictions.json").write_text(json.dumps(doc))
    elif preds.kind == "linkPrediction":
        doc = {
            "pairs": [
                [int(a), int(b), bool(c)]
                for (a, b), c in zip(preds.predicted_pairs, preds.predicted_connected)
            ]
        }
        (directory / "predictions.json").write_text(json.dumps(doc))

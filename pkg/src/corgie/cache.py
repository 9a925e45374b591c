"""Content-hash keyed artifact cache for preprocessing outputs.

Each artifact lives in its own JSON file under the cache directory with the
key it was computed from; a key mismatch (changed inputs, K, seed, or
parameters) invalidates just that artifact.  The cache directory defaults to
``<dataset>/cache`` and can be overridden with ``CORGIE_CACHE_DIR``.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

import numpy as np

from .model import Dataset, Embedding, FeatureTable, Graph

SCHEMA_VERSION = 1


def _digest(parts: list[bytes]) -> str:
    h = hashlib.sha256()
    for part in parts:
        h.update(part)
        h.update(b"\x00")
    return h.hexdigest()


def graph_hash(graph: Graph) -> str:
    meta = json.dumps(
        {"types": graph.node_types, "typeIndices": graph.type_indices().tolist()},
        sort_keys=True,
    ).encode()
    return _digest([meta, np.ascontiguousarray(graph.edges).tobytes(), str(graph.n_nodes).encode()])


def embedding_hash(embedding: Embedding) -> str:
    return _digest([np.ascontiguousarray(embedding.vectors).tobytes()])


def features_hash(features: FeatureTable) -> str:
    sparse = features.sparse_values.tocsr()
    sparse.sort_indices()
    return _digest(
        [
            json.dumps(features.dense_names).encode(),
            np.ascontiguousarray(features.dense_values).tobytes(),
            sparse.indptr.tobytes(),
            sparse.indices.tobytes(),
            sparse.data.tobytes(),
            features.dense_mask.tobytes(),
            features.sparse_mask.tobytes(),
        ]
    )


def dataset_hashes(dataset: Dataset) -> dict[str, str]:
    return {
        "graph": graph_hash(dataset.graph),
        "embedding": embedding_hash(dataset.embedding),
        "features": features_hash(dataset.features),
    }


def resolve_cache_dir(dataset_dir: str | Path, override: str | Path | None = None) -> Path:
    if override is not None:
        return Path(override)
    env = os.environ.get("CORGIE_CACHE_DIR")
    if env:
        return Path(env)
    return Path(dataset_dir) / "cache"


class ArtifactCache:
    """get/put of keyed JSON artifacts, one file per artifact name."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def _path(self, name: str) -> Path:
        return self.directory / f"{name}.json"

    def get(self, name: str, key: str) -> dict | None:
        path = self._path(name)
        if not path.exists():
            return None
        try:
            doc = json.loads(path.read_text())
        except (json.JSONDecodeError, OSError):
            return None
        if doc.get("key") != key or doc.get("schema") != SCHEMA_VERSION:
            return None
        return doc.get("payload")

    def put(self, name: str, key: str, payload: dict) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        doc = {"schema": SCHEMA_VERSION, "key": key, "payload": payload}
        tmp = self._path(name).with_suffix(".json.tmp")
        tmp.write_text(json.dumps(doc, sort_keys=True))
        tmp.replace(self._path(name))

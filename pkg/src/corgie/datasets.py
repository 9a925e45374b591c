"""Synthetic dataset generators for demos, benchmarks, and tests.

Three families:

- ``movie_like``: a bipartite user/movie graph with clustered viewing
  behavior, per-type dense features, a 16-dim embedding that co-locates
  users with the movies they watch, and link-prediction results.
- ``cora_like``: a citation-style graph with class-clustered topology,
  sparse bag-of-words features, a 7-dim embedding, and node-classification
  labels with a configurable error rate.
- ``planted_anomaly``: a small clique fixture containing exactly one node
  pair with near-maximal latent distance but near-zero topological distance.

All generators are deterministic under their seed.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .model import (
    Dataset,
    Embedding,
    FeatureTable,
    Graph,
    Node,
    PredictionData,
    canonicalize_edges,
)


def _graph_from_edges(
    n_nodes: int,
    edges: np.ndarray,
    type_indices: np.ndarray,
    node_types: list[str],
    labels: list[str] | None = None,
) -> Graph:
    canonical, _, _ = canonicalize_edges(np.asarray(edges, dtype=np.int64), n_nodes)
    nodes = [
        Node(id=i, type_index=int(type_indices[i]), label=labels[i] if labels else None)
        for i in range(n_nodes)
    ]
    return Graph(nodes=nodes, edges=canonical, node_types=node_types,
                 original_ids=[str(i) for i in range(n_nodes)])


def random_gnp(n: int, p: float, seed: int = 0) -> Graph:
    """Erdos-Renyi G(n, p) test graph."""
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, k=1)
    mask = rng.random(len(iu[0])) < p
    edges = np.stack([iu[0][mask], iu[1][mask]], axis=1)
    return _graph_from_edges(n, edges, np.zeros(n, dtype=np.int64), ["node"])


def movie_like(
    n_users: int = 700,
    n_movies: int = 300,
    n_clusters: int = 10,
    niche_per_cluster: int | None = None,
    watches_per_user: int = 5,
    popular_per_user: int = 2,
    dim: int = 16,
    seed: int = 7,
) -> Dataset:
    """Bipartite user/movie dataset shaped like a recommendation workload."""
    rng = np.random.default_rng(seed)
    n = n_users + n_movies
    movie_off = n_users
    if niche_per_cluster is None:
        niche_per_cluster = (n_movies * 5 // 6) // n_clusters
    n_niche = n_clusters * niche_per_cluster
    if n_niche > n_movies:
        raise ValueError("niche movies exceed the movie count")

    user_cluster = np.repeat(np.arange(n_clusters), -(-n_users // n_clusters))[:n_users]
    movie_cluster = np.full(n_movies, -1, dtype=np.int64)  # -1 = popular pool
    movie_cluster[:n_niche] = np.repeat(np.arange(n_clusters), niche_per_cluster)
    popular_pool = np.flatnonzero(movie_cluster == -1)

    edges = []
    for u in range(n_users):
        c = user_cluster[u]
        own = np.flatnonzero(movie_cluster == c)
        picks = rng.choice(own, size=min(watches_per_user, len(own)), replace=False)
        pops = rng.choice(popular_pool, size=min(popular_per_user, len(popular_pool)), replace=False)
        for m in np.concatenate([picks, pops]):
            edges.append((u, movie_off + m))

    type_indices = np.concatenate([np.zeros(n_users, dtype=np.int64), np.ones(n_movies, dtype=np.int64)])
    labels = [f"user {u}" for u in range(n_users)] + [f"movie #{m}" for m in range(n_movies)]
    graph = _graph_from_edges(n, np.array(edges), type_indices, ["user", "movie"], labels)

    # embedding: cluster centers; users and their niche movies share a center,
    # with users noisier than movies so a user's nearest unconnected nodes are
    # the unwatched movies of their own cluster
    centers = rng.normal(0.0, 1.0, (n_clusters, dim))
    centers /= np.linalg.norm(centers, axis=1, keepdims=True)
    popular_center = centers.mean(axis=0)
    vectors = np.zeros((n, dim))
    vectors[:n_users] = centers[user_cluster] + rng.normal(0.0, 0.15, (n_users, dim))
    niche = movie_cluster >= 0
    vectors[movie_off:][niche] = centers[movie_cluster[niche]] + rng.normal(0.0, 0.02, (int(niche.sum()), dim))
    vectors[movie_off:][~niche] = popular_center + rng.normal(0.0, 0.02, (int((~niche).sum()), dim))

    # dense features: five movie columns, two user columns
    dense_names = ["budget", "popularity", "voteAverage", "castCount", "crewCount", "userVoteAverage", "voteCount"]
    dense = np.zeros((n, len(dense_names)))
    dense[movie_off:, 0] = rng.lognormal(16.0, 1.0, n_movies)
    dense[movie_off:, 1] = rng.gamma(2.0, 8.0, n_movies)
    dense[movie_off:, 2] = np.clip(rng.normal(6.5, 1.2, n_movies), 0.0, 10.0)
    dense[movie_off:, 3] = rng.integers(5, 80, n_movies)
    dense[movie_off:, 4] = rng.integers(10, 200, n_movies)
    dense[:n_users, 5] = np.clip(rng.normal(7.0, 1.5, n_users), 0.0, 10.0)
    dense[:n_users, 6] = rng.integers(1, 50, n_users)
    dense_mask = np.zeros((2, len(dense_names)), dtype=bool)
    dense_mask[0, 5:] = True   # user columns
    dense_mask[1, :5] = True   # movie columns
    features = FeatureTable(
        dense_names=dense_names,
        dense_values=dense,
        sparse_values=sp.csr_matrix((n, 0)),
        sparse_names=[],
        dense_mask=dense_mask,
        sparse_mask=np.ones((2, 0), dtype=bool),
    )

    # link predictions: edges predicted mostly connected, plus recommendations
    pair_list = []
    connected = []
    edge_sample = graph.edges[rng.choice(len(graph.edges), size=min(800, len(graph.edges)), replace=False)]
    for a, b in edge_sample:
        pair_list.append((int(a), int(b)))
        connected.append(bool(rng.random() > 0.1))  # ~10% false negatives
    edge_keys = graph.edge_key_set()
    tries = 0
    while len(pair_list) < len(edge_sample) + 400 and tries < 10_000:
        tries += 1
        u = int(rng.integers(0, n_users))
        m = int(rng.integers(movie_off, n))
        if (u, m) in edge_keys:
            continue
        pair_list.append((u, m))
        connected.append(bool(rng.random() < 0.3))  # some false positives
    predictions = PredictionData(
        kind="linkPrediction",
        predicted_pairs=np.array(pair_list, dtype=np.int64),
        predicted_connected=np.array(connected, dtype=bool),
    )

    return Dataset(graph=graph, features=features, embedding=Embedding(vectors), predictions=predictions)


def movie_focus_groups(dataset: Dataset, group_size: int = 40) -> list[np.ndarray]:
    """Two focal user groups from distinct clusters; with K=2 this yields a
    four-box layout whose hop-2 box holds most remaining users."""
    users = [v for v in range(dataset.graph.n_nodes) if dataset.graph.nodes[v].type_index == 0]
    return [
        np.array(users[:group_size], dtype=np.int64),
        np.array(users[len(users) // 2:len(users) // 2 + group_size], dtype=np.int64),
    ]


def cora_like(
    n_nodes: int = 2708,
    n_sparse: int = 1433,
    n_classes: int = 7,
    avg_degree: float = 2.0,
    words_per_node: int = 18,
    dim: int = 7,
    error_rate: float = 0.12,
    seed: int = 11,
) -> Dataset:
    """Citation-style dataset: class-clustered edges, bag-of-words features,
    and node-classification predictions."""
    rng = np.random.default_rng(seed)
    classes = rng.integers(0, n_classes, n_nodes)

    # mostly intra-class edges with a sprinkle of cross-class citations
    n_edges = int(n_nodes * avg_degree)
    edges = []
    by_class = [np.flatnonzero(classes == c) for c in range(n_classes)]
    for _ in range(n_edges):
        if rng.random() < 0.8:
            c = int(rng.integers(0, n_classes))
            members = by_class[c]
            if len(members) < 2:
                continue
            a, b = rng.choice(members, size=2, replace=False)
        else:
            a, b = rng.choice(n_nodes, size=2, replace=False)
        edges.append((int(a), int(b)))
    graph = _graph_from_edges(n_nodes, np.array(edges), np.zeros(n_nodes, dtype=np.int64), ["paper"])

    # class-specific vocabularies with shared common words
    words_per_class = n_sparse // (n_classes + 1)
    rows, cols = [], []
    for v in range(n_nodes):
        c = classes[v]
        own = rng.integers(c * words_per_class, (c + 1) * words_per_class, words_per_node * 2 // 3)
        common = rng.integers(n_classes * words_per_class, n_sparse, words_per_node // 3)
        for w in np.unique(np.concatenate([own, common])):
            rows.append(v)
            cols.append(int(w))
    sparse = sp.csr_matrix(
        (np.ones(len(rows)), (rows, cols)), shape=(n_nodes, n_sparse), dtype=np.float64
    )
    features = FeatureTable(
        dense_names=[],
        dense_values=np.zeros((n_nodes, 0)),
        sparse_values=sparse,
        sparse_names=[f"word{i}" for i in range(n_sparse)],
        dense_mask=np.ones((1, 0), dtype=bool),
        sparse_mask=np.ones((1, n_sparse), dtype=bool),
    )

    # probability-like embedding peaked at the (predicted) class
    pred = classes.copy()
    flips = rng.random(n_nodes) < error_rate
    pred[flips] = rng.integers(0, n_classes, int(flips.sum()))
    logits = rng.normal(0.0, 0.35, (n_nodes, dim))
    logits[np.arange(n_nodes), pred % dim] += 2.5
    vectors = np.exp(logits)
    vectors /= vectors.sum(axis=1, keepdims=True)

    predictions = PredictionData(kind="nodeClassification", true_labels=classes, pred_labels=pred)
    return Dataset(graph=graph, features=features, embedding=Embedding(vectors), predictions=predictions)


def planted_anomaly(clique_size: int = 10) -> Dataset:
    """A clique plus two mutually distant satellites u, v that share all
    their neighbors: the (u, v) pair has latent distance > 0.9 and topology
    distance < 0.1 while every other pair stays out of that corner."""
    m = clique_size
    u, v = m, m + 1
    n = m + 2
    edges = [(i, j) for i in range(m) for j in range(i + 1, m)]
    edges += [(u, i) for i in range(m)]
    edges += [(v, i) for i in range(m)]
    graph = _graph_from_edges(n, np.array(edges), np.zeros(n, dtype=np.int64), ["node"])

    theta = np.deg2rad(75.0)
    vectors = np.zeros((n, 2))
    vectors[:m] = (1.0, 0.0)
    vectors[u] = (np.cos(theta), np.sin(theta))
    vectors[v] = (np.cos(theta), -np.sin(theta))

    features = FeatureTable.empty(n, 1)
    return Dataset(
        graph=graph,
        features=features,
        embedding=Embedding(vectors),
        predictions=PredictionData.none(),
    )

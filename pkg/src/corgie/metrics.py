"""Pairwise distances in the latent, topology, and feature spaces, plus
budgeted sampling of node-pair populations.

All three metrics are symmetric, zero on identical inputs, and live in
``[0, 1]`` so their distributions can be compared across spaces:

- latent: cosine distance of embedding vectors, halved into [0, 1]
- topology: inverse Jaccard of the flattened K-hop neighbor sets
- feature: Euclidean distance of min-max scaled features over the dimensions
  shared by both nodes' types, normalized by sqrt(#shared dims); absent when
  the shared mask is empty

Pair populations above the budget (default one million) are down-sampled
uniformly without replacement, deterministically under a seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .model import Embedding, FeatureTable, Graph
from .neighborhoods import HopNeighborIndex

DEFAULT_PAIR_BUDGET = 1_000_000
_BATCH = 65_536


def latent_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine distance of two embedding vectors, rescaled from [0,2] to [0,1]."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise ValueError("cosine distance undefined for zero vectors")
    cos = float(np.dot(u, v) / (nu * nv))
    return float(np.clip((1.0 - cos) / 2.0, 0.0, 1.0))


def jaccard_distance(a: np.ndarray, b: np.ndarray) -> float:
    """1 - |a n b| / |a u b| over sorted id arrays; 0 when both are empty."""
    if len(a) == 0 and len(b) == 0:
        return 0.0
    inter = len(np.intersect1d(a, b, assume_unique=True))
    union = len(a) + len(b) - inter
    return 1.0 - inter / union


def topo_distance(u: int, v: int, hop_index: HopNeighborIndex) -> float:
    """Inverse Jaccard over the flattened K-hop neighbor sets of u and v."""
    return jaccard_distance(hop_index.flat[u], hop_index.flat[v])


class DistanceContext:
    """Precomputed state for vectorized pair-distance evaluation.

    Feature scaling: per dimension, min and max are taken over the nodes
    whose type possesses that dimension, so every scaled difference is in
    [-1, 1] and the aggregate distance stays in [0, 1].
    """

    def __init__(
        self,
        graph: Graph,
        embedding: Embedding | None = None,
        hop_index: HopNeighborIndex | None = None,
        features: FeatureTable | None = None,
    ):
        self.graph = graph
        self.hop_index = hop_index
        self.features = features
        self.type_indices = graph.type_indices()
        self._unit = embedding.unit_vectors() if embedding is not None else None
        if hop_index is not None:
            self._flat = hop_index.flat_matrix()
            self._flat_sizes = hop_index.flat_sizes()
        if features is not None:
            self._prepare_feature_scaling(features)

    # -- latent ---------------------------------------------------------

    def latent_pairs(self, pairs: np.ndarray) -> np.ndarray:
        if self._unit is None:
            raise ValueError("no embedding loaded")
        u = self._unit[pairs[:, 0]]
        v = self._unit[pairs[:, 1]]
        cos = np.einsum("ij,ij->i", u, v)
        return np.clip((1.0 - cos) / 2.0, 0.0, 1.0)

    # -- topology -------------------------------------------------------

    def topo_pairs(self, pairs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(distances, both-empty flags) for an M x 2 pair array."""
        if self.hop_index is None:
            raise ValueError("no hop index built")
        m = len(pairs)
        out = np.zeros(m)
        isolated = np.zeros(m, dtype=bool)
        sizes = self._flat_sizes
        for start in range(0, m, _BATCH):
            chunk = pairs[start:start + _BATCH]
            a = self._flat[chunk[:, 0]]
            b = self._flat[chunk[:, 1]]
            inter = np.asarray(a.multiply(b).sum(axis=1)).ravel()
            su = sizes[chunk[:, 0]] + sizes[chunk[:, 1]]
            union = su - inter
            empty = union == 0
            isolated[start:start + _BATCH] = empty
            with np.errstate(invalid="ignore", divide="ignore"):
                dist = 1.0 - inter / union
            dist[empty] = 0.0
            out[start:start + _BATCH] = dist
        return out, isolated

    # -- feature --------------------------------------------------------

    def _prepare_feature_scaling(self, features: FeatureTable) -> None:
        t_idx = self.type_indices
        lo, hi = features.dense_ranges(t_idx)
        span = hi - lo
        self._dense_inv = np.where(span > 0, 1.0 / np.where(span == 0, 1.0, span), 0.0)

        f = features.sparse_count
        lo_s = np.zeros(f)
        hi_s = np.zeros(f)
        csc = features.sparse_values.tocsc()
        n_types = features.sparse_mask.shape[0]
        type_rows = [np.flatnonzero(t_idx == t) for t in range(n_types)]
        for col in range(f):
            vals = csc.data[csc.indptr[col]:csc.indptr[col + 1]]
            rows = csc.indices[csc.indptr[col]:csc.indptr[col + 1]]
            possessing_types = np.flatnonzero(features.sparse_mask[:, col])
            possessing_count = sum(len(type_rows[t]) for t in possessing_types)
            if possessing_count == 0:
                continue
            owned = vals[features.sparse_mask[t_idx[rows], col]]
            hi_s[col] = owned.max() if len(owned) else 0.0
            # possessing nodes without an explicit entry hold an implicit zero
            lo_s[col] = owned.min() if len(owned) == possessing_count else 0.0
        span_s = hi_s - lo_s
        inv_s = np.where(span_s > 0, 1.0 / np.where(span_s == 0, 1.0, span_s), 0.0)
        # column-scaled copy keeps sparsity because the offset cancels in diffs
        scaled = features.sparse_values.tocsr().copy().astype(np.float64)
        if scaled.nnz:
            scaled.data = scaled.data * inv_s[scaled.indices]
        self._sparse_scaled = scaled

    def feature_pairs(self, pairs: np.ndarray) -> np.ndarray:
        """Distances with NaN where the shared feature mask is empty."""
        if self.features is None:
            raise ValueError("no features loaded")
        feats = self.features
        m = len(pairs)
        t_u = self.type_indices[pairs[:, 0]]
        t_v = self.type_indices[pairs[:, 1]]

        sq = np.zeros(m)
        dims = np.zeros(m, dtype=np.int64)

        if feats.n_dense:
            shared_dense = feats.dense_mask[t_u] & feats.dense_mask[t_v]  # M x D
            diff = (feats.dense_values[pairs[:, 0]] - feats.dense_values[pairs[:, 1]]) * self._dense_inv
            sq += np.einsum("ij,ij->i", diff * shared_dense, diff)
            dims += shared_dense.sum(axis=1)

        if feats.sparse_count:
            # shared sparse dims depend only on the (type, type) combo
            combos = {}
            for tu, tv in {(int(a), int(b)) for a, b in zip(t_u, t_v)}:
                combos[(tu, tv)] = np.flatnonzero(feats.sparse_mask[tu] & feats.sparse_mask[tv])
            for (tu, tv), cols in combos.items():
                sel = np.flatnonzero((t_u == tu) & (t_v == tv))
                dims[sel] += len(cols)
                if len(cols) == 0 or len(sel) == 0:
                    continue
                sub = self._sparse_scaled[:, cols] if len(cols) < feats.sparse_count else self._sparse_scaled
                for start in range(0, len(sel), _BATCH):
                    idx = sel[start:start + _BATCH]
                    d = sub[pairs[idx, 0]] - sub[pairs[idx, 1]]
                    sq[idx] += np.asarray(d.power(2).sum(axis=1)).ravel()

        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.sqrt(sq / dims)
        out[dims == 0] = np.nan
        return np.clip(out, 0.0, 1.0, out=out, where=~np.isnan(out))


def feature_distance(
    u: int, v: int, features: FeatureTable, graph: Graph
) -> float | None:
    """Scalar convenience wrapper; None when the shared mask is empty."""
    ctx = DistanceContext(graph, features=features)
    val = ctx.feature_pairs(np.array([[u, v]], dtype=np.int64))[0]
    return None if np.isnan(val) else float(val)


# -- pair populations ----------------------------------------------------


class PairPopulation:
    """A set of unordered node pairs that can be enumerated or sampled."""

    size: int
    label: str = "all"

    def enumerate(self) -> np.ndarray:
        raise NotImplementedError

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Uniform sample of ``count`` distinct pairs, sorted canonically."""
        picks = _sample_distinct(self.size, count, rng)
        return self._decode(picks)

    def _decode(self, linear: np.ndarray) -> np.ndarray:
        raise NotImplementedError


def _sample_distinct(size: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform distinct integers in [0, size); symmetric over values, so the
    resulting subset is uniform without replacement."""
    chosen = np.zeros(0, dtype=np.int64)
    while len(chosen) < count:
        need = count - len(chosen)
        draw = rng.integers(0, size, size=int(need * 1.1) + 16, dtype=np.int64)
        chosen = np.unique(np.concatenate([chosen, draw]))
    if len(chosen) > count:
        chosen = rng.permutation(chosen)[:count]
        chosen.sort()
    return chosen


class WithinPairs(PairPopulation):
    """All unordered pairs within one node set."""

    def __init__(self, nodes: np.ndarray, label: str = "all"):
        self.nodes = np.sort(np.asarray(nodes, dtype=np.int64))
        m = len(self.nodes)
        self.size = m * (m - 1) // 2
        self.label = label
        # offsets[i] = number of pairs whose first position is < i
        i = np.arange(m, dtype=np.int64)
        self._offsets = i * m - i * (i + 1) // 2

    def _decode(self, linear: np.ndarray) -> np.ndarray:
        i = np.searchsorted(self._offsets, linear, side="right") - 1
        j = linear - self._offsets[i] + i + 1
        return np.stack([self.nodes[i], self.nodes[j]], axis=1)

    def enumerate(self) -> np.ndarray:
        return self._decode(np.arange(self.size, dtype=np.int64))


class BetweenPairs(PairPopulation):
    """All pairs with one node from each of two disjoint sets."""

    def __init__(self, a: np.ndarray, b: np.ndarray, label: str = "between"):
        self.a = np.sort(np.asarray(a, dtype=np.int64))
        self.b = np.sort(np.asarray(b, dtype=np.int64))
        self.size = len(self.a) * len(self.b)
        self.label = label

    def _decode(self, linear: np.ndarray) -> np.ndarray:
        i, j = np.divmod(linear, len(self.b))
        u, v = self.a[i], self.b[j]
        return np.stack([np.minimum(u, v), np.maximum(u, v)], axis=1)

    def enumerate(self) -> np.ndarray:
        return self._decode(np.arange(self.size, dtype=np.int64))


class ExplicitPairs(PairPopulation):
    """A fixed list of pairs (already canonical or canonicalized here)."""

    def __init__(self, pairs: np.ndarray, label: str = "filtered"):
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        self.pairs = np.unique(np.stack([lo, hi], axis=1), axis=0)
        self.size = len(self.pairs)
        self.label = label

    def _decode(self, linear: np.ndarray) -> np.ndarray:
        return self.pairs[linear]

    def enumerate(self) -> np.ndarray:
        return self.pairs


class ExcludingPairs(PairPopulation):
    """A base population minus an excluded pair set (e.g. the edge set)."""

    def __init__(self, base: PairPopulation, excluded: np.ndarray, n_nodes: int, label: str = "filtered"):
        self.base = base
        self.n = n_nodes
        excluded = np.asarray(excluded, dtype=np.int64).reshape(-1, 2)
        codes = excluded[:, 0] * n_nodes + excluded[:, 1]
        self._excluded_codes = np.unique(codes)
        # only count exclusions that are actually in the base population
        base_hits = self._mask_excluded(base.enumerate()) if base.size <= 2_000_000 else None
        if base_hits is not None:
            self.size = base.size - int((~base_hits).sum())
        else:
            self.size = base.size - self._count_excluded_in_base()
        self.label = label

    def _count_excluded_in_base(self) -> int:
        # base populations are within/between sets; test each excluded pair
        pairs = np.stack(
            [self._excluded_codes // self.n, self._excluded_codes % self.n], axis=1
        )
        return int(self._base_membership(pairs).sum())

    def _base_membership(self, pairs: np.ndarray) -> np.ndarray:
        if isinstance(self.base, WithinPairs):
            members = self.base.nodes
            return np.isin(pairs[:, 0], members) & np.isin(pairs[:, 1], members)
        if isinstance(self.base, BetweenPairs):
            a, b = self.base.a, self.base.b
            return (np.isin(pairs[:, 0], a) & np.isin(pairs[:, 1], b)) | (
                np.isin(pairs[:, 0], b) & np.isin(pairs[:, 1], a)
            )
        raise TypeError(f"cannot exclude from {type(self.base).__name__}")

    def _mask_excluded(self, pairs: np.ndarray) -> np.ndarray:
        codes = pairs[:, 0] * self.n + pairs[:, 1]
        return ~np.isin(codes, self._excluded_codes)

    def enumerate(self) -> np.ndarray:
        pairs = self.base.enumerate()
        return pairs[self._mask_excluded(pairs)]

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        # rejection sampling against the excluded set, then top-up
        kept = np.zeros((0, 2), dtype=np.int64)
        while len(kept) < count:
            need = count - len(kept)
            cand = self.base.sample(min(self.base.size, need + len(self._excluded_codes) + 16), rng)
            cand = cand[self._mask_excluded(cand)]
            merged = np.concatenate([kept, cand])
            kept = np.unique(merged, axis=0)
        if len(kept) > count:
            sel = rng.permutation(len(kept))[:count]
            kept = kept[np.sort(sel)]
        return kept


@dataclass
class PairSample:
    """Node pairs annotated with per-space distances.

    ``feature`` is NaN for pairs whose types share no feature dimensions;
    ``isolated`` flags pairs where both flattened neighbor sets were empty
    (topology distance 0 by convention).
    """

    pairs: np.ndarray
    latent: np.ndarray
    topo: np.ndarray
    feature: np.ndarray
    isolated: np.ndarray
    scope: str
    sampled: bool
    population: int
    budget: int
    seed: int | None = None

    def __len__(self) -> int:
        return len(self.pairs)


def sample_pairs(
    population: PairPopulation,
    ctx: DistanceContext,
    budget: int = DEFAULT_PAIR_BUDGET,
    seed: int | None = 0,
) -> PairSample:
    """Enumerate the population if it fits the budget, else sample it, and
    annotate every retained pair with all three distances."""
    sampled = population.size > budget
    if sampled:
        rng = np.random.default_rng(seed)
        pairs = population.sample(budget, rng)
    else:
        pairs = population.enumerate()
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)

    latent = ctx.latent_pairs(pairs) if ctx._unit is not None else np.full(len(pairs), np.nan)
    if ctx.hop_index is not None:
        topo, isolated = ctx.topo_pairs(pairs)
    else:
        topo, isolated = np.full(len(pairs), np.nan), np.zeros(len(pairs), dtype=bool)
    if ctx.features is not None and (ctx.features.n_dense or ctx.features.sparse_count):
        feature = ctx.feature_pairs(pairs)
    else:
        feature = np.full(len(pairs), np.nan)

    return PairSample(
        pairs=pairs,
        latent=latent,
        topo=topo,
        feature=feature,
        isolated=isolated,
        scope=population.label,
        sampled=sampled,
        population=population.size,
        budget=budget,
        seed=seed,
    )

"""Neighbor-embedding dimensionality reduction to 2D.

A self-contained UMAP-class pipeline: exact k-nearest-neighbor search, a
smooth fuzzy neighborhood graph, spectral initialization, and batched
stochastic optimization with negative sampling.  Inputs are either raw
vectors under the cosine metric or a precomputed distance matrix.

Everything is driven by a ``numpy.random.Generator`` seeded by the caller,
so results are bit-reproducible for a fixed seed and independent of
scheduling (no global RNG, no JIT, no thread-order effects).  Positions are
min-max normalized into the unit square.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.optimize import curve_fit
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigsh

DEFAULT_N_NEIGHBORS = 15
DEFAULT_MIN_DIST = 0.1
MIN_POINTS_FOR_DR = 8
_SMOOTH_TOL = 1e-5
_BISECTION_STEPS = 64
_GRAD_CLIP = 4.0
_NEG_SAMPLES = 5
_REPULSION_STRENGTH = 1.0


@dataclass(frozen=True)
class EmbedParams:
    n_neighbors: int = DEFAULT_N_NEIGHBORS
    min_dist: float = DEFAULT_MIN_DIST
    n_epochs: int | None = None
    metric: str = "cosine"

    def resolved_epochs(self, n: int) -> int:
        if self.n_epochs is not None:
            return self.n_epochs
        return 500 if n < 2_000 else (300 if n < 10_000 else 200)

    def to_dict(self) -> dict:
        return {
            "nNeighbors": self.n_neighbors,
            "minDist": self.min_dist,
            "nEpochs": self.n_epochs,
            "metric": self.metric,
        }


def normalize_unit_square(positions: np.ndarray, preserve_aspect: bool = False) -> np.ndarray:
    """Min-max normalize into [0, 1]^2; degenerate axes map to 0.5.

    With ``preserve_aspect`` both axes share one scale (the short axis is
    centered), which keeps relative geometry intact.
    """
    positions = np.asarray(positions, dtype=np.float64).reshape(-1, 2)
    lo = positions.min(axis=0)
    hi = positions.max(axis=0)
    span = hi - lo
    out = np.empty_like(positions)
    if preserve_aspect:
        scale = span.max()
        if scale == 0:
            out[:] = 0.5
            return out
        for d in range(2):
            out[:, d] = (positions[:, d] - lo[d]) / scale + (1.0 - span[d] / scale) / 2.0
        return out
    for d in range(2):
        if span[d] > 0:
            out[:, d] = (positions[:, d] - lo[d]) / span[d]
        else:
            out[:, d] = 0.5
    return out


def pca_2d(vectors: np.ndarray) -> np.ndarray:
    """Linear 2D projection used when a dataset is too small for the DR."""
    x = np.asarray(vectors, dtype=np.float64)
    x = x - x.mean(axis=0)
    _, _, vt = np.linalg.svd(x, full_matrices=False)
    comps = vt[:2] if vt.shape[0] >= 2 else np.vstack([vt, np.zeros((2 - vt.shape[0], vt.shape[1]))])
    # stabilize component signs so the projection is orientation-deterministic
    for row in comps:
        peak = np.argmax(np.abs(row))
        if row[peak] < 0:
            row *= -1
    return normalize_unit_square(x @ comps.T)


def knn_cosine(vectors: np.ndarray, k: int, chunk: int = 512) -> tuple[np.ndarray, np.ndarray]:
    """Exact kNN under cosine distance (range [0,2]); self excluded."""
    x = np.asarray(vectors, dtype=np.float64)
    n = len(x)
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    unit = x / norms
    idx = np.empty((n, k), dtype=np.int64)
    dist = np.empty((n, k))
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        sims = unit[start:stop] @ unit.T
        d = 1.0 - sims
        rows = np.arange(start, stop)
        d[np.arange(stop - start), rows] = np.inf  # exclude self
        part = np.argpartition(d, k - 1, axis=1)[:, :k]
        pd = np.take_along_axis(d, part, axis=1)
        order = np.argsort(pd, axis=1, kind="stable")
        idx[start:stop] = np.take_along_axis(part, order, axis=1)
        dist[start:stop] = np.clip(np.take_along_axis(pd, order, axis=1), 0.0, None)
    return idx, dist


def knn_from_matrix(matrix: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """kNN rows of a symmetric precomputed distance matrix; self excluded."""
    d = np.array(matrix, dtype=np.float64, copy=True)
    n = len(d)
    np.fill_diagonal(d, np.inf)
    part = np.argpartition(d, k - 1, axis=1)[:, :k]
    pd = np.take_along_axis(d, part, axis=1)
    order = np.argsort(pd, axis=1, kind="stable")
    idx = np.take_along_axis(part, order, axis=1)
    return idx.astype(np.int64), np.take_along_axis(pd, order, axis=1)


def fuzzy_graph(knn_idx: np.ndarray, knn_dist: np.ndarray, n: int) -> sp.csr_matrix:
    """Smooth-kNN membership graph, symmetrized by probabilistic union."""
    n_rows, k = knn_idx.shape
    target = np.log2(k) if k > 1 else 1.0

    nonzero = np.where(knn_dist > 0, knn_dist, np.inf)
    rho = nonzero.min(axis=1)
    rho[~np.isfinite(rho)] = 0.0

    adjusted = np.maximum(knn_dist - rho[:, None], 0.0)
    lo = np.zeros(n_rows)
    hi = np.full(n_rows, np.inf)
    sigma = np.ones(n_rows)
    for _ in range(_BISECTION_STEPS):
        psum = np.exp(-adjusted / sigma[:, None]).sum(axis=1)
        err = psum - target
        done = np.abs(err) < _SMOOTH_TOL
        too_big = (err > 0) & ~done
        too_small = (err < 0) & ~done
        hi[too_big] = sigma[too_big]
        lo[too_small] = sigma[too_small]
        sigma = np.where(
            too_big,
            (lo + np.minimum(hi, sigma)) / 2.0,
            np.where(too_small, np.where(np.isinf(hi), sigma * 2.0, (lo + hi) / 2.0), sigma),
        )
    mean_d = knn_dist.mean(axis=1)
    floor = np.where(rho > 0, 1e-3 * np.where(mean_d > 0, mean_d, 1.0), 1e-8)
    sigma = np.maximum(sigma, floor)

    vals = np.exp(-adjusted / sigma[:, None]).ravel()
    rows = np.repeat(np.arange(n_rows), k)
    cols = knn_idx.ravel()
    p = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    pt = p.T.tocsr()
    return (p + pt - p.multiply(pt)).tocsr()


def fit_low_dim_curve(min_dist: float, spread: float = 1.0) -> tuple[float, float]:
    """Fit 1/(1 + a x^(2b)) to the desired low-dimensional similarity kernel."""
    xv = np.linspace(0, spread * 3, 300)
    yv = np.where(xv < min_dist, 1.0, np.exp(-(xv - min_dist) / spread))
    (a, b), _ = curve_fit(lambda x, a, b: 1.0 / (1.0 + a * x ** (2 * b)), xv, yv, p0=(1.0, 1.0))
    return float(a), float(b)


def spectral_init(graph: sp.csr_matrix, rng: np.random.Generator) -> np.ndarray | None:
    """Coordinates from the two leading nontrivial normalized-adjacency
    eigenvectors; None when the solver does not converge."""
    n = graph.shape[0]
    if n < 5:
        return None
    deg = np.asarray(graph.sum(axis=1)).ravel()
    deg[deg == 0] = 1.0
    inv_sqrt = 1.0 / np.sqrt(deg)
    d = sp.diags(inv_sqrt)
    norm_adj = (d @ graph @ d).tocsr()
    v0 = rng.uniform(-1.0, 1.0, n)
    try:
        _, vecs = eigsh(norm_adj, k=3, which="LA", v0=v0, maxiter=n * 20, tol=1e-4)
    except (ArpackError, ArpackNoConvergence):
        return None
    coords = vecs[:, :2]  # eigsh returns ascending order; drop the trivial top
    scale = np.abs(coords).max()
    if scale == 0 or not np.isfinite(coords).all():
        return None
    coords = coords / scale * 10.0
    return coords + rng.normal(0.0, 1e-4, coords.shape)


def _optimize(
    graph: sp.csr_matrix,
    init: np.ndarray,
    n_epochs: int,
    rng: np.random.Generator,
    a: float,
    b: float,
) -> np.ndarray:
    """Batched attraction/repulsion descent over the fuzzy graph.

    Per epoch, every edge contributes an attraction gradient scaled by its
    membership weight, and each edge endpoint repels a handful of uniformly
    sampled nodes.  Per-node updates are averaged (not summed) before being
    applied, which keeps the synchronous scheme stable.
    """
    coo = sp.triu(graph, k=1).tocoo()
    heads = coo.row.astype(np.int64)
    tails = coo.col.astype(np.int64)
    weights = coo.data / coo.data.max() if coo.nnz else coo.data
    y = np.array(init, dtype=np.float64, copy=True)
    n = len(y)
    if coo.nnz == 0 or n < 2:
        return y

    endpoints = np.concatenate([heads, tails])
    for epoch in range(n_epochs):
        alpha = 1.0 - epoch / n_epochs
        update = np.zeros_like(y)
        counts = np.zeros(n)

        diff = y[heads] - y[tails]
        d2 = np.einsum("ij,ij->i", diff, diff)
        pos = d2 > 0
        attr = np.zeros_like(d2)
        attr[pos] = (-2.0 * a * b * d2[pos] ** (b - 1.0)) / (1.0 + a * d2[pos] ** b)
        g = np.clip(attr[:, None] * diff, -_GRAD_CLIP, _GRAD_CLIP) * weights[:, None]
        np.add.at(update, heads, g)
        np.add.at(update, tails, -g)
        np.add.at(counts, heads, 1.0)
        np.add.at(counts, tails, 1.0)

        negs = rng.integers(0, n, size=(len(endpoints), _NEG_SAMPLES))
        for col in range(_NEG_SAMPLES):
            other = negs[:, col]
            diff_n = y[endpoints] - y[other]
            d2n = np.einsum("ij,ij->i", diff_n, diff_n)
            rep = (2.0 * _REPULSION_STRENGTH * b) / ((0.001 + d2n) * (1.0 + a * d2n ** b))
            rep[endpoints == other] = 0.0
            gn = np.clip(rep[:, None] * diff_n, -_GRAD_CLIP, _GRAD_CLIP)
            np.add.at(update, endpoints, gn)
            np.add.at(counts, endpoints, 1.0)

        counts[counts == 0] = 1.0
        y += alpha * update / counts[:, None]
    return y


def _embed_connected(
    graph: sp.csr_matrix,
    params: EmbedParams,
    rng: np.random.Generator,
    a: float,
    b: float,
) -> np.ndarray:
    n = graph.shape[0]
    init = spectral_init(graph, rng)
    if init is None:
        init = rng.uniform(-10.0, 10.0, (n, 2))
    return _optimize(graph, init, params.resolved_epochs(n), rng, a, b)


def _pack_components(
    sizes: np.ndarray,
    layouts: list[np.ndarray],
) -> np.ndarray:
    """Place per-component unit-square layouts into a grid, largest first,
    each scaled by the square root of its relative size."""
    order = np.argsort(-sizes, kind="stable")
    g = int(np.ceil(np.sqrt(len(sizes))))
    cell = 1.0 / g
    max_size = sizes.max()
    out = [None] * len(sizes)
    for slot, comp in enumerate(order):
        row, col = divmod(slot, g)
        # generous whitespace keeps between-component gaps larger than spreads
        side = cell * 0.55 * np.sqrt(sizes[comp] / max_size)
        offset_x = col * cell + (cell - side) / 2.0
        offset_y = row * cell + (cell - side) / 2.0
        out[comp] = layouts[comp] * side + np.array([offset_x, offset_y])
    return out


def _embed_graph(
    graph: sp.csr_matrix,
    params: EmbedParams,
    rng: np.random.Generator,
) -> np.ndarray:
    n = graph.shape[0]
    a, b = fit_low_dim_curve(params.min_dist)
    n_comp, labels = sp.csgraph.connected_components(graph, directed=False)
    if n_comp == 1:
        return normalize_unit_square(_embed_connected(graph, params, rng, a, b))

    # disconnected neighborhood graphs are embedded per component and packed
    members = [np.flatnonzero(labels == c) for c in range(n_comp)]
    layouts: list[np.ndarray] = []
    for nodes in members:
        if len(nodes) == 1:
            layouts.append(np.array([[0.5, 0.5]]))
            continue
        sub = graph[nodes][:, nodes].tocsr()
        layouts.append(normalize_unit_square(_embed_connected(sub, params, rng, a, b)))
    sizes = np.array([len(m) for m in members], dtype=np.float64)
    placed = _pack_components(sizes, layouts)
    y = np.zeros((n, 2))
    for nodes, layout in zip(members, placed):
        y[nodes] = layout
    # uniform scaling preserves the packing's separation geometry
    return normalize_unit_square(y, preserve_aspect=True)


def embed_vectors(
    vectors: np.ndarray,
    params: EmbedParams | None = None,
    seed: int | np.random.SeedSequence = 0,
) -> np.ndarray:
    """Project vectors to the unit square; falls back to PCA below the
    minimum size for the neighbor-embedding pipeline."""
    params = params or EmbedParams()
    x = np.asarray(vectors, dtype=np.float64)
    n = len(x)
    if n == 1:
        return np.array([[0.5, 0.5]])
    if n < MIN_POINTS_FOR_DR:
        return pca_2d(x)
    rng = np.random.default_rng(seed)
    k = min(params.n_neighbors, n - 1)
    idx, dist = knn_cosine(x, k)
    graph = fuzzy_graph(idx, dist, n)
    return _embed_graph(graph, params, rng)


def embed_distance_matrix(
    matrix: np.ndarray,
    params: EmbedParams | None = None,
    seed: int | np.random.SeedSequence = 0,
) -> np.ndarray:
    """Embed points given only their pairwise distance matrix."""
    params = params or EmbedParams()
    d = np.asarray(matrix, dtype=np.float64)
    n = len(d)
    if n == 1:
        return np.array([[0.5, 0.5]])
    if n == 2:
        return np.array([[0.0, 0.5], [1.0, 0.5]])
    rng = np.random.default_rng(seed)
    k = min(params.n_neighbors, n - 1)
    idx, dist = knn_from_matrix(d, k)
    graph = fuzzy_graph(idx, dist, n)
    return _embed_graph(graph, params, rng)


def small_force_layout(
    matrix: np.ndarray,
    seed: int | np.random.SeedSequence = 0,
    iterations: int = 300,
) -> np.ndarray:
    """Spring relaxation toward the target distances, for groups too small
    to feed the neighbor-embedding pipeline."""
    d = np.asarray(matrix, dtype=np.float64)
    n = len(d)
    if n == 1:
        return np.array([[0.5, 0.5]])
    if n == 2:
        return np.array([[0.0, 0.5], [1.0, 0.5]])
    scale = d.max()
    target = d / scale if scale > 0 else np.zeros_like(d)

    rng = np.random.default_rng(seed)
    angles = 2.0 * np.pi * np.arange(n) / n
    y = 0.5 + 0.4 * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    y += rng.normal(0.0, 1e-3, y.shape)

    eye = np.eye(n, dtype=bool)
    for it in range(iterations):
        lr = 0.1 * (1.0 - it / iterations) + 0.01
        diff = y[:, None, :] - y[None, :, :]
        dist = np.sqrt((diff ** 2).sum(axis=2))
        dist[eye] = 1.0
        stretch = (target - dist) / dist
        stretch[eye] = 0.0
        force = (stretch[:, :, None] * diff).sum(axis=1) / max(n - 1, 1)
        y += lr * force
    return normalize_unit_square(y)

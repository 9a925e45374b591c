"""Force-directed layout of the whole input graph, run once at preprocessing.

Spring-electric model: link attraction along edges plus many-body repulsion
between all node pairs, the latter approximated with a Barnes-Hut quadtree
(theta = 0.9).  Node velocities persist across iterations with a decay
factor and a linearly cooling displacement cap.

The quadtree is rebuilt per iteration as a level-capped regular subdivision
keyed by Morton codes, which keeps both the build (unique/bincount per
level) and the refinement traversal fully vectorized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Graph

THETA = 0.9
VELOCITY_DECAY = 0.6
GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))
_EPS = 1e-9


@dataclass
class GlobalLayout:
    positions: np.ndarray  # N x 2 in [0,1]^2 unless normalize=False
    iterations: int
    seed: int


def spiral_positions(n: int) -> np.ndarray:
    """Deterministic golden-angle spiral in the unit square (sunflower seed
    arrangement): reproducible initial layout without any saved state."""
    i = np.arange(n, dtype=np.float64)
    radius = 0.5 * np.sqrt((i + 0.5) / n)
    angle = i * GOLDEN_ANGLE
    return 0.5 + np.stack([radius * np.cos(angle), radius * np.sin(angle)], axis=1)


def _morton_codes(pos: np.ndarray, depth: int) -> np.ndarray:
    """Interleaved cell codes at the deepest level of the quadtree."""
    lo = pos.min(axis=0)
    side = max(float((pos - lo).max()), _EPS) * (1.0 + 1e-12)
    cells = 1 << depth
    ix = np.minimum((((pos[:, 0] - lo[0]) / side) * cells).astype(np.int64), cells - 1)
    iy = np.minimum((((pos[:, 1] - lo[1]) / side) * cells).astype(np.int64), cells - 1)
    code = np.zeros(len(pos), dtype=np.int64)
    for level in range(depth):
        shift = depth - 1 - level
        code = (code << 2) | (((ix >> shift) & 1) << 1) | ((iy >> shift) & 1)
    return code


def _repulsion(pos: np.ndarray, k: float, depth: int) -> np.ndarray:
    """Barnes-Hut approximation of sum_j k^2/d repulsive forces per node."""
    n = len(pos)
    force = np.zeros_like(pos)
    if n < 2:
        return force
    codes = _morton_codes(pos, depth)
    lo = pos.min(axis=0)
    side = max(float((pos - lo).max()), _EPS) * (1.0 + 1e-12)

    # per-level cell summaries, leaves first dimension sorted by code
    level_codes: list[np.ndarray] = []
    level_count: list[np.ndarray] = []
    level_com: list[np.ndarray] = []
    for level in range(depth + 1):
        cl = codes >> (2 * (depth - level))
        ucodes, inv, counts = np.unique(cl, return_inverse=True, return_counts=True)
        com = np.zeros((len(ucodes), 2))
        np.add.at(com, inv, pos)
        com /= counts[:, None]
        level_codes.append(ucodes)
        level_count.append(counts)
        level_com.append(com)

    # refinement frontier: (node, cell-at-level) pairs, expanded level by level
    ni = np.arange(n, dtype=np.int64)
    ci = np.zeros(n, dtype=np.int64)  # root is cell 0 of level 0
    for level in range(depth + 1):
        if len(ni) == 0:
            break
        ucodes = level_codes[level]
        counts = level_count[level]
        com = level_com[level]
        width = side / (1 << level)

        delta = pos[ni] - com[ci]
        d2 = np.einsum("ij,ij->i", delta, delta)
        own = (codes[ni] >> (2 * (depth - level))) == ucodes[ci]

        if level < depth:
            far = (width * width < THETA * THETA * d2) | (counts[ci] == 1)
            contribute = far & ~own
        else:
            contribute = ~own  # leaves resolve unconditionally
            multi_own = own & (counts[ci] > 1)
            if multi_own.any():
                # exclude self from a shared leaf: repel from the others' centroid
                sel = np.flatnonzero(multi_own)
                c = counts[ci[sel]].astype(np.float64)
                com_others = (com[ci[sel]] * c[:, None] - pos[ni[sel]]) / (c - 1.0)[:, None]
                delta_sel = pos[ni[sel]] - com_others
                d2_sel = np.maximum(np.einsum("ij,ij->i", delta_sel, delta_sel), _EPS * _EPS)
                scale = k * k * (c - 1.0) / d2_sel
                np.add.at(force, ni[sel], delta_sel * scale[:, None])

        if contribute.any():
            sel = np.flatnonzero(contribute)
            d2_sel = np.maximum(d2[sel], _EPS * _EPS)
            scale = k * k * counts[ci[sel]] / d2_sel
            np.add.at(force, ni[sel], delta[sel] * scale[:, None])

        if level == depth:
            break
        # skip own singleton cells (the node itself); descend into the rest
        descend = ~contribute & ~(own & (counts[ci] == 1))
        sel = np.flatnonzero(descend)
        if len(sel) == 0:
            ni = np.zeros(0, dtype=np.int64)
            ci = np.zeros(0, dtype=np.int64)
            continue
        parent_codes = ucodes[ci[sel]]
        child_codes = (parent_codes[:, None] * 4 + np.arange(4)).ravel()
        child_ni = np.repeat(ni[sel], 4)
        next_codes = level_codes[level + 1]
        pos_in_next = np.searchsorted(next_codes, child_codes)
        valid = (pos_in_next < len(next_codes)) & (
            next_codes[np.minimum(pos_in_next, len(next_codes) - 1)] == child_codes
        )
        ni = child_ni[valid]
        ci = pos_in_next[valid]
    return force


def repulsion_exact(pos: np.ndarray, k: float) -> np.ndarray:
    """Brute-force all-pairs repulsion; oracle for the quadtree version."""
    delta = pos[:, None, :] - pos[None, :, :]
    d2 = (delta ** 2).sum(axis=2)
    np.fill_diagonal(d2, 1.0)
    scale = k * k / np.maximum(d2, _EPS * _EPS)
    np.fill_diagonal(scale, 0.0)
    return (delta * scale[:, :, None]).sum(axis=1)


def layout_energy(pos: np.ndarray, edges: np.ndarray, k: float) -> float:
    """Spring-electric potential: sum of d^3/(3k) over edges minus
    k^2 ln(d) over all node pairs (the potentials whose gradients are the
    attraction/repulsion forces used in the simulation)."""
    energy = 0.0
    if len(edges):
        d = np.linalg.norm(pos[edges[:, 0]] - pos[edges[:, 1]], axis=1)
        energy += float((d ** 3).sum() / (3.0 * k))
    delta = pos[:, None, :] - pos[None, :, :]
    d = np.sqrt((delta ** 2).sum(axis=2))
    iu = np.triu_indices(len(pos), k=1)
    energy -= float((k * k * np.log(np.maximum(d[iu], _EPS))).sum())
    return energy


def global_force_layout(
    graph: Graph,
    iterations: int = 300,
    seed: int = 0,
    normalize: bool = True,
) -> GlobalLayout:
    """Deterministic spring-electric layout of the whole graph."""
    n = graph.n_nodes
    if n == 0:
        raise ValueError("empty graph")
    if n == 1:
        return GlobalLayout(positions=np.array([[0.5, 0.5]]), iterations=iterations, seed=seed)

    rng = np.random.default_rng(seed)
    pos = spiral_positions(n)
    vel = np.zeros_like(pos)
    edges = graph.edges
    k = 1.0 / np.sqrt(n)
    depth = max(3, min(12, int(np.ceil(np.log2(max(n, 2)) / 2.0)) + 3))

    for it in range(iterations):
        # coincident points would make repulsion singular; nudge them apart
        _, inverse, counts = np.unique(pos, axis=0, return_inverse=True, return_counts=True)
        dup = counts[inverse] > 1
        if dup.any():
            pos = pos + np.where(dup[:, None], rng.normal(0.0, 1e-6, pos.shape), 0.0)

        force = _repulsion(pos, k, depth)
        if len(edges):
            delta = pos[edges[:, 0]] - pos[edges[:, 1]]
            d = np.linalg.norm(delta, axis=1)
            pull = delta * (d / k)[:, None]
            np.add.at(force, edges[:, 0], -pull)
            np.add.at(force, edges[:, 1], pull)

        temperature = 0.1 * (1.0 - it / iterations)
        vel = (vel + force * 0.01) * VELOCITY_DECAY
        speed = np.linalg.norm(vel, axis=1)
        over = speed > temperature
        if over.any():
            vel[over] *= (temperature / np.maximum(speed[over], _EPS))[:, None]
        pos = pos + vel
        if not np.isfinite(pos).all():
            raise FloatingPointError("layout diverged to non-finite positions")

    if normalize:
        lo = pos.min(axis=0)
        hi = pos.max(axis=0)
        span = hi - lo
        for d in range(2):
            if span[d] > 0:
                pos[:, d] = (pos[:, d] - lo[d]) / span[d]
            else:
                pos[:, d] = 0.5
    return GlobalLayout(positions=pos, iterations=iterations, seed=seed)

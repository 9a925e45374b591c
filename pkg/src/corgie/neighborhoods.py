"""Hop-indexed neighbor sets and the focal-group partition.

``build_hop_index`` computes, for every node, the sets of nodes at exact
shortest-path distance 1..K (self excluded).  ``partition_for_focus`` assigns
every node to at most one group — focal groups first, then hop groups by BFS
distance from the focal union — with leftmost priority; everything else is
discarded.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .model import Graph

MAX_K = 3
MAX_FOCAL_GROUPS = 4

UNASSIGNED = -1
DISCARDED_TAG = "discarded"


@dataclass
class HopNeighborIndex:
    """Per-node neighbor sets at exact hop distance 1..K plus their union.

    ``hops[v][h]`` is a sorted int array of nodes at shortest-path distance
    ``h+1`` from ``v``; ``flat[v]`` is the union over all K hops.
    """

    k: int
    hops: list[list[np.ndarray]]
    flat: list[np.ndarray]
    _flat_matrix: sp.csr_matrix | None = field(default=None, repr=False)

    @property
    def n_nodes(self) -> int:
        return len(self.flat)

    def flat_matrix(self) -> sp.csr_matrix:
        """Boolean N x N matrix whose rows are the flattened K-hop sets."""
        if self._flat_matrix is None:
            n = self.n_nodes
            indptr = np.zeros(n + 1, dtype=np.int64)
            indptr[1:] = np.cumsum([len(f) for f in self.flat])
            indices = np.concatenate(self.flat) if n and indptr[-1] else np.zeros(0, dtype=np.int64)
            data = np.ones(len(indices), dtype=bool)
            self._flat_matrix = sp.csr_matrix((data, indices, indptr), shape=(n, n))
        return self._flat_matrix

    def flat_sizes(self) -> np.ndarray:
        return np.array([len(f) for f in self.flat], dtype=np.int64)


def build_hop_index(graph: Graph, k: int, chunk_size: int = 512) -> HopNeighborIndex:
    """Exact hop sets for every node via chunked sparse frontier expansion.

    Equivalent to a BFS truncated at depth K from each node; the sparse-matrix
    formulation keeps the inner loops in C for large graphs.
    """
    if not 1 <= k <= MAX_K:
        raise ValueError(f"K must be in 1..{MAX_K}, got {k}")
    n = graph.n_nodes
    adj = graph.adjacency().astype(np.int32)
    hops: list[list[np.ndarray]] = [[] for _ in range(n)]

    for start in range(0, n, chunk_size):
        stop = min(start + chunk_size, n)
        rows = stop - start
        # visited starts as {self} so hop sets never include the source
        eye = sp.csr_matrix(
            (np.ones(rows, dtype=np.int32), (np.arange(rows), np.arange(start, stop))),
            shape=(rows, n),
        )
        visited = eye
        frontier = eye
        for _ in range(k):
            reached = frontier @ adj
            reached.data[:] = 1
            # strip already-visited nodes; supports are 0/1 so this stays exact
            frontier = (reached - reached.multiply(visited)).tocsr()
            frontier.eliminate_zeros()
            frontier.sort_indices()
            visited = (visited + frontier).tocsr()
            for i in range(rows):
                hops[start + i].append(
                    frontier.indices[frontier.indptr[i]:frontier.indptr[i + 1]].astype(np.int64)
                )

    flat = [np.sort(np.concatenate(h)) if h else np.zeros(0, dtype=np.int64) for h in hops]
    return HopNeighborIndex(k=k, hops=hops, flat=flat)


@dataclass
class GroupAssignment:
    """Disjoint node groups: focal groups, hop groups, and the discarded rest.

    ``group_of[v]`` is an index into ``tags`` (focal groups first, then hop
    groups) or ``UNASSIGNED`` for discarded nodes.
    """

    focal_groups: list[np.ndarray]
    hop_groups: list[np.ndarray]
    discarded: np.ndarray
    group_of: np.ndarray  # N ints; UNASSIGNED = discarded

    @property
    def tags(self) -> list[str]:
        return [f"foc-{i}" for i in range(len(self.focal_groups))] + [
            f"hop-{h + 1}" for h in range(len(self.hop_groups))
        ]

    def groups(self) -> list[tuple[str, np.ndarray]]:
        return list(zip(self.tags, self.focal_groups + self.hop_groups))

    def tag_of(self, node_id: int) -> str:
        g = self.group_of[node_id]
        return DISCARDED_TAG if g == UNASSIGNED else self.tags[g]

    def kept_nodes(self) -> np.ndarray:
        return np.flatnonzero(self.group_of != UNASSIGNED)

    def focal_union(self) -> np.ndarray:
        if not self.focal_groups:
            return np.zeros(0, dtype=np.int64)
        return np.sort(np.concatenate(self.focal_groups))


def _as_id_array(nodes, n: int, what: str) -> np.ndarray:
    arr = np.unique(np.asarray(list(nodes), dtype=np.int64))
    if len(arr) and (arr.min() < 0 or arr.max() >= n):
        bad = arr[(arr < 0) | (arr >= n)]
        raise ValueError(f"{what} contains invalid node ids {bad.tolist()}")
    return arr


def partition_for_focus(
    graph: Graph,
    focal_groups: list,
    k: int,
) -> GroupAssignment:
    """Leftmost-priority partition: foc-0, foc-1, ..., hop-1..hop-K, discarded.

    Hop group h holds the nodes whose shortest distance to the *focal union*
    is exactly h+1, minus anything already claimed by a group further left.
    """
    if not 1 <= k <= MAX_K:
        raise ValueError(f"K must be in 1..{MAX_K}, got {k}")
    if not focal_groups or all(len(g) == 0 for g in focal_groups):
        raise ValueError("at least one non-empty focal group is required")
    if len(focal_groups) > MAX_FOCAL_GROUPS:
        raise ValueError(f"at most {MAX_FOCAL_GROUPS} focal groups are supported")

    n = graph.n_nodes
    focal_arrays = [_as_id_array(g, n, f"focal group {i}") for i, g in enumerate(focal_groups)]
    focal_arrays = [g for g in focal_arrays if len(g)]

    group_of = np.full(n, UNASSIGNED, dtype=np.int64)
    for gi, arr in enumerate(focal_arrays):
        taken = arr[group_of[arr] != UNASSIGNED]
        if len(taken):
            raise ValueError(f"overlapping focal groups: node ids {taken.tolist()}")
        group_of[arr] = gi

    # BFS by levels from the focal union; focal nodes are pre-visited so
    # leftmost priority holds (hop h never reclaims focal or earlier-hop nodes)
    adj = graph.adjacency()
    visited = np.zeros(n, dtype=bool)
    frontier = np.zeros(n, dtype=bool)
    frontier[np.concatenate(focal_arrays)] = True
    visited |= frontier
    hop_groups: list[np.ndarray] = []
    n_focal = len(focal_arrays)
    for h in range(k):
        reached = adj @ frontier.astype(np.int32)
        frontier = (reached > 0) & ~visited
        visited |= frontier
        members = np.flatnonzero(frontier)
        group_of[members] = n_focal + h
        hop_groups.append(members)

    discarded = np.flatnonzero(group_of == UNASSIGNED)
    return GroupAssignment(
        focal_groups=focal_arrays,
        hop_groups=hop_groups,
        discarded=discarded,
        group_of=group_of,
    )

"""The K-hop layout: focal and hop groups boxed left to right, nodes within
each box laid out independently by dimensionality reduction on topological
distances, then each box reoriented by the rigid transform that minimizes a
LinLog readability energy over between-box node pairs, with optional edge
bundling on top.

Pipeline (per call):

1. groups come in as a ``GroupAssignment`` (focal groups, hop groups, discarded)
2. boxes are placed in columns: focal stack on the far left, then hop-1..K
3. every box is laid out independently (parallelizable, per-box seeds)
4. all ``6^B`` transform tuples are enumerated exhaustively for the minimum
   energy: attraction = sum of distances over between-box edges, repulsion =
   sum of log-distances over a seed-fixed sample of between-box pairs
5. optionally, edges are bundled through shared control points

Determinism: per-box seeds are derived from the master seed and the group
tag, never from scheduling order, so parallel and sequential runs produce
identical layouts.
"""

from __future__ import annotations

import itertools
import threading
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import pdist

from .embed2d import EmbedParams, embed_distance_matrix, small_force_layout
from .model import Graph
from .neighborhoods import UNASSIGNED, GroupAssignment, HopNeighborIndex
from .timing import StepTimer

TRANSFORMS = ("R0", "R90", "R180", "R270", "FlipH", "FlipV")
DR_FALLBACK_SIZE = 16
TRANSFORM_SAMPLE_BUDGET = 10_000
MAX_ENUMERATED_BOXES = 6
LOG_EPSILON = 1e-6

CANVAS_MARGIN = 0.02
BOX_GUTTER = 0.012
MIN_BOX_SIDE = 0.024
BOX_PADDING = 0.008

_BUNDLE_THRESHOLD = 0.1
_BUNDLE_SUPER_THRESHOLD = 0.2
_BUNDLE_MAX_HIERARCHICAL = 4_000


class LayoutCancelled(Exception):
    """Raised when a newer request cancels an in-flight layout."""


@dataclass
class Box:
    tag: str
    rect: tuple[float, float, float, float]  # x, y, w, h
    node_ids: np.ndarray
    local_positions: np.ndarray


@dataclass
class KHopLayout:
    boxes: list[Box]
    transforms: list[str]
    world_positions: np.ndarray  # N x 2, NaN for discarded nodes
    kept_nodes: np.ndarray
    edges: np.ndarray
    polylines: list[np.ndarray]
    energy: float
    tuples_evaluated: int
    k: int
    distance_mode: str
    seed: int
    bundled: bool
    timings: dict[str, float] = field(default_factory=dict)

    def box_of(self) -> dict[int, str]:
        return {int(v): box.tag for box in self.boxes for v in box.node_ids}


def apply_transform(local: np.ndarray, name: str) -> np.ndarray:
    """Apply one of the six rigid transforms about the unit-square center."""
    x, y = local[:, 0], local[:, 1]
    if name == "R0":
        out = (x, y)
    elif name == "R90":
        out = (1.0 - y, x)
    elif name == "R180":
        out = (1.0 - x, 1.0 - y)
    elif name == "R270":
        out = (y, 1.0 - x)
    elif name == "FlipH":
        out = (1.0 - x, y)
    elif name == "FlipV":
        out = (x, 1.0 - y)
    else:
        raise ValueError(f"unknown transform {name!r}")
    return np.stack(out, axis=1)


def to_world(local: np.ndarray, rect: tuple[float, float, float, float]) -> np.ndarray:
    """Map unit-square local positions into a padded rectangle."""
    x, y, w, h = rect
    pad_x = min(BOX_PADDING, w / 6.0)
    pad_y = min(BOX_PADDING, h / 6.0)
    out = np.empty_like(local)
    out[:, 0] = x + pad_x + local[:, 0] * (w - 2.0 * pad_x)
    out[:, 1] = y + pad_y + local[:, 1] * (h - 2.0 * pad_y)
    return out


# -- step 2: place boxes ---------------------------------------------------


def place_boxes(assignment: GroupAssignment) -> dict[str, tuple[float, float, float, float]]:
    """Column layout on the unit canvas: focal boxes stacked in the leftmost
    column, one column per non-empty hop group to the right.  Box area is
    proportional to node count, subject to a minimum side and fixed gutters."""
    focal = [(f"foc-{i}", len(g)) for i, g in enumerate(assignment.focal_groups)]
    hops = [(f"hop-{h + 1}", len(g)) for h, g in enumerate(assignment.hop_groups) if len(g)]
    if not focal:
        raise ValueError("no focal groups to place")

    columns: list[list[tuple[str, int]]] = [focal] + [[h] for h in hops]
    weights = np.array([sum(c for _, c in col) for col in columns], dtype=np.float64)
    total = weights.sum()
    n_cols = len(columns)
    usable_w = 1.0 - 2.0 * CANVAS_MARGIN - BOX_GUTTER * (n_cols - 1)
    usable_h = 1.0 - 2.0 * CANVAS_MARGIN
    # linear blend guarantees the minimum side while filling the canvas exactly
    widths = MIN_BOX_SIDE + (usable_w - n_cols * MIN_BOX_SIDE) * weights / total

    rects: dict[str, tuple[float, float, float, float]] = {}
    cx = CANVAS_MARGIN
    for col, width in zip(columns, widths):
        col_weight = sum(c for _, c in col)
        n_boxes = len(col)
        inner_h = usable_h - BOX_GUTTER * (n_boxes - 1)
        heights = [
            MIN_BOX_SIDE + (inner_h - n_boxes * MIN_BOX_SIDE) * count / col_weight
            for _, count in col
        ]
        cy = CANVAS_MARGIN
        for (tag, _), height in zip(col, heights):
            rects[tag] = (cx, cy, width, height)
            cy += height + BOX_GUTTER
        cx += width + BOX_GUTTER
    return rects


# -- step 3: per-group distance matrices and layout -------------------------


def group_distance_matrix(
    group: np.ndarray,
    assignment: GroupAssignment,
    graph: Graph,
    hop_index: HopNeighborIndex,
    mode: str = "global",
    tag: str | None = None,
) -> np.ndarray:
    """Jaccard distance matrix for one group.

    ``global`` uses the flattened K-hop neighbor sets; ``local`` restricts
    each node's direct neighbors to the previous (left-adjacent) group.
    Focal groups have no previous group and always use the global sets.
    """
    group = np.asarray(group, dtype=np.int64)
    if len(group) == 0:
        raise ValueError("group is empty")
    if mode not in ("global", "local"):
        raise ValueError(f"unknown distance mode {mode!r}")

    use_local = mode == "local" and tag is not None and tag.startswith("hop-")
    if use_local:
        hop = int(tag.split("-")[1])
        previous = assignment.focal_union() if hop == 1 else assignment.hop_groups[hop - 2]
        rows = graph.adjacency()[group][:, previous].astype(np.int64)
    else:
        rows = hop_index.flat_matrix()[group].astype(np.int64)

    inter = np.asarray((rows @ rows.T).todense(), dtype=np.float64)
    sizes = np.asarray(rows.sum(axis=1)).ravel().astype(np.float64)
    union = sizes[:, None] + sizes[None, :] - inter
    with np.errstate(invalid="ignore", divide="ignore"):
        dist = 1.0 - inter / union
    dist[union == 0] = 0.0
    np.fill_diagonal(dist, 0.0)
    return dist


def layout_group(matrix: np.ndarray, seed) -> np.ndarray:
    """Unit-square positions for one box: neighbor-embedding DR on the
    distance matrix, or a small spring simulation below the size threshold."""
    n = len(matrix)
    if n < DR_FALLBACK_SIZE:
        return small_force_layout(matrix, seed)
    return embed_distance_matrix(matrix, EmbedParams(), seed)


def _box_seed(master_seed: int, tag: str) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(master_seed) & 0xFFFFFFFF, zlib.crc32(tag.encode())])


# -- step 4: transform optimization -----------------------------------------


@dataclass
class TransformResult:
    transforms: list[str]
    energy: float
    tuples_evaluated: int


def _between_box_pairs(
    boxes: list[Box],
    graph: Graph,
) -> list[tuple[int, int, np.ndarray, np.ndarray]]:
    """Between-box edges as (box_a, box_b, local_idx_a, local_idx_b) chunks."""
    box_of = np.full(graph.n_nodes, -1, dtype=np.int64)
    local_of = np.full(graph.n_nodes, -1, dtype=np.int64)
    for bi, box in enumerate(boxes):
        box_of[box.node_ids] = bi
        local_of[box.node_ids] = np.arange(len(box.node_ids))

    edges = graph.edges
    ba, bb = box_of[edges[:, 0]], box_of[edges[:, 1]]
    keep = (ba >= 0) & (bb >= 0) & (ba != bb)
    e = edges[keep]
    ea, eb = ba[keep], bb[keep]
    # canonical box order within each chunk
    swap = ea > eb
    u = np.where(swap, e[:, 1], e[:, 0])
    v = np.where(swap, e[:, 0], e[:, 1])
    lo = np.where(swap, eb, ea)
    hi = np.where(swap, ea, eb)

    chunks = []
    for b1 in range(len(boxes)):
        for b2 in range(b1 + 1, len(boxes)):
            sel = (lo == b1) & (hi == b2)
            chunks.append((b1, b2, local_of[u[sel]], local_of[v[sel]]))
    return chunks


def _sample_between_pairs(
    boxes: list[Box],
    budget: int,
    rng: np.random.Generator,
) -> list[tuple[int, int, np.ndarray, np.ndarray]]:
    """Seed-fixed uniform sample of between-box node pairs (all pairs when
    the population fits the budget).  Fixed before enumeration so every
    transform tuple is scored on the same sample."""
    counts = [len(b.node_ids) for b in boxes]
    blocks = [(b1, b2) for b1 in range(len(boxes)) for b2 in range(b1 + 1, len(boxes))]
    block_sizes = np.array([counts[a] * counts[b] for a, b in blocks], dtype=np.int64)
    population = int(block_sizes.sum())
    if population == 0:
        return []

    if population <= budget:
        picks = np.arange(population, dtype=np.int64)
    else:
        chosen = np.zeros(0, dtype=np.int64)
        while len(chosen) < budget:
            draw = rng.integers(0, population, size=int((budget - len(chosen)) * 1.1) + 16)
            chosen = np.unique(np.concatenate([chosen, draw]))
        if len(chosen) > budget:
            chosen = rng.permutation(chosen)[:budget]
            chosen.sort()
        picks = chosen

    offsets = np.concatenate([[0], np.cumsum(block_sizes)])
    out = []
    for bi, (b1, b2) in enumerate(blocks):
        inside = picks[(picks >= offsets[bi]) & (picks < offsets[bi + 1])] - offsets[bi]
        i, j = np.divmod(inside, counts[b2])
        out.append((b1, b2, i.astype(np.int64), j.astype(np.int64)))
    return out


def transform_energy(world_a: np.ndarray, world_b: np.ndarray,
                     edge_i: np.ndarray, edge_j: np.ndarray,
                     rep_i: np.ndarray, rep_j: np.ndarray) -> float:
    """LinLog component for one box pair: edge attraction minus sampled
    log repulsion."""
    energy = 0.0
    if len(edge_i):
        d = np.linalg.norm(world_a[edge_i] - world_b[edge_j], axis=1)
        energy += float(d.sum())
    if len(rep_i):
        d = np.linalg.norm(world_a[rep_i] - world_b[rep_j], axis=1)
        energy -= float(np.log(d + LOG_EPSILON).sum())
    return energy


def optimize_transforms(
    boxes: list[Box],
    graph: Graph,
    sample_budget: int = TRANSFORM_SAMPLE_BUDGET,
    seed: int = 0,
) -> TransformResult:
    """Exhaustively enumerate all 6^B transform tuples and return the energy
    minimizer (ties broken by the lexicographically smallest tuple).

    The energy decomposes over box pairs, so each pair's 6x6 component table
    is computed once and every tuple evaluation sums B*(B-1)/2 lookups.
    """
    b = len(boxes)
    if b == 0:
        raise ValueError("no boxes")
    if b > MAX_ENUMERATED_BOXES:
        return TransformResult(transforms=["R0"] * b, energy=float("nan"), tuples_evaluated=0)

    rng = np.random.default_rng(seed)
    edge_chunks = _between_box_pairs(boxes, graph)
    rep_chunks = _sample_between_pairs(boxes, sample_budget, rng)
    rep_by_block = {(b1, b2): (i, j) for b1, b2, i, j in rep_chunks}

    worlds = [
        [to_world(apply_transform(box.local_positions, t), box.rect) for t in TRANSFORMS]
        for box in boxes
    ]

    components: dict[tuple[int, int], np.ndarray] = {}
    for b1, b2, edge_i, edge_j in edge_chunks:
        rep_i, rep_j = rep_by_block.get((b1, b2), (np.zeros(0, np.int64), np.zeros(0, np.int64)))
        table = np.zeros((len(TRANSFORMS), len(TRANSFORMS)))
        for t1 in range(len(TRANSFORMS)):
            for t2 in range(len(TRANSFORMS)):
                table[t1, t2] = transform_energy(
                    worlds[b1][t1], worlds[b2][t2], edge_i, edge_j, rep_i, rep_j
                )
        components[(b1, b2)] = table

    blocks = list(components.keys())
    best_tuple: tuple[int, ...] | None = None
    best_energy = np.inf
    evaluated = 0
    for tup in itertools.product(range(len(TRANSFORMS)), repeat=b):
        energy = 0.0
        for (b1, b2) in blocks:
            energy += components[(b1, b2)][tup[b1], tup[b2]]
        evaluated += 1
        if energy < best_energy:
            best_energy = energy
            best_tuple = tup
    assert best_tuple is not None
    return TransformResult(
        transforms=[TRANSFORMS[t] for t in best_tuple],
        energy=float(best_energy),
        tuples_evaluated=evaluated,
    )


# -- step 5: edge bundling ---------------------------------------------------


def _cluster_edges(descriptors: np.ndarray, threshold: float) -> np.ndarray:
    """Agglomerative cluster labels over edge descriptors; grid quantization
    above the hierarchical size limit."""
    m = len(descriptors)
    if m == 1:
        return np.zeros(1, dtype=np.int64)
    if m <= _BUNDLE_MAX_HIERARCHICAL:
        z = linkage(pdist(descriptors), method="average")
        return fcluster(z, t=threshold, criterion="distance").astype(np.int64)
    quantized = np.floor(descriptors / threshold).astype(np.int64)
    _, labels = np.unique(quantized, axis=0, return_inverse=True)
    return labels.astype(np.int64)


def bundle_edges(
    world_positions: np.ndarray,
    edges: np.ndarray,
    enabled: bool = True,
) -> list[np.ndarray]:
    """Polylines per edge.  Disabled: straight 2-point segments.  Enabled:
    edges agglomerated by endpoint proximity share a control point at their
    cluster centroid (pulled toward the super-cluster centroid at the second
    level); endpoints never move.  Stateless: toggling off returns exactly
    the straight segments."""
    p = np.asarray(world_positions, dtype=np.float64)
    straight = [np.stack([p[a], p[b]]) for a, b in edges]
    if not enabled or len(edges) < 2:
        return straight

    ea = p[edges[:, 0]]
    eb = p[edges[:, 1]]
    descriptors = np.concatenate([ea, eb], axis=1)
    labels = _cluster_edges(descriptors, _BUNDLE_THRESHOLD)

    midpoints = (ea + eb) / 2.0
    unique_labels, inverse = np.unique(labels, return_inverse=True)
    centroids = np.zeros((len(unique_labels), 2))
    counts = np.zeros(len(unique_labels))
    np.add.at(centroids, inverse, midpoints)
    np.add.at(counts, inverse, 1.0)
    centroids /= counts[:, None]

    controls = centroids.copy()
    if len(unique_labels) >= 2:
        super_labels = _cluster_edges(centroids, _BUNDLE_SUPER_THRESHOLD)
        su, sinv = np.unique(super_labels, return_inverse=True)
        super_centroids = np.zeros((len(su), 2))
        super_counts = np.zeros(len(su))
        np.add.at(super_centroids, sinv, centroids)
        np.add.at(super_counts, sinv, 1.0)
        super_centroids /= super_counts[:, None]
        merged = super_counts[sinv] > 1
        controls[merged] = (2.0 * centroids[merged] + super_centroids[sinv][merged]) / 3.0

    out = []
    for ei in range(len(edges)):
        if counts[inverse[ei]] > 1:
            out.append(np.stack([ea[ei], controls[inverse[ei]], eb[ei]]))
        else:
            out.append(straight[ei])
    return out


# -- full pipeline ------------------------------------------------------------


def _check_cancel(cancel: threading.Event | None) -> None:
    if cancel is not None and cancel.is_set():
        raise LayoutCancelled()


def compute_khop_layout(
    graph: Graph,
    assignment: GroupAssignment,
    hop_index: HopNeighborIndex,
    distance_mode: str = "global",
    seed: int = 0,
    bundle: bool = False,
    sample_budget: int = TRANSFORM_SAMPLE_BUDGET,
    parallel: bool = True,
    cancel: threading.Event | None = None,
) -> KHopLayout:
    """Run the full boxed layout for a focal assignment; deterministic under
    (inputs, seed) whether boxes are laid out in parallel or sequentially."""
    if not assignment.focal_groups or all(len(g) == 0 for g in assignment.focal_groups):
        raise ValueError("focal set is empty")

    timer = StepTimer()
    _check_cancel(cancel)

    with timer.step("place"):
        rects = place_boxes(assignment)
    _check_cancel(cancel)

    groups = [(tag, members) for tag, members in assignment.groups() if len(members)]

    with timer.step("layout"):
        def lay_out(tag: str, members: np.ndarray) -> np.ndarray:
            _check_cancel(cancel)
            matrix = group_distance_matrix(members, assignment, graph, hop_index, distance_mode, tag)
            return layout_group(matrix, _box_seed(seed, tag))

        if parallel and len(groups) > 1:
            with ThreadPoolExecutor(max_workers=min(len(groups), 8)) as pool:
                futures = [pool.submit(lay_out, tag, members) for tag, members in groups]
                locals_ = [f.result() for f in futures]
        else:
            locals_ = [lay_out(tag, members) for tag, members in groups]
    _check_cancel(cancel)

    boxes = [
        Box(tag=tag, rect=rects[tag], node_ids=members, local_positions=loc)
        for (tag, members), loc in zip(groups, locals_)
    ]

    with timer.step("transform"):
        result = optimize_transforms(boxes, graph, sample_budget=sample_budget, seed=seed)
    _check_cancel(cancel)

    world = np.full((graph.n_nodes, 2), np.nan)
    for box, tname in zip(boxes, result.transforms):
        world[box.node_ids] = to_world(apply_transform(box.local_positions, tname), box.rect)

    kept = assignment.kept_nodes()
    mask = (assignment.group_of[graph.edges[:, 0]] != UNASSIGNED) & (
        assignment.group_of[graph.edges[:, 1]] != UNASSIGNED
    ) if len(graph.edges) else np.zeros(0, dtype=bool)
    layout_edges = graph.edges[mask] if len(graph.edges) else graph.edges

    with timer.step("bundle"):
        polylines = bundle_edges(world, layout_edges, enabled=bundle)
    _check_cancel(cancel)

    return KHopLayout(
        boxes=boxes,
        transforms=result.transforms,
        world_positions=world,
        kept_nodes=kept,
        edges=layout_edges,
        polylines=polylines,
        energy=result.energy,
        tuples_evaluated=result.tuples_evaluated,
        k=hop_index.k,
        distance_mode=distance_mode,
        seed=seed,
        bundled=bundle,
        timings=timer.as_dict(),
    )


def layout_to_dict(layout: KHopLayout, include_timings: bool = False) -> dict:
    """JSON-ready canonical form; timings are excluded by default so output
    files are byte-identical across runs."""
    doc = {
        "schema": 1,
        "k": layout.k,
        "seed": layout.seed,
        "distanceMode": layout.distance_mode,
        "bundled": layout.bundled,
        "energy": layout.energy,
        "tuplesEvaluated": layout.tuples_evaluated,
        "boxes": [
            {
                "group": box.tag,
                "rect": [float(v) for v in box.rect],
                "transform": t,
                "nodes": [int(v) for v in box.node_ids],
            }
            for box, t in zip(layout.boxes, layout.transforms)
        ],
        "positions": [
            [int(v), float(layout.world_positions[v, 0]), float(layout.world_positions[v, 1])]
            for v in layout.kept_nodes
        ],
        "edges": [[int(a), int(b)] for a, b in layout.edges],
        "polylines": [[[float(x), float(y)] for x, y in line] for line in layout.polylines],
    }
    if include_timings:
        doc["timings"] = layout.timings
    return doc

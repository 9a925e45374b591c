"""Distance comparison across spaces: grid-binned 2D charts with marginal
histograms, brush extraction of node pairs, and scope filters.

Charts put the latent distance on the x axis and either the topology or
feature distance on the y axis.  Log scale applies a log1p rescale to both
axes before binning; it never changes the set of pairs, only their bins.
Pairs lacking a feature distance are excluded from feature charts and
surfaced via ``excluded_count``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import (
    DEFAULT_PAIR_BUDGET,
    BetweenPairs,
    DistanceContext,
    ExcludingPairs,
    ExplicitPairs,
    PairPopulation,
    PairSample,
    WithinPairs,
    sample_pairs,
)
from .model import Graph, PredictionData
from .predictions import LinkConfusion, link_confusion

DEFAULT_GRID_SIZE = 25
MARGINAL_BINS = 20


@dataclass
class DistanceChart:
    x_space: str            # always "latent"
    y_space: str            # "topo" | "feature"
    scope: str
    scale: str              # "linear" | "log"
    grid_size: int
    cells: np.ndarray       # grid_size x grid_size counts
    x_hist: np.ndarray      # MARGINAL_BINS counts
    y_hist: np.ndarray
    included_count: int
    excluded_count: int
    sampled: bool
    population: int
    # retained for brushing: the included pairs and their raw distances
    pairs: np.ndarray
    x_values: np.ndarray
    y_values: np.ndarray


def _axis_transform(values: np.ndarray, scale: str) -> np.ndarray:
    if scale == "linear":
        return values
    if scale == "log":
        return np.log1p(values) / np.log1p(1.0)
    raise ValueError(f"unknown scale {scale!r}")


def _bin_unit(values: np.ndarray, bins: int) -> np.ndarray:
    """Half-open unit-interval bins with the last bin closed."""
    idx = np.floor(values * bins).astype(np.int64)
    return np.clip(idx, 0, bins - 1)


def build_chart(
    sample: PairSample,
    y_space: str = "topo",
    scale: str = "linear",
    grid_size: int = DEFAULT_GRID_SIZE,
) -> DistanceChart:
    """Grid-bin the sampled pairs on [0,1]^2 plus marginal histograms.

    Conservation: the cell total, each marginal total, and the included pair
    count are all equal.
    """
    if y_space == "topo":
        y_raw = sample.topo
    elif y_space == "feature":
        y_raw = sample.feature
    else:
        raise ValueError(f"unknown y space {y_space!r}")
    x_raw = sample.latent

    include = ~np.isnan(y_raw) & ~np.isnan(x_raw)
    excluded = int(len(sample) - include.sum())
    pairs = sample.pairs[include]
    x_val = x_raw[include]
    y_val = y_raw[include]

    x = _axis_transform(x_val, scale)
    y = _axis_transform(y_val, scale)
    cells = np.zeros((grid_size, grid_size), dtype=np.int64)
    if len(x):
        np.add.at(cells, (_bin_unit(y, grid_size), _bin_unit(x, grid_size)), 1)
    x_hist = np.bincount(_bin_unit(x, MARGINAL_BINS), minlength=MARGINAL_BINS) if len(x) else np.zeros(MARGINAL_BINS, dtype=np.int64)
    y_hist = np.bincount(_bin_unit(y, MARGINAL_BINS), minlength=MARGINAL_BINS) if len(y) else np.zeros(MARGINAL_BINS, dtype=np.int64)

    return DistanceChart(
        x_space="latent",
        y_space=y_space,
        scope=sample.scope,
        scale=scale,
        grid_size=grid_size,
        cells=cells,
        x_hist=np.asarray(x_hist, dtype=np.int64),
        y_hist=np.asarray(y_hist, dtype=np.int64),
        included_count=int(include.sum()),
        excluded_count=excluded,
        sampled=sample.sampled,
        population=sample.population,
        pairs=pairs,
        x_values=x_val,
        y_values=y_val,
    )


def brush_pairs(
    chart: DistanceChart,
    region: tuple[float, float, float, float],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pairs whose raw (x, y) distances fall in the inclusive rectangle
    (x0, x1, y0, y1), ordered by descending |x - y| (most anomalous first).

    Returns (pairs, x, y) in that order.  Brushing operates on the retained
    sample, which is exactly what the chart displays.
    """
    x0, x1, y0, y1 = region
    if x1 < x0 or y1 < y0:
        raise ValueError(f"degenerate region {region}")
    inside = (
        (chart.x_values >= x0)
        & (chart.x_values <= x1)
        & (chart.y_values >= y0)
        & (chart.y_values <= y1)
    )
    idx = np.flatnonzero(inside)
    order = np.argsort(-np.abs(chart.x_values[idx] - chart.y_values[idx]), kind="stable")
    sel = idx[order]
    return chart.pairs[sel], chart.x_values[sel], chart.y_values[sel]


# -- scope filters -----------------------------------------------------------


@dataclass(frozen=True)
class FilterSpec:
    connectivity: str = "any"   # connected | unconnected | any
    prediction: str = "any"     # FP | FN | TP | TN | any
    groups: str = "all"         # all | within:<g> | between:<g>,<h>

    def label(self) -> str:
        return f"{self.groups}/{self.connectivity}/{self.prediction}"


def _group_nodes(graph: Graph, focal_groups: list[np.ndarray], groups: str) -> PairPopulation:
    if groups == "all":
        return WithinPairs(np.arange(graph.n_nodes, dtype=np.int64), label="all")
    if groups.startswith("within:"):
        g = int(groups.split(":")[1])
        return WithinPairs(focal_groups[g], label=f"within foc-{g}")
    if groups.startswith("between:"):
        a, b = (int(v) for v in groups.split(":")[1].split(","))
        return BetweenPairs(focal_groups[a], focal_groups[b], label=f"between foc-{a}/foc-{b}")
    raise ValueError(f"unknown groups spec {groups!r}")


def _pairs_in_population(pairs: np.ndarray, base: PairPopulation) -> np.ndarray:
    if isinstance(base, WithinPairs):
        ok = np.isin(pairs[:, 0], base.nodes) & np.isin(pairs[:, 1], base.nodes)
    elif isinstance(base, BetweenPairs):
        ok = (np.isin(pairs[:, 0], base.a) & np.isin(pairs[:, 1], base.b)) | (
            np.isin(pairs[:, 0], base.b) & np.isin(pairs[:, 1], base.a)
        )
    else:
        raise TypeError(f"cannot intersect with {type(base).__name__}")
    return pairs[ok]


def filter_scope(
    spec: FilterSpec,
    graph: Graph,
    focal_groups: list[np.ndarray],
    predictions: PredictionData | None = None,
    confusion: LinkConfusion | None = None,
) -> PairPopulation:
    """Resolve a filter to a pair population for sampling.

    Connectivity and prediction conjuncts narrow the group scope; the
    prediction filter requires link-prediction data.
    """
    base = _group_nodes(graph, focal_groups, spec.groups)

    if spec.prediction != "any":
        if predictions is None or predictions.kind != "linkPrediction":
            raise ValueError("no link predictions loaded")
        if confusion is None:
            confusion = link_confusion(graph, predictions)
        category = {
            "FP": confusion.fp,
            "FN": confusion.fn,
            "TP": confusion.tp,
            "TN": confusion.tn,
        }[spec.prediction]
        pairs = _pairs_in_population(category, base)
        if spec.connectivity != "any":
            is_edge = _edge_mask(graph, pairs)
            pairs = pairs[is_edge] if spec.connectivity == "connected" else pairs[~is_edge]
        return ExplicitPairs(pairs, label=spec.label())

    if spec.connectivity == "connected":
        pairs = _pairs_in_population(graph.edges, base)
        return ExplicitPairs(pairs, label=spec.label())
    if spec.connectivity == "unconnected":
        return ExcludingPairs(base, graph.edges, graph.n_nodes, label=spec.label())
    return base


def _edge_mask(graph: Graph, pairs: np.ndarray) -> np.ndarray:
    if len(pairs) == 0:
        return np.zeros(0, dtype=bool)
    n = graph.n_nodes
    lo = np.minimum(pairs[:, 0], pairs[:, 1])
    hi = np.maximum(pairs[:, 0], pairs[:, 1])
    codes = lo * n + hi
    edge_codes = graph.edges[:, 0] * n + graph.edges[:, 1] if len(graph.edges) else np.zeros(0, dtype=np.int64)
    return np.isin(codes, edge_codes)


def standard_charts(
    ctx: DistanceContext,
    graph: Graph,
    focal_groups: list[np.ndarray],
    y_space: str = "topo",
    scale: str = "linear",
    grid_size: int = DEFAULT_GRID_SIZE,
    budget: int | None = None,
    seed: int = 0,
) -> list[DistanceChart]:
    """The side-by-side chart set: all pairs, within each focal group, and
    between the first two groups when present."""
    budget = DEFAULT_PAIR_BUDGET if budget is None else budget
    populations: list[PairPopulation] = [
        WithinPairs(np.arange(graph.n_nodes, dtype=np.int64), label="all")
    ]
    for i, group in enumerate(focal_groups):
        if len(group) >= 2:
            populations.append(WithinPairs(group, label=f"within foc-{i}"))
    if len(focal_groups) >= 2 and len(focal_groups[0]) and len(focal_groups[1]):
        populations.append(BetweenPairs(focal_groups[0], focal_groups[1], label="between foc-0/foc-1"))

    charts = []
    for pop in populations:
        sample = sample_pairs(pop, ctx, budget=budget, seed=seed)
        charts.append(build_chart(sample, y_space=y_space, scale=scale, grid_size=grid_size))
    return charts

"""Correspond a graph to its GNN node embedding.

The package splits into data (model), derived structures (neighborhoods,
metrics, predictions), layouts (layout_global, layout_khop, latent,
embed2d), aggregation (features, distances), and the service surface
(service, server, cli).
"""

from .model import (
    Dataset,
    DatasetError,
    Diagnostic,
    Embedding,
    FeatureTable,
    Graph,
    Node,
    PredictionData,
    load_dataset,
    serialize_dataset,
    validate,
)
from .neighborhoods import (
    GroupAssignment,
    HopNeighborIndex,
    build_hop_index,
    partition_for_focus,
)
from .metrics import (
    DistanceContext,
    PairSample,
    feature_distance,
    latent_distance,
    sample_pairs,
    topo_distance,
)
from .embed2d import EmbedParams, embed_distance_matrix, embed_vectors
from .latent import (
    NeighborBlockGrid,
    Projection2D,
    RainbowColor,
    neighbor_blocks,
    position_color,
    project_latent,
)
from .layout_global import GlobalLayout, global_force_layout
from .layout_khop import (
    KHopLayout,
    bundle_edges,
    compute_khop_layout,
    group_distance_matrix,
    layout_group,
    optimize_transforms,
    place_boxes,
)
from .features import (
    build_strip,
    dense_histograms,
    feature_diff,
    sparse_counts,
    sparse_rows,
)
from .distances import DistanceChart, FilterSpec, brush_pairs, build_chart, filter_scope
from .predictions import LinkConfusion, label_correctness, link_confusion, recommendations
from .session import FocusAction, Session, apply_focus_action
from .service import Workspace

__version__ = "0.1.0"

__all__ = [
    "Dataset", "DatasetError", "Diagnostic", "Embedding", "FeatureTable", "Graph",
    "Node", "PredictionData", "load_dataset", "serialize_dataset", "validate",
    "GroupAssignment", "HopNeighborIndex", "build_hop_index", "partition_for_focus",
    "DistanceContext", "PairSample", "feature_distance", "latent_distance",
    "sample_pairs", "topo_distance",
    "EmbedParams", "embed_distance_matrix", "embed_vectors",
    "NeighborBlockGrid", "Projection2D", "RainbowColor", "neighbor_blocks",
    "position_color", "project_latent",
    "GlobalLayout", "global_force_layout",
    "KHopLayout", "bundle_edges", "compute_khop_layout", "group_distance_matrix",
    "layout_group", "optimize_transforms", "place_boxes",
    "build_strip", "dense_histograms", "feature_diff", "sparse_counts", "sparse_rows",
    "DistanceChart", "FilterSpec", "brush_pairs", "build_chart", "filter_scope",
    "LinkConfusion", "label_correctness", "link_confusion", "recommendations",
    "FocusAction", "Session", "apply_focus_action",
    "Workspace",
]

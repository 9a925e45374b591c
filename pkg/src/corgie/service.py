"""Dataset workspace: ingestion, the preprocessing pipeline with its disk
cache, session bookkeeping, and cancellable background K-hop layout jobs.

Layout jobs follow a single-publisher discipline: every focus action bumps
the session's pending job id and cancels the in-flight job, and a finished
job publishes its result only if it is still the latest.  Publication is an
atomic reference swap, so readers never observe a torn artifact.
"""

from __future__ import annotations

import itertools
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .cache import ArtifactCache, dataset_hashes, resolve_cache_dir
from .distances import DEFAULT_GRID_SIZE, DistanceChart, FilterSpec, build_chart, filter_scope
from .embed2d import EmbedParams
from .features import (
    DEFAULT_BIN_COUNT,
    DEFAULT_PIXEL_BUDGET,
    dense_histograms,
    sparse_rows,
)
from .latent import GRID_SIZE, Projection2D, neighbor_blocks, position_colors_hex, project_latent
from .layout_global import global_force_layout
from .layout_khop import LayoutCancelled, compute_khop_layout, layout_to_dict
from .metrics import DEFAULT_PAIR_BUDGET, DistanceContext, sample_pairs
from .model import Dataset, load_dataset, validate
from .neighborhoods import HopNeighborIndex, build_hop_index, partition_for_focus
from .predictions import link_confusion, recommendations
from .session import FocusAction, Session, apply_focus_action
from .timing import StepTimer


class WorkspaceError(RuntimeError):
    pass


def _hop_index_to_payload(index: HopNeighborIndex) -> dict:
    return {
        "k": index.k,
        "hops": [[h.tolist() for h in node_hops] for node_hops in index.hops],
    }


def _hop_index_from_payload(payload: dict) -> HopNeighborIndex:
    hops = [
        [np.asarray(h, dtype=np.int64) for h in node_hops]
        for node_hops in payload["hops"]
    ]
    flat = [
        np.sort(np.concatenate(node_hops)) if node_hops else np.zeros(0, dtype=np.int64)
        for node_hops in hops
    ]
    return HopNeighborIndex(k=payload["k"], hops=hops, flat=flat)


class Workspace:
    """One loaded dataset plus everything computed from it."""

    def __init__(
        self,
        dataset_dir: str | Path,
        k: int = 2,
        seed: int = 7,
        cache_dir: str | Path | None = None,
        pair_budget: int = DEFAULT_PAIR_BUDGET,
        layout_iterations: int = 300,
        hop_cache_limit: int = 5_000,
    ):
        self.dataset_dir = Path(dataset_dir)
        self.k = k
        self.seed = seed
        self.pair_budget = pair_budget
        self.layout_iterations = layout_iterations
        self.hop_cache_limit = hop_cache_limit

        self.dataset: Dataset = load_dataset(self.dataset_dir)
        diagnostics = validate(
            self.dataset.graph, self.dataset.features, self.dataset.embedding, self.dataset.predictions
        )
        errors = [d for d in diagnostics if d.severity == "error"]
        if errors:
            raise WorkspaceError("; ".join(str(d) for d in errors))
        self.diagnostics = diagnostics

        self.cache = ArtifactCache(resolve_cache_dir(self.dataset_dir, cache_dir))
        self.hashes = dataset_hashes(self.dataset)

        # filled by precompute()
        self.global_positions: np.ndarray | None = None
        self.projection: Projection2D | None = None
        self.hop_index: HopNeighborIndex | None = None
        self.blocks = None
        self.context: DistanceContext | None = None
        self.confusion = None

        self.sessions: dict[str, Session] = {}
        self._sessions_lock = threading.Lock()
        self._executor = ThreadPoolExecutor(max_workers=2, thread_name_prefix="khop")
        self._job_ids = itertools.count(1)
        self._chart_cache: dict[tuple, DistanceChart] = {}
        self._chart_lock = threading.Lock()

    # -- preprocessing -----------------------------------------------------

    def precompute(self, force: bool = False) -> dict:
        """Build or load every preprocessing artifact; returns a report of
        which artifacts were cache hits plus the timing breakdown."""
        report: dict[str, str] = {}
        timer = StepTimer()
        graph = self.dataset.graph
        params = EmbedParams()

        key = f"{self.hashes['graph']}:seed={self.seed}:iter={self.layout_iterations}"
        with timer.step("globalLayout"):
            cached = None if force else self.cache.get("global-layout", key)
            if cached is not None:
                self.global_positions = np.asarray(cached["positions"])
                report["global-layout"] = "hit"
            else:
                layout = global_force_layout(graph, iterations=self.layout_iterations, seed=self.seed)
                self.global_positions = layout.positions
                self.cache.put("global-layout", key, {"positions": layout.positions.tolist()})
                report["global-layout"] = "computed"

        proj_key = f"{self.hashes['embedding']}:params={sorted(params.to_dict().items())}:seed={self.seed}"
        with timer.step("projection"):
            cached = None if force else self.cache.get("projection", proj_key)
            if cached is not None:
                self.projection = Projection2D(
                    positions=np.asarray(cached["positions"]),
                    method=cached["method"],
                    params=cached["params"],
                    seed=self.seed,
                    diagnostics=cached.get("diagnostics", []),
                )
                report["projection"] = "hit"
            else:
                self.projection = project_latent(self.dataset.embedding, params, seed=self.seed)
                self.cache.put(
                    "projection",
                    proj_key,
                    {
                        "positions": self.projection.positions.tolist(),
                        "method": self.projection.method,
                        "params": self.projection.params,
                        "diagnostics": self.projection.diagnostics,
                    },
                )
                report["projection"] = "computed"

        hop_key = f"{self.hashes['graph']}:k={self.k}"
        with timer.step("hopIndex"):
            cached = None if force else self.cache.get("hop-index", hop_key)
            if cached is not None:
                self.hop_index = _hop_index_from_payload(cached)
                report["hop-index"] = "hit"
            else:
                self.hop_index = build_hop_index(graph, self.k)
                # JSON hop sets balloon on large dense-ball graphs, and the
                # sparse BFS recompute is cheap there anyway
                if graph.n_nodes <= self.hop_cache_limit:
                    self.cache.put("hop-index", hop_key, _hop_index_to_payload(self.hop_index))
                report["hop-index"] = "computed"

        blocks_key = f"{hop_key}:proj={proj_key}:grid={GRID_SIZE}"
        with timer.step("neighborBlocks"):
            cached = None if force else self.cache.get("neighbor-blocks", blocks_key)
            if cached is None:
                hop1 = [node_hops[0] for node_hops in self.hop_index.hops]
                self.blocks = neighbor_blocks(self.projection.positions, hop1)
                self.cache.put("neighbor-blocks", blocks_key, self._blocks_payload())
                report["neighbor-blocks"] = "computed"
            else:
                self.blocks = self._blocks_from_payload(cached)
                report["neighbor-blocks"] = "hit"

        feat_key = f"{self.hashes['features']}:{self.hashes['graph']}:bins={DEFAULT_BIN_COUNT}:px={DEFAULT_PIXEL_BUDGET}"
        with timer.step("featureAggregates"):
            cached = None if force else self.cache.get("features-agg", feat_key)
            if cached is None:
                payload = self._feature_rows_payload([])
                self.cache.put("features-agg", feat_key, payload)
                report["features-agg"] = "computed"
            else:
                report["features-agg"] = "hit"

        self.context = DistanceContext(
            graph, self.dataset.embedding, self.hop_index, self.dataset.features
        )
        if self.dataset.predictions.kind == "linkPrediction":
            self.confusion = link_confusion(graph, self.dataset.predictions)
        return {"artifacts": report, "timings": timer.as_dict()}

    def _require_precomputed(self) -> None:
        if self.context is None:
            raise WorkspaceError("precompute() has not been run")

    def _blocks_payload(self) -> dict:
        return {
            "gridSize": self.blocks.grid_size,
            "blocks": [
                {
                    "row": b.row,
                    "col": b.col,
                    "members": b.member_nodes.tolist(),
                    "cells": b.cells.tolist(),
                }
                for b in self.blocks.blocks
            ],
        }

    def _blocks_from_payload(self, payload: dict):
        from .latent import NeighborBlock, NeighborBlockGrid

        return NeighborBlockGrid(
            grid_size=payload["gridSize"],
            blocks=[
                NeighborBlock(
                    row=b["row"],
                    col=b["col"],
                    member_nodes=np.asarray(b["members"], dtype=np.int64),
                    cells=np.asarray(b["cells"], dtype=np.int64),
                )
                for b in payload["blocks"]
            ],
        )

    def _feature_rows_payload(self, focal_groups: list[np.ndarray]) -> dict:
        graph = self.dataset.graph
        features = self.dataset.features
        scopes: dict[str, np.ndarray] = {"all": np.arange(graph.n_nodes, dtype=np.int64)}
        for i, group in enumerate(focal_groups):
            scopes[f"foc-{i}"] = group
        dense = dense_histograms(features, graph, scopes)
        sparse = sparse_rows(features, graph, focal_groups)
        return {
            "dense": [
                {
                    "scope": row.scope,
                    "histograms": [
                        {
                            "feature": h.feature,
                            "binEdges": h.bin_edges.tolist(),
                            "counts": h.counts.tolist(),
                        }
                        for h in row.histograms
                    ],
                }
                for row in dense
            ],
            "sparse": [
                {
                    "scope": row.scope,
                    "counts": row.counts.tolist(),
                    "strip": row.strip.tolist(),
                    "rowMax": row.row_max,
                }
                for row in sparse
            ],
        }

    # -- sessions and focus --------------------------------------------------

    def create_session(self, session_id: str | None = None) -> Session:
        session = Session(session_id, k=self.k)
        with self._sessions_lock:
            self.sessions[session.id] = session
        return session

    def get_session(self, session_id: str) -> Session:
        with self._sessions_lock:
            if session_id not in self.sessions:
                raise KeyError(session_id)
            return self.sessions[session_id]

    def apply_focus(self, session_id: str, action: FocusAction) -> int | None:
        """Mutate the session's focal groups and schedule the layout job.

        Returns the new job id, or None when the action cleared the focus.
        Raises ``BlockingIOError`` if another focus apply holds the lock.
        """
        self._require_precomputed()
        session = self.get_session(session_id)
        if not session.lock.acquire(blocking=False):
            raise BlockingIOError("focus apply already in progress")
        try:
            new_groups = apply_focus_action(
                session.focal_groups, action, self.dataset.graph.n_nodes
            )
            session.focal_groups = new_groups
            session.job_error = None
            if session.cancel_event is not None:
                session.cancel_event.set()

            if not new_groups:
                session.layout = None
                session.layout_job_id = None
                session.pending_job_id = None
                session.cancel_event = None
                return None

            job_id = next(self._job_ids)
            cancel = threading.Event()
            session.pending_job_id = job_id
            session.cancel_event = cancel
            groups_snapshot = [g.copy() for g in new_groups]
            bundle = session.settings.edge_bundling
            mode = session.settings.distance_mode
            self._executor.submit(self._run_layout, session, groups_snapshot, job_id, cancel, bundle, mode)
            return job_id
        finally:
            session.lock.release()

    def _run_layout(
        self,
        session: Session,
        focal_groups: list[np.ndarray],
        job_id: int,
        cancel: threading.Event,
        bundle: bool,
        mode: str,
    ) -> None:
        try:
            assignment = partition_for_focus(self.dataset.graph, focal_groups, self.k)
            layout = compute_khop_layout(
                self.dataset.graph,
                assignment,
                self.hop_index,
                distance_mode=mode,
                seed=self.seed,
                bundle=bundle,
                cancel=cancel,
            )
            payload = layout_to_dict(layout, include_timings=True)
        except LayoutCancelled:
            return
        except Exception as exc:  # published as a job error, visible via the API
            with session.lock:
                if session.pending_job_id == job_id:
                    session.job_error = str(exc)
                    session.pending_job_id = None
            return
        with session.lock:
            if session.pending_job_id == job_id:
                session.layout = payload
                session.layout_job_id = job_id
                session.pending_job_id = None

    def layout_status(self, session_id: str) -> tuple[str, dict | None]:
        """One of ("none", None), ("pending", None), ("error", {...}),
        ("ready", payload)."""
        session = self.get_session(session_id)
        with session.lock:
            if session.pending_job_id is not None:
                return "pending", {"jobId": session.pending_job_id}
            if session.job_error is not None:
                return "error", {"error": session.job_error}
            if session.layout is None:
                return "none", None
            return "ready", session.layout

    # -- distance charts -------------------------------------------------------

    def _groups_fingerprint(self, focal_groups: list[np.ndarray]) -> str:
        return "|".join(",".join(map(str, g.tolist())) for g in focal_groups)

    def distance_chart(
        self,
        session_id: str | None,
        scope: str = "all",
        y_space: str = "topo",
        scale: str = "linear",
        connectivity: str = "any",
        prediction: str = "any",
        grid_size: int = DEFAULT_GRID_SIZE,
        budget: int | None = None,
        seed: int | None = None,
    ) -> DistanceChart:
        self._require_precomputed()
        focal_groups = []
        if session_id is not None:
            focal_groups = self.get_session(session_id).focal_groups
        budget = self.pair_budget if budget is None else budget
        seed = self.seed if seed is None else seed

        key = (
            self._groups_fingerprint(focal_groups),
            scope, y_space, scale, connectivity, prediction, grid_size, budget, seed,
        )
        with self._chart_lock:
            if key in self._chart_cache:
                return self._chart_cache[key]

        spec = FilterSpec(connectivity=connectivity, prediction=prediction, groups=scope)
        population = filter_scope(
            spec, self.dataset.graph, focal_groups, self.dataset.predictions, self.confusion
        )
        sample = sample_pairs(population, self.context, budget=budget, seed=seed)
        chart = build_chart(sample, y_space=y_space, scale=scale, grid_size=grid_size)
        with self._chart_lock:
            self._chart_cache[key] = chart
        return chart

    def recommend(self, node_id: int, top: int = 5) -> list[tuple[int, float]]:
        self._require_precomputed()
        if self.dataset.predictions.kind != "linkPrediction":
            raise WorkspaceError("recommendations require a link-prediction dataset")
        return recommendations(
            self.dataset.graph, self.dataset.embedding.unit_vectors(), node_id, top
        )

    def latent_payload(self) -> dict:
        self._require_precomputed()
        return {
            "schema": 1,
            "positions": self.projection.positions.tolist(),
            "colors": position_colors_hex(self.projection.positions),
            "method": self.projection.method,
            "params": self.projection.params,
            "blocks": self._blocks_payload(),
        }

    def feature_payload(self, session_id: str | None, scopes: list[str]) -> dict:
        self._require_precomputed()
        focal_groups = []
        if session_id is not None:
            focal_groups = self.get_session(session_id).focal_groups
        wanted = set(scopes)
        payload = self._feature_rows_payload(focal_groups)
        payload["dense"] = [row for row in payload["dense"] if row["scope"] in wanted]
        payload["sparse"] = [row for row in payload["sparse"] if row["scope"] in wanted]
        payload["schema"] = 1
        return payload

    def shutdown(self) -> None:
        for session in list(self.sessions.values()):
            if session.cancel_event is not None:
                session.cancel_event.set()
        self._executor.shutdown(wait=False)

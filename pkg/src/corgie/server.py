"""HTTP/JSON API over a workspace.

Focus is asynchronous: POST focus returns 202 with a job id and the K-hop
layout endpoint answers 202 while the job runs, 200 once published, 404
before any focus exists.  All payloads carry ``"schema": 1``.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import Body, FastAPI, HTTPException, Query, Response
from fastapi.middleware.cors import CORSMiddleware

from .session import FocusAction
from .service import Workspace, WorkspaceError

DEFAULT_SESSION = "default"


def create_app(workspace: Workspace, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="corgie", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    workspace.create_session(DEFAULT_SESSION)
    app.state.workspace = workspace

    def session_or_404(session_id: str):
        try:
            return workspace.get_session(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}") from None

    @app.get("/api/dataset")
    def dataset_summary():
        ds = workspace.dataset
        graph = ds.graph
        payload = {
            "schema": 1,
            "nNodes": graph.n_nodes,
            "nEdges": graph.n_edges,
            "nodeTypes": graph.node_types,
            "types": graph.type_indices().tolist(),
            "labels": [graph.display_label(v) for v in range(graph.n_nodes)],
            "edges": graph.edges.tolist(),
            "denseFeatures": ds.features.dense_names,
            "denseValues": ds.features.dense_values.tolist(),
            "denseMask": ds.features.dense_mask.tolist(),
            "sparseCount": ds.features.sparse_count,
            "embeddingDim": ds.embedding.dim,
            "predictionKind": ds.predictions.kind,
            "k": workspace.k,
            "diagnostics": [str(d) for d in workspace.diagnostics],
        }
        if ds.predictions.kind == "nodeClassification":
            from .predictions import label_correctness

            payload["trueLabels"] = ds.predictions.true_labels.tolist()
            payload["predLabels"] = ds.predictions.pred_labels.tolist()
            payload["correct"] = label_correctness(
                ds.predictions.true_labels, ds.predictions.pred_labels
            ).tolist()
        return payload

    @app.get("/api/latent")
    def latent():
        return workspace.latent_payload()

    @app.get("/api/global-layout")
    def global_layout():
        return {"schema": 1, "positions": workspace.global_positions.tolist()}

    @app.get("/api/features")
    def features(scopes: str = "all", session: str = DEFAULT_SESSION):
        wanted = [s.strip() for s in scopes.split(",") if s.strip()]
        focal = [s for s in wanted if s.startswith("foc-") or s == "diff"]
        if focal:
            session_or_404(session)
            return workspace.feature_payload(session, wanted)
        return workspace.feature_payload(None, wanted)

    @app.post("/api/session", status_code=201)
    def create_session():
        session = workspace.create_session()
        return {"schema": 1, "id": session.id}

    @app.get("/api/session/{session_id}")
    def session_state(session_id: str):
        session = session_or_404(session_id)
        with session.lock:
            return {
                "schema": 1,
                "id": session.id,
                "k": session.k,
                "focalGroups": [g.tolist() for g in session.focal_groups],
                "selection": session.selection.tolist(),
                "settings": {
                    "nodeColorMode": session.settings.node_color_mode,
                    "colorFeature": session.settings.color_feature,
                    "hoverExtendsToNeighbors": session.settings.hover_extends_to_neighbors,
                    "edgeBundling": session.settings.edge_bundling,
                    "distanceMode": session.settings.distance_mode,
                },
            }

    @app.post("/api/session/{session_id}/focus", status_code=202)
    def focus(session_id: str, body: dict = Body(...)):
        session_or_404(session_id)
        try:
            action = FocusAction(
                kind=body.get("kind", ""),
                node_ids=tuple(int(v) for v in body.get("nodeIds", [])),
                group=body.get("group"),
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        try:
            job_id = workspace.apply_focus(session_id, action)
        except BlockingIOError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from None
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        return {"schema": 1, "jobId": job_id}

    @app.get("/api/session/{session_id}/khop-layout")
    def khop_layout(session_id: str, response: Response):
        session_or_404(session_id)
        status, payload = workspace.layout_status(session_id)
        if status == "none":
            raise HTTPException(status_code=404, detail="no focus applied")
        if status == "pending":
            response.status_code = 202
            return {"schema": 1, "status": "pending", **payload}
        if status == "error":
            raise HTTPException(status_code=500, detail=payload["error"])
        return payload

    @app.post("/api/session/{session_id}/settings")
    def update_settings(session_id: str, body: dict = Body(...)):
        session = session_or_404(session_id)
        with session.lock:
            st = session.settings
            if "nodeColorMode" in body:
                st.node_color_mode = body["nodeColorMode"]
            if "colorFeature" in body:
                st.color_feature = body["colorFeature"]
            if "hoverExtendsToNeighbors" in body:
                st.hover_extends_to_neighbors = int(body["hoverExtendsToNeighbors"])
            if "edgeBundling" in body:
                st.edge_bundling = bool(body["edgeBundling"])
            if "distanceMode" in body:
                if body["distanceMode"] not in ("local", "global"):
                    raise HTTPException(status_code=400, detail="distanceMode must be local|global")
                st.distance_mode = body["distanceMode"]
        return {"schema": 1, "ok": True}

    def _chart_payload(chart) -> dict:
        return {
            "schema": 1,
            "xSpace": chart.x_space,
            "ySpace": chart.y_space,
            "scope": chart.scope,
            "scale": chart.scale,
            "gridSize": chart.grid_size,
            "cells": chart.cells.tolist(),
            "xHist": chart.x_hist.tolist(),
            "yHist": chart.y_hist.tolist(),
            "includedCount": chart.included_count,
            "excludedCount": chart.excluded_count,
            "sampleMeta": {
                "sampled": chart.sampled,
                "population": chart.population,
            },
        }

    @app.get("/api/distances")
    def distances(
        y: str = Query("topo", pattern="^(topo|feature)$"),
        scope: str = "all",
        scale: str = Query("linear", pattern="^(linear|log)$"),
        connectivity: str = Query("any", pattern="^(connected|unconnected|any)$"),
        prediction: str = Query("any", pattern="^(FP|FN|TP|TN|any)$"),
        session: str = DEFAULT_SESSION,
    ):
        session_or_404(session)
        try:
            chart = workspace.distance_chart(
                session, scope=scope, y_space=y, scale=scale,
                connectivity=connectivity, prediction=prediction,
            )
        except (ValueError, IndexError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        return _chart_payload(chart)

    @app.post("/api/distances/brush")
    def brush(body: dict = Body(...)):
        from .distances import brush_pairs

        session = body.get("session", DEFAULT_SESSION)
        session_or_404(session)
        region = body.get("region")
        if not region or len(region) != 4:
            raise HTTPException(status_code=400, detail="region must be [x0, x1, y0, y1]")
        try:
            chart = workspace.distance_chart(
                session,
                scope=body.get("scope", "all"),
                y_space=body.get("y", "topo"),
                scale=body.get("scale", "linear"),
                connectivity=body.get("connectivity", "any"),
                prediction=body.get("prediction", "any"),
            )
            pairs, xs, ys = brush_pairs(chart, tuple(float(v) for v in region))
        except (ValueError, IndexError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        return {
            "schema": 1,
            "pairs": pairs.tolist(),
            "x": xs.tolist(),
            "y": ys.tolist(),
        }

    @app.get("/api/node/{node_id}/recommendations")
    def recommend(node_id: int, top: int = 5):
        graph = workspace.dataset.graph
        if not 0 <= node_id < graph.n_nodes:
            raise HTTPException(status_code=404, detail=f"unknown node {node_id}")
        try:
            recs = workspace.recommend(node_id, top=top)
        except WorkspaceError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        return {
            "schema": 1,
            "node": node_id,
            "recommendations": [
                {"node": v, "latentDistance": d, "label": graph.display_label(v)}
                for v, d in recs
            ],
        }

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=Path(ui_dir), html=True), name="ui")

    return app

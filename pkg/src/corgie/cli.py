"""Command-line interface: validate, precompute, serve, layout, bench."""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click
import numpy as np

from .model import DatasetError, load_dataset, validate
from .neighborhoods import partition_for_focus
from .layout_khop import compute_khop_layout, layout_to_dict
from .service import Workspace, WorkspaceError


def _load_focus_file(path: str) -> list[np.ndarray]:
    doc = json.loads(Path(path).read_text())
    groups = doc["focalGroups"] if isinstance(doc, dict) else doc
    return [np.asarray(g, dtype=np.int64) for g in groups]


def _echo_timings(timings: dict[str, float]) -> None:
    width = max(len(k) for k in timings)
    for name, seconds in timings.items():
        click.echo(f"  {name:<{width}}  {seconds:8.3f} s")


@click.group()
def main():
    """Correspond a graph to its node embedding: preprocessing, K-hop
    layouts, and the HTTP API serving them."""


@main.command("validate")
@click.argument("dataset_dir", type=click.Path(exists=True, file_okay=False))
def validate_cmd(dataset_dir):
    """Load a dataset directory and report every diagnostic."""
    try:
        ds = load_dataset(dataset_dir)
    except DatasetError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    diagnostics = validate(ds.graph, ds.features, ds.embedding, ds.predictions)
    for d in diagnostics:
        click.echo(str(d))
    if any(d.severity == "error" for d in diagnostics):
        sys.exit(1)
    click.echo(
        f"ok: {ds.graph.n_nodes} nodes, {ds.graph.n_edges} edges, "
        f"{len(ds.graph.node_types)} node type(s), embedding dim {ds.embedding.dim}"
    )


@main.command()
@click.argument("dataset_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--k", default=2, show_default=True, help="neighborhood depth (1..3)")
@click.option("--seed", default=7, show_default=True)
@click.option("--cache-dir", default=None, type=click.Path(file_okay=False))
@click.option("--force", is_flag=True, help="recompute even on cache hits")
def precompute(dataset_dir, k, seed, cache_dir, force):
    """Run the preprocessing pipeline and cache every artifact."""
    try:
        ws = Workspace(dataset_dir, k=k, seed=seed, cache_dir=cache_dir)
        report = ws.precompute(force=force)
    except (DatasetError, WorkspaceError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    for name, status in report["artifacts"].items():
        click.echo(f"{name}: {status}")
    _echo_timings(report["timings"])


@main.command()
@click.argument("dataset_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8080, show_default=True)
@click.option("--k", default=2, show_default=True)
@click.option("--seed", default=7, show_default=True)
@click.option("--cache-dir", default=None, type=click.Path(file_okay=False))
@click.option("--ui", "ui_dir", default=None, type=click.Path(exists=True, file_okay=False),
              help="directory with the built web UI (index.html + dist/)")
def serve(dataset_dir, host, port, k, seed, cache_dir, ui_dir):
    """Precompute, then serve the HTTP API (and optionally the web UI)."""
    import uvicorn

    from .server import create_app

    try:
        ws = Workspace(dataset_dir, k=k, seed=seed, cache_dir=cache_dir)
        ws.precompute()
    except (DatasetError, WorkspaceError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    uvicorn.run(create_app(ws, ui_dir=ui_dir), host=host, port=port, log_level="info")


@main.command()
@click.argument("dataset_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--focus", "focus_file", required=True, type=click.Path(exists=True, dir_okay=False),
              help="JSON file with focal groups: {\"focalGroups\": [[ids...], ...]}")
@click.option("--k", default=2, show_default=True)
@click.option("--seed", default=7, show_default=True)
@click.option("--distance-mode", type=click.Choice(["global", "local"]), default="global", show_default=True)
@click.option("--bundle", is_flag=True, help="bundle edges in the output polylines")
@click.option("--sequential", is_flag=True, help="force sequential per-box layout")
@click.option("--timings", is_flag=True, help="print the per-step timing breakdown")
@click.option("--out", default=None, type=click.Path(dir_okay=False), help="output file (default stdout)")
def layout(dataset_dir, focus_file, k, seed, distance_mode, bundle, sequential, timings, out):
    """Headless K-hop layout for benchmarking and golden tests."""
    from .neighborhoods import build_hop_index

    try:
        ds = load_dataset(dataset_dir)
    except DatasetError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    focal_groups = _load_focus_file(focus_file)

    t0 = time.perf_counter()
    hop_index = build_hop_index(ds.graph, k)
    assignment = partition_for_focus(ds.graph, focal_groups, k)
    divide_seconds = time.perf_counter() - t0

    result = compute_khop_layout(
        ds.graph,
        assignment,
        hop_index,
        distance_mode=distance_mode,
        seed=seed,
        bundle=bundle,
        parallel=not sequential,
    )
    doc = layout_to_dict(result, include_timings=False)
    text = json.dumps(doc, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)
    if timings:
        breakdown = {"divide": divide_seconds, **result.timings}
        breakdown["total"] = divide_seconds + result.timings["total"]
        _echo_timings(breakdown)


@main.command()
@click.argument("dataset_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--focus", "focus_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--k", default=2, show_default=True)
@click.option("--seed", default=7, show_default=True)
@click.option("--distance-mode", type=click.Choice(["global", "local"]), default="global", show_default=True)
@click.option("--bundle", is_flag=True)
@click.option("--json", "as_json", is_flag=True, help="emit the row as JSON")
def bench(dataset_dir, focus_file, k, seed, distance_mode, bundle, as_json):
    """K-hop layout benchmark row: sizes, box stats, DR and total seconds."""
    from .neighborhoods import build_hop_index

    try:
        ds = load_dataset(dataset_dir)
    except DatasetError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    focal_groups = _load_focus_file(focus_file)

    t0 = time.perf_counter()
    hop_index = build_hop_index(ds.graph, k)
    assignment = partition_for_focus(ds.graph, focal_groups, k)
    divide_seconds = time.perf_counter() - t0

    result = compute_khop_layout(
        ds.graph, assignment, hop_index,
        distance_mode=distance_mode, seed=seed, bundle=bundle,
    )
    row = {
        "n": ds.graph.n_nodes,
        "e": ds.graph.n_edges,
        "nKhop": int(len(result.kept_nodes)),
        "eKhop": int(len(result.edges)),
        "maxBox": max(len(b.node_ids) for b in result.boxes),
        "b": len(result.boxes),
        "drSeconds": result.timings["layout"],
        "totalSeconds": divide_seconds + result.timings["total"],
        "steps": {"divide": divide_seconds, **result.timings},
    }
    if as_json:
        click.echo(json.dumps(row))
    else:
        click.echo(
            f"N={row['n']} E={row['e']} N_khop={row['nKhop']} E_khop={row['eKhop']} "
            f"N_box={row['maxBox']} B={row['b']} "
            f"DR={row['drSeconds']:.2f}s total={row['totalSeconds']:.2f}s"
        )


if __name__ == "__main__":
    main()

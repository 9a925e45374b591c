"""Load a dataset directory and inspect what came in.

Generates a synthetic bipartite recommendation dataset, writes it out in
the on-disk format, loads it back, and runs the validator.
"""

import tempfile
from pathlib import Path

from corgie import load_dataset, serialize_dataset, validate
from corgie.datasets import movie_like

workdir = Path(tempfile.mkdtemp(prefix="corgie-demo-"))
serialize_dataset(movie_like(n_users=120, n_movies=60, n_clusters=4, seed=5), workdir)
print(f"dataset written to {workdir}")
print(sorted(p.name for p in workdir.iterdir()))

ds = load_dataset(workdir)
graph = ds.graph
print(f"\n{graph.n_nodes} nodes, {graph.n_edges} edges, types {graph.node_types}")
print(f"dense features: {ds.features.dense_names}")
print(f"embedding: {ds.embedding.n_nodes} x {ds.embedding.dim}")
print(f"predictions: {ds.predictions.kind}, {len(ds.predictions.predicted_pairs)} pairs")

diagnostics = validate(graph, ds.features, ds.embedding, ds.predictions)
print(f"\nvalidation: {'clean' if not diagnostics else diagnostics}")

# per-type feature masks: user columns are absent for movies, not zero
user_mask = ds.features.dense_mask[graph.node_types.index("user")]
movie_mask = ds.features.dense_mask[graph.node_types.index("movie")]
for name, u, m in zip(ds.features.dense_names, user_mask, movie_mask):
    print(f"  {name:>16}: user={'y' if u else '-'} movie={'y' if m else '-'}")

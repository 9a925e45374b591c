"""Latent projection, positional rainbow colors, and neighbor blocks.

The embedding is projected to the unit square; each node gets a color from
the position (CIELAB a/b ramp), and an 8x8 grid of blocks shows where each
block's members have their hop-1 neighbors (nested 8x8 cell counts).

Writes demos/output/latent_views.png when matplotlib is available.
"""

from pathlib import Path

import numpy as np

from corgie import build_hop_index, neighbor_blocks, project_latent
from corgie.datasets import cora_like
from corgie.latent import position_colors_hex

ds = cora_like(n_nodes=600, n_sparse=200, seed=11)
projection = project_latent(ds.embedding, seed=7)
print(f"projection method: {projection.method}, params {projection.params}")

colors = position_colors_hex(projection.positions)
print(f"first colors: {colors[:4]}")

index = build_hop_index(ds.graph, k=1)
hop1 = [hops[0] for hops in index.hops]
grid = neighbor_blocks(projection.positions, hop1)
print(f"{len(grid.blocks)} occupied blocks of 64; total neighbor references {grid.total_cell_count()}")

# when the origin cell is among the darkest, neighbors in topology stayed
# neighbors in the latent space
dark_origin = 0
for b in grid.blocks:
    occupied = b.cells[b.cells > 0]
    if len(occupied) and b.cells[b.row, b.col] >= np.median(occupied):
        dark_origin += 1
print(f"blocks whose own (origin) cell is darker than the median occupied cell: {dark_origin}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit("matplotlib not installed; skipping the figure")

fig, axes = plt.subplots(1, 2, figsize=(11, 5))
axes[0].scatter(*projection.positions.T, c=colors, s=8)
axes[0].set_title("latent projection, positional rainbow")
for b in grid.blocks:
    cells = np.asarray(b.cells, dtype=float)
    top = cells.max() or 1.0
    axes[1].imshow(
        1.0 - cells / top, cmap="gray", vmin=0, vmax=1,
        extent=(b.col + 0.02, b.col + 0.98, b.row + 0.98, b.row + 0.02),
    )
axes[1].set_xlim(0, 8), axes[1].set_ylim(8, 0)
axes[1].set_title("latent neighbor blocks (hop-1)")
out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)
fig.savefig(out / "latent_views.png", dpi=110, bbox_inches="tight")
print(f"wrote {out / 'latent_views.png'}")

"""Latent-space views: the 2D projection, the positional rainbow colormap,
and the neighbor-block aggregation grid.

The rainbow colormap fixes CIELAB lightness and maps unit-square x to the
``a`` channel and y to the ``b`` channel, so nearby projected nodes receive
similar colors.  The neighbor-block grid partitions the projection into an
8x8 grid of blocks and nests, inside each occupied block, a full-space 8x8
cell grid counting where the block members' hop-1 neighbors land.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .embed2d import (
    MIN_POINTS_FOR_DR,
    EmbedParams,
    embed_vectors,
    pca_2d,
)
from .model import Embedding

GRID_SIZE = 8
LAB_LIGHTNESS = 60.0
LAB_RANGE = 80.0  # a and b sweep [-80, 80] across the unit square


@dataclass
class Projection2D:
    """Unit-square 2D positions with the provenance needed to reproduce them."""

    positions: np.ndarray
    method: str
    params: dict
    seed: int
    diagnostics: list[str] = field(default_factory=list)


def project_latent(
    embedding: Embedding,
    params: EmbedParams | None = None,
    seed: int = 0,
) -> Projection2D:
    """Neighborhood-preserving 2D projection of the embedding vectors under
    the cosine metric; small inputs fall back to a linear projection."""
    params = params or EmbedParams()
    n = embedding.n_nodes
    if n < 2:
        raise ValueError("projection needs at least 2 nodes")
    if n < MIN_POINTS_FOR_DR:
        positions = pca_2d(embedding.vectors)
        return Projection2D(
            positions=positions,
            method="pca",
            params=params.to_dict(),
            seed=seed,
            diagnostics=[f"{n} nodes is below the DR minimum {MIN_POINTS_FOR_DR}; used linear projection"],
        )
    positions = embed_vectors(embedding.vectors, params, seed)
    return Projection2D(positions=positions, method="umap", params=params.to_dict(), seed=seed)


# -- positional rainbow ---------------------------------------------------


@dataclass(frozen=True)
class RainbowColor:
    lab: tuple[float, float, float]
    rgb: tuple[float, float, float]

    @property
    def hex(self) -> str:
        r, g, b = (int(round(c * 255)) for c in self.rgb)
        return f"#{r:02x}{g:02x}{b:02x}"


def lab_to_srgb(lab: np.ndarray) -> np.ndarray:
    """CIELAB (D65) to sRGB, vectorized over an (..., 3) array, clamped into gamut."""
    lab = np.asarray(lab, dtype=np.float64)
    l, a, b = lab[..., 0], lab[..., 1], lab[..., 2]
    fy = (l + 16.0) / 116.0
    fx = fy + a / 500.0
    fz = fy - b / 200.0

    delta = 6.0 / 29.0

    def f_inv(t: np.ndarray) -> np.ndarray:
        return np.where(t > delta, t ** 3, 3.0 * delta ** 2 * (t - 4.0 / 29.0))

    x = 0.95047 * f_inv(fx)
    y = 1.00000 * f_inv(fy)
    z = 1.08883 * f_inv(fz)

    r_lin = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z
    g_lin = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z
    b_lin = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z
    lin = np.stack([r_lin, g_lin, b_lin], axis=-1)
    lin = np.clip(lin, 0.0, 1.0)
    srgb = np.where(lin <= 0.0031308, 12.92 * lin, 1.055 * lin ** (1.0 / 2.4) - 0.055)
    return np.clip(srgb, 0.0, 1.0)


def position_lab(positions: np.ndarray) -> np.ndarray:
    """Unit-square positions to Lab rows (fixed L; a from x, b from y)."""
    pos = np.asarray(positions, dtype=np.float64).reshape(-1, 2)
    a = -LAB_RANGE + 2.0 * LAB_RANGE * pos[:, 0]
    b = -LAB_RANGE + 2.0 * LAB_RANGE * pos[:, 1]
    l = np.full(len(pos), LAB_LIGHTNESS)
    return np.stack([l, a, b], axis=1)


def position_color(pos: tuple[float, float] | np.ndarray) -> RainbowColor:
    """Deterministic, continuous color for a point in the unit square."""
    x, y = float(pos[0]), float(pos[1])
    if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
        raise ValueError(f"position {pos} outside the unit square")
    lab = position_lab(np.array([[x, y]]))[0]
    rgb = lab_to_srgb(lab)
    return RainbowColor(lab=tuple(lab), rgb=tuple(rgb))


def position_colors_hex(positions: np.ndarray) -> list[str]:
    rgb = lab_to_srgb(position_lab(positions))
    bytes_ = np.clip(np.round(rgb * 255), 0, 255).astype(int)
    return [f"#{r:02x}{g:02x}{b:02x}" for r, g, b in bytes_]


# -- latent neighbor blocks ------------------------------------------------


@dataclass
class NeighborBlock:
    row: int
    col: int
    member_nodes: np.ndarray
    cells: np.ndarray  # grid_size x grid_size neighbor counts

    @property
    def origin_cell_index(self) -> tuple[int, int]:
        return (self.row, self.col)


@dataclass
class NeighborBlockGrid:
    grid_size: int
    blocks: list[NeighborBlock]

    def total_cell_count(self) -> int:
        return int(sum(block.cells.sum() for block in self.blocks))


def grid_bin(positions: np.ndarray, grid_size: int = GRID_SIZE) -> np.ndarray:
    """Half-open grid bins [i/g, (i+1)/g) per axis with the last bin closed."""
    pos = np.asarray(positions, dtype=np.float64).reshape(-1, 2)
    bins = np.floor(pos * grid_size).astype(np.int64)
    return np.clip(bins, 0, grid_size - 1)


def neighbor_blocks(
    positions: np.ndarray,
    hop1_sets: list[np.ndarray],
    grid_size: int = GRID_SIZE,
) -> NeighborBlockGrid:
    """Bin every node into its block, then count the block members' hop-1
    neighbors in the nested full-space cell grid.  Blocks without member
    nodes are omitted; luminance normalization is left to the consumer."""
    pos = np.asarray(positions, dtype=np.float64).reshape(-1, 2)
    n = len(pos)
    bins = grid_bin(pos, grid_size)  # (col from x, row from y) per node
    cols, rows = bins[:, 0], bins[:, 1]
    block_key = rows * grid_size + cols

    blocks: list[NeighborBlock] = []
    for key in np.unique(block_key):
        members = np.flatnonzero(block_key == key)
        cells = np.zeros((grid_size, grid_size), dtype=np.int64)
        neighbor_ids = (
            np.concatenate([hop1_sets[v] for v in members])
            if len(members)
            else np.zeros(0, dtype=np.int64)
        )
        if len(neighbor_ids):
            nb = grid_bin(pos[neighbor_ids], grid_size)
            np.add.at(cells, (nb[:, 1], nb[:, 0]), 1)
        blocks.append(
            NeighborBlock(row=int(key) // grid_size, col=int(key) % grid_size, member_nodes=members, cells=cells)
        )
    return NeighborBlockGrid(grid_size=grid_size, blocks=blocks)

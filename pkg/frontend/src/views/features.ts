/** Node features view: dense histogram matrix (one column per feature, one
 * row per scope) and sparse strip rows with their per-row legends.
 *
 * Hovered or selected nodes draw black partial distributions on top of the
 * dense histograms.
 */

import type { DisplayList, DrawOp } from "../display.js";
import type { ViewState } from "../state.js";
import type { DatasetPayload, FeaturesPayload } from "../types.js";
import { BACKGROUND, type ViewSize } from "./common.js";

const CELL_W = 86;
const CELL_H = 46;
const GAP = 10;
const LABEL = 14;
const BAR_FILL = "#7aa6c2";
const PARTIAL_FILL = "#111111";

function histogramBars(
  ops: DrawOp[],
  x: number,
  y: number,
  counts: number[],
  maxCount: number,
  fill: string,
): void {
  const bins = counts.length;
  const bw = CELL_W / Math.max(bins, 1);
  counts.forEach((c, i) => {
    if (c <= 0 || maxCount <= 0) return;
    const h = (c / maxCount) * (CELL_H - 4);
    ops.push({ op: "rect", x: x + i * bw, y: y + CELL_H - h, w: Math.max(bw - 1, 1), h, fill });
  });
}

/** Re-bin the active node set against the shared global bin edges. */
export function partialCounts(
  nodes: number[],
  featureIndex: number,
  binEdges: number[],
  dataset: DatasetPayload,
): number[] {
  const bins = Math.max(binEdges.length - 1, 1);
  const counts = new Array(bins).fill(0);
  const lo = binEdges[0];
  const hi = binEdges[binEdges.length - 1];
  const span = hi - lo;
  for (const v of nodes) {
    if (!dataset.denseMask[dataset.types[v]][featureIndex]) continue;
    const value = dataset.denseValues[v][featureIndex];
    if (value < lo || value > hi) continue;
    const b = span > 0 ? Math.min(Math.floor(((value - lo) / span) * bins), bins - 1) : 0;
    counts[b] += 1;
  }
  return counts;
}

export function buildFeaturesView(
  features: FeaturesPayload,
  dataset: DatasetPayload,
  state: ViewState,
  size: ViewSize,
): DisplayList {
  const base: DrawOp[] = [{ op: "clear", color: BACKGROUND }];
  const overlay: DrawOp[] = [];
  const active = Array.from(new Set([...state.hoverNodes, ...state.selection]));

  features.dense.forEach((row, ri) => {
    const y = LABEL + ri * (CELL_H + GAP);
    base.push({ op: "text", x: 2, y: y + CELL_H / 2, text: row.scope, fill: "#444444", size: 10 });
    row.histograms.forEach((hist, fi) => {
      const x = 46 + fi * (CELL_W + GAP);
      if (ri === 0) {
        base.push({ op: "text", x, y: LABEL - 4, text: hist.feature, fill: "#444444", size: 10 });
      }
      base.push({ op: "rect", x, y, w: CELL_W, h: CELL_H, stroke: "#dddddd", lineWidth: 1 });
      const maxCount = Math.max(...hist.counts, 1);
      histogramBars(base, x, y, hist.counts, maxCount, BAR_FILL);
      if (active.length) {
        const partial = partialCounts(active, fi, hist.binEdges, dataset);
        histogramBars(overlay, x, y, partial, maxCount, PARTIAL_FILL);
      }
    });
  });

  const denseRows = features.dense.length;
  features.sparse.forEach((row, ri) => {
    const y = LABEL + denseRows * (CELL_H + GAP) + ri * 26;
    base.push({ op: "text", x: 2, y: y + 10, text: row.scope, fill: "#444444", size: 10 });
    const stripX = 46;
    const stripW = Math.max(size.width - stripX - 70, 60);
    const pw = stripW / Math.max(row.strip.length, 1);
    row.strip.forEach((value, i) => {
      const t = row.rowMax > 0 ? value / row.rowMax : 0;
      const lum = Math.round(255 * (1 - t));
      const hexl = lum.toString(16).padStart(2, "0");
      base.push({ op: "rect", x: stripX + i * pw, y, w: Math.max(pw, 1), h: 16, fill: `#${hexl}${hexl}${hexl}` });
    });
    // luminance is normalized per row, so each row carries its own legend
    base.push({
      op: "text",
      x: stripX + stripW + 6,
      y: y + 12,
      text: `max ${row.rowMax.toFixed(0)}`,
      fill: "#888888",
      size: 9,
    });
  });

  return { view: "features", base, overlay };
}

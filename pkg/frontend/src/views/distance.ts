/** Distance comparison view: one chart per scope, each a gridded scatter
 * (latent on x, topology or feature on y) with marginal histograms.
 */

import type { DisplayList, DrawOp } from "../display.js";
import type { ViewState } from "../state.js";
import type { DistanceChartPayload } from "../types.js";
import { BACKGROUND, type ViewSize } from "./common.js";

const CHART = 150;
const MARGIN = 34;
const HIST = 26;

export interface BrushRect {
  x0: number;
  x1: number;
  y0: number;
  y1: number;
}

export function chartOrigin(index: number): [number, number] {
  return [MARGIN + index * (CHART + HIST + MARGIN), MARGIN + HIST];
}

/** Map a mouse position inside chart `index` to distance space, or null. */
export function chartPoint(
  index: number,
  sx: number,
  sy: number,
): [number, number] | null {
  const [ox, oy] = chartOrigin(index);
  const x = (sx - ox) / CHART;
  const y = 1 - (sy - oy) / CHART;
  if (x < 0 || x > 1 || y < 0 || y > 1) return null;
  return [x, y];
}

export function buildDistanceView(
  charts: DistanceChartPayload[],
  state: ViewState,
  brush: BrushRect | null,
  size: ViewSize,
): DisplayList {
  const base: DrawOp[] = [{ op: "clear", color: BACKGROUND }];
  const overlay: DrawOp[] = [];

  charts.forEach((chart, ci) => {
    const [ox, oy] = chartOrigin(ci);
    const grid = chart.gridSize;
    const cell = CHART / grid;
    let top = 0;
    for (const row of chart.cells) for (const c of row) top = Math.max(top, c);
    for (let r = 0; r < grid; r += 1) {
      for (let c = 0; c < grid; c += 1) {
        const count = chart.cells[r][c];
        if (count <= 0) continue;
        const t = top > 0 ? Math.sqrt(count / top) : 0;
        const lum = Math.round(255 * (1 - t));
        const hexl = lum.toString(16).padStart(2, "0");
        base.push({
          op: "rect",
          x: ox + c * cell,
          y: oy + (grid - 1 - r) * cell, // y axis grows upward in distance space
          w: cell,
          h: cell,
          fill: `#${hexl}${hexl}${hexl}`,
        });
      }
    }
    base.push({ op: "rect", x: ox, y: oy, w: CHART, h: CHART, stroke: "#999999", lineWidth: 1 });
    base.push({
      op: "text",
      x: ox,
      y: oy - HIST - 6,
      text: `${chart.scope}${chart.sampleMeta.sampled ? " (sampled)" : ""}`,
      fill: "#444444",
      size: 10,
    });

    // marginal histograms: x above, y to the right
    const xMax = Math.max(...chart.xHist, 1);
    chart.xHist.forEach((c, i) => {
      const h = (c / xMax) * HIST;
      const bw = CHART / chart.xHist.length;
      base.push({ op: "rect", x: ox + i * bw, y: oy - h - 2, w: bw - 1, h, fill: "#7aa6c2" });
    });
    const yMax = Math.max(...chart.yHist, 1);
    chart.yHist.forEach((c, i) => {
      const w = (c / yMax) * HIST;
      const bh = CHART / chart.yHist.length;
      base.push({
        op: "rect",
        x: ox + CHART + 2,
        y: oy + CHART - (i + 1) * bh,
        w,
        h: bh - 1,
        fill: "#7aa6c2",
      });
    });

    base.push({
      op: "text",
      x: ox + CHART / 2 - 30,
      y: oy + CHART + 14,
      text: "latent distance",
      fill: "#666666",
      size: 9,
    });
    base.push({
      op: "text",
      x: ox - 6,
      y: oy - 4,
      text: chart.ySpace,
      fill: "#666666",
      size: 9,
    });
  });

  if (brush) {
    const [ox, oy] = chartOrigin(0);
    const x = ox + brush.x0 * CHART;
    const y = oy + (1 - brush.y1) * CHART;
    overlay.push({
      op: "rect",
      x,
      y,
      w: (brush.x1 - brush.x0) * CHART,
      h: (brush.y1 - brush.y0) * CHART,
      stroke: "#d62728",
      lineWidth: 1.5,
    });
  }
  return { view: "distance", base, overlay };
}

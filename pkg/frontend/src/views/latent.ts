/** Latent space view: projected scatterplot with the positional rainbow
 * background (in latentPosition color mode), focal-group outlines, and the
 * hover/select overlay.
 */

import type { DisplayList, DrawOp } from "../display.js";
import { positionColor, type NodeShape } from "../encoding.js";
import type { ViewState } from "../state.js";
import type { LatentPayload } from "../types.js";
import {
  BACKGROUND,
  DESATURATE_MASK,
  HIGHLIGHT_STROKE,
  NODE_RADIUS,
  project,
  type ViewSize,
} from "./common.js";

const RAINBOW_CELLS = 24;

export function buildLatentView(
  latent: LatentPayload,
  focalGroups: number[][],
  colors: string[],
  shapes: NodeShape[],
  state: ViewState,
  size: ViewSize,
): DisplayList {
  const camera = state.cameras.latent;
  const base: DrawOp[] = [{ op: "clear", color: BACKGROUND }];

  if (state.colorMode === "latentPosition") {
    // rainbow reference for positions within the latent space
    for (let row = 0; row < RAINBOW_CELLS; row += 1) {
      for (let col = 0; col < RAINBOW_CELLS; col += 1) {
        const [x0, y0] = project(col / RAINBOW_CELLS, row / RAINBOW_CELLS, camera, size);
        const [x1, y1] = project((col + 1) / RAINBOW_CELLS, (row + 1) / RAINBOW_CELLS, camera, size);
        base.push({
          op: "rect",
          x: x0,
          y: y0,
          w: x1 - x0,
          h: y1 - y0,
          fill: positionColor((col + 0.5) / RAINBOW_CELLS, (row + 0.5) / RAINBOW_CELLS),
        });
      }
    }
    base.push({ op: "mask", color: "rgba(255,255,255,0.72)" });
  }

  latent.positions.forEach(([x, y], v) => {
    const [sx, sy] = project(x, y, camera, size);
    base.push({ op: "glyph", shape: shapes[v], x: sx, y: sy, r: NODE_RADIUS, fill: colors[v] });
  });

  // focal groups are outlined and labelled in the latent view too
  focalGroups.forEach((group, gi) => {
    if (!group.length) return;
    let lo = [Infinity, Infinity];
    let hi = [-Infinity, -Infinity];
    for (const v of group) {
      const [x, y] = latent.positions[v];
      lo = [Math.min(lo[0], x), Math.min(lo[1], y)];
      hi = [Math.max(hi[0], x), Math.max(hi[1], y)];
    }
    const [x0, y0] = project(lo[0], lo[1], camera, size);
    const [x1, y1] = project(hi[0], hi[1], camera, size);
    base.push({
      op: "rect",
      x: x0 - 4,
      y: y0 - 4,
      w: x1 - x0 + 8,
      h: y1 - y0 + 8,
      stroke: "#333333",
      lineWidth: 1.5,
    });
    base.push({ op: "text", x: x0 - 4, y: y0 - 8, text: `foc-${gi}`, fill: "#333333", size: 11 });
  });

  const overlay: DrawOp[] = [];
  const active = new Set([...state.hoverNodes, ...state.selection]);
  if (active.size) {
    overlay.push({ op: "mask", color: DESATURATE_MASK });
    for (const v of active) {
      const [x, y] = latent.positions[v];
      const [sx, sy] = project(x, y, camera, size);
      overlay.push({
        op: "glyph",
        shape: shapes[v],
        x: sx,
        y: sy,
        r: NODE_RADIUS + 1,
        fill: colors[v],
        stroke: HIGHLIGHT_STROKE,
        lineWidth: 1.5,
      });
    }
  }
  return { view: "latent", base, overlay };
}

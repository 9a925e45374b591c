/** Global topology view: the whole graph's force-directed layout. */

import type { DisplayList, DrawOp } from "../display.js";
import type { NodeShape } from "../encoding.js";
import type { ViewState } from "../state.js";
import type { DatasetPayload, GlobalLayoutPayload } from "../types.js";
import {
  BACKGROUND,
  DESATURATE_MASK,
  EDGE_COLOR,
  HIGHLIGHT_STROKE,
  NODE_RADIUS,
  project,
  type ViewSize,
} from "./common.js";

export function buildGlobalTopoView(
  dataset: DatasetPayload,
  layout: GlobalLayoutPayload,
  colors: string[],
  shapes: NodeShape[],
  state: ViewState,
  size: ViewSize,
): DisplayList {
  const camera = state.cameras.globalTopo;
  const base: DrawOp[] = [{ op: "clear", color: BACKGROUND }];
  const screen = layout.positions.map(([x, y]) => project(x, y, camera, size));

  for (const [a, b] of dataset.edges) {
    base.push({ op: "line", points: [screen[a], screen[b]], stroke: EDGE_COLOR, lineWidth: 0.5 });
  }
  screen.forEach(([sx, sy], v) => {
    base.push({ op: "glyph", shape: shapes[v], x: sx, y: sy, r: NODE_RADIUS, fill: colors[v] });
  });

  const overlay: DrawOp[] = [];
  const active = new Set([...state.hoverNodes, ...state.selection]);
  if (active.size) {
    overlay.push({ op: "mask", color: DESATURATE_MASK });
    // activated edges: both endpoints highlighted
    for (const [a, b] of dataset.edges) {
      if (active.has(a) && active.has(b)) {
        overlay.push({ op: "line", points: [screen[a], screen[b]], stroke: "#666666", lineWidth: 1.2 });
      }
    }
    for (const v of active) {
      const [sx, sy] = screen[v];
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
  for (const [a, b] of state.hoverPairs) {
    overlay.push({ op: "line", points: [screen[a], screen[b]], stroke: "#d62728", lineWidth: 1.5 });
  }
  return { view: "globalTopo", base, overlay };
}

/** K-hop topology view: focal and hop boxes with their laid-out members.
 *
 * While a focus job runs, only this view shows a spinner; the rest of the
 * interface stays live on the previous payloads.
 */

import type { DisplayList, DrawOp } from "../display.js";
import type { NodeShape } from "../encoding.js";
import type { ViewState } from "../state.js";
import type { KhopLayoutPayload } from "../types.js";
import {
  BACKGROUND,
  DESATURATE_MASK,
  EDGE_COLOR,
  HIGHLIGHT_STROKE,
  NODE_RADIUS,
  project,
  type ViewSize,
} from "./common.js";

export function buildKhopView(
  khop: KhopLayoutPayload | null,
  colors: string[],
  shapes: NodeShape[],
  state: ViewState,
  size: ViewSize,
): DisplayList {
  const base: DrawOp[] = [{ op: "clear", color: BACKGROUND }];
  const overlay: DrawOp[] = [];
  if (state.khopPending) {
    base.push({
      op: "spinner",
      x: size.width / 2 - 50,
      y: size.height / 2,
      label: "computing K-hop layout...",
    });
    return { view: "khop", base, overlay };
  }
  if (!khop) {
    base.push({
      op: "text",
      x: 16,
      y: size.height / 2,
      text: "focus nodes to compute their K-hop layout",
      fill: "#888888",
      size: 12,
    });
    return { view: "khop", base, overlay };
  }

  const camera = state.cameras.khop;
  const position = new Map<number, [number, number]>();
  for (const [v, x, y] of khop.positions) {
    position.set(v, project(x, y, camera, size));
  }

  for (const line of khop.polylines) {
    base.push({
      op: "line",
      points: line.map(([x, y]) => project(x, y, camera, size)),
      stroke: EDGE_COLOR,
      lineWidth: 0.5,
    });
  }
  for (const box of khop.boxes) {
    const [x, y, w, h] = box.rect;
    const [x0, y0] = project(x, y, camera, size);
    const [x1, y1] = project(x + w, y + h, camera, size);
    base.push({ op: "rect", x: x0, y: y0, w: x1 - x0, h: y1 - y0, stroke: "#555555", lineWidth: 1 });
    base.push({ op: "text", x: x0, y: y0 - 4, text: box.group, fill: "#555555", size: 11 });
    for (const v of box.nodes) {
      const p = position.get(v);
      if (!p) continue;
      base.push({ op: "glyph", shape: shapes[v], x: p[0], y: p[1], r: NODE_RADIUS, fill: colors[v] });
    }
  }

  const active = new Set([...state.hoverNodes, ...state.selection]);
  if (active.size) {
    overlay.push({ op: "mask", color: DESATURATE_MASK });
    for (const [a, b] of khop.edges) {
      if (active.has(a) && active.has(b)) {
        const pa = position.get(a);
        const pb = position.get(b);
        if (pa && pb) overlay.push({ op: "line", points: [pa, pb], stroke: "#666666", lineWidth: 1.2 });
      }
    }
    for (const v of active) {
      const p = position.get(v);
      if (!p) continue;
      overlay.push({
        op: "glyph",
        shape: shapes[v],
        x: p[0],
        y: p[1],
        r: NODE_RADIUS + 1,
        fill: colors[v],
        stroke: HIGHLIGHT_STROKE,
        lineWidth: 1.5,
      });
    }
  }
  for (const [a, b] of state.hoverPairs) {
    const pa = position.get(a);
    const pb = position.get(b);
    if (pa && pb) overlay.push({ op: "line", points: [pa, pb], stroke: "#d62728", lineWidth: 1.5 });
  }
  return { view: "khop", base, overlay };
}

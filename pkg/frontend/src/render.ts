/** One frame batch: every view's display list built from the same payloads
 * and view state, with node encodings computed once and shared, so color
 * mode changes update all views together and replaying a recorded state
 * reproduces identical display lists.
 */

import type { DisplayList } from "./display.js";
import { nodeColors, nodeShapes } from "./encoding.js";
import type { ViewName, ViewState } from "./state.js";
import type { Payloads } from "./types.js";
import { buildBlocksView } from "./views/blocks.js";
import type { ViewSize } from "./views/common.js";
import { buildDistanceView, type BrushRect } from "./views/distance.js";
import { buildFeaturesView } from "./views/features.js";
import { buildGlobalTopoView } from "./views/globalTopo.js";
import { buildKhopView } from "./views/khop.js";
import { buildLatentView } from "./views/latent.js";

export interface Frame {
  lists: Record<ViewName, DisplayList>;
  colors: string[];
}

export const DEFAULT_SIZES: Record<ViewName, ViewSize> = {
  latent: { width: 420, height: 420 },
  globalTopo: { width: 420, height: 420 },
  khop: { width: 640, height: 420 },
  features: { width: 760, height: 300 },
  blocks: { width: 360, height: 360 },
  distance: { width: 760, height: 260 },
};

export function renderViews(
  payloads: Payloads,
  state: ViewState,
  sizes: Record<ViewName, ViewSize> = DEFAULT_SIZES,
  brush: BrushRect | null = null,
): Frame {
  const colors = nodeColors(state.colorMode, state.colorFeature, payloads.dataset, payloads.latent);
  const shapes = nodeShapes(payloads.dataset);
  const lists: Record<ViewName, DisplayList> = {
    latent: buildLatentView(payloads.latent, payloads.focalGroups, colors, shapes, state, sizes.latent),
    globalTopo: buildGlobalTopoView(
      payloads.dataset, payloads.globalLayout, colors, shapes, state, sizes.globalTopo,
    ),
    khop: buildKhopView(payloads.khop, colors, shapes, state, sizes.khop),
    features: buildFeaturesView(payloads.features, payloads.dataset, state, sizes.features),
    blocks: buildBlocksView(payloads.latent, state, sizes.blocks),
    distance: buildDistanceView(payloads.distances, state, brush, sizes.distance),
  };
  return { lists, colors };
}

/** Colors a view actually drew for each node id: the cross-view encoding
 * consistency probe used by tests. */
export function drawnNodeColors(list: DisplayList, positionsOf: Map<number, [number, number]>): Map<number, string> {
  const out = new Map<number, string>();
  const keyed = new Map<string, number>();
  for (const [v, [x, y]] of positionsOf) {
    keyed.set(`${x.toFixed(3)},${y.toFixed(3)}`, v);
  }
  for (const op of list.base) {
    if (op.op !== "glyph" || !op.fill) continue;
    const v = keyed.get(`${op.x.toFixed(3)},${op.y.toFixed(3)}`);
    if (v !== undefined) out.set(v, op.fill);
  }
  return out;
}

/** View state and its pure reducer.
 *
 * Interactions go light to heavy: hover (transient), select (persistent,
 * enables the focus menu), focus (dispatched to the server; tracked here
 * only as the pending flag and the focal groups echoed back).
 */

import type { ColorMode } from "./encoding.js";

export const VIEW_NAMES = [
  "latent",
  "globalTopo",
  "khop",
  "features",
  "blocks",
  "distance",
] as const;

export type ViewName = (typeof VIEW_NAMES)[number];

export interface Camera {
  x: number;
  y: number;
  scale: number;
}

export interface ViewState {
  cameras: Record<ViewName, Camera>;
  hoverNodes: number[];
  hoverPairs: [number, number][];
  selection: number[];
  focusMenuVisible: boolean;
  colorMode: ColorMode;
  colorFeature: number | null;
  bundling: boolean;
  distanceMode: "local" | "global";
  distanceTab: "topo" | "feature";
  hoverExtendsToNeighbors: number;
  khopPending: boolean;
}

export type Action =
  | { type: "hover"; nodes: number[]; pairs?: [number, number][] }
  | { type: "clearHover" }
  | { type: "select"; nodes: number[]; additive?: boolean }
  | { type: "clearSelection" }
  | { type: "setColorMode"; mode: ColorMode; feature?: number | null }
  | { type: "setBundling"; enabled: boolean }
  | { type: "setDistanceMode"; mode: "local" | "global" }
  | { type: "setDistanceTab"; tab: "topo" | "feature" }
  | { type: "setHoverDepth"; depth: number }
  | { type: "khopPending"; pending: boolean }
  | { type: "pan"; view: ViewName; dx: number; dy: number }
  | { type: "zoom"; view: ViewName; factor: number; cx: number; cy: number };

export function initialViewState(): ViewState {
  const cameras = {} as Record<ViewName, Camera>;
  for (const view of VIEW_NAMES) cameras[view] = { x: 0, y: 0, scale: 1 };
  return {
    cameras,
    hoverNodes: [],
    hoverPairs: [],
    selection: [],
    focusMenuVisible: false,
    colorMode: "latentPosition",
    colorFeature: null,
    bundling: false,
    distanceMode: "global",
    distanceTab: "topo",
    hoverExtendsToNeighbors: 0,
    khopPending: false,
  };
}

export function reduce(state: ViewState, action: Action): ViewState {
  switch (action.type) {
    case "hover":
      return { ...state, hoverNodes: action.nodes.slice(), hoverPairs: (action.pairs ?? []).slice() };
    case "clearHover":
      return { ...state, hoverNodes: [], hoverPairs: [] };
    case "select": {
      const merged = action.additive
        ? Array.from(new Set([...state.selection, ...action.nodes]))
        : Array.from(new Set(action.nodes));
      merged.sort((a, b) => a - b);
      // the focus menu appears only after nodes are selected
      return { ...state, selection: merged, focusMenuVisible: merged.length > 0 };
    }
    case "clearSelection":
      return { ...state, selection: [], focusMenuVisible: false };
    case "setColorMode":
      return { ...state, colorMode: action.mode, colorFeature: action.feature ?? null };
    case "setBundling":
      return { ...state, bundling: action.enabled };
    case "setDistanceMode":
      return { ...state, distanceMode: action.mode };
    case "setDistanceTab":
      return { ...state, distanceTab: action.tab };
    case "setHoverDepth":
      return { ...state, hoverExtendsToNeighbors: Math.max(0, Math.min(3, action.depth)) };
    case "khopPending":
      return { ...state, khopPending: action.pending };
    case "pan": {
      const cam = state.cameras[action.view];
      return {
        ...state,
        cameras: {
          ...state.cameras,
          [action.view]: { ...cam, x: cam.x + action.dx, y: cam.y + action.dy },
        },
      };
    }
    case "zoom": {
      const cam = state.cameras[action.view];
      const scale = Math.min(16, Math.max(0.25, cam.scale * action.factor));
      const k = scale / cam.scale;
      return {
        ...state,
        cameras: {
          ...state.cameras,
          [action.view]: {
            scale,
            x: action.cx - k * (action.cx - cam.x),
            y: action.cy - k * (action.cy - cam.y),
          },
        },
      };
    }
  }
}

/** Nodes to highlight for a hover/select target, optionally extended to
 * topological neighbors up to the configured depth. */
export function extendToNeighbors(
  nodes: number[],
  depth: number,
  edges: [number, number][],
  nNodes: number,
): number[] {
  if (depth <= 0 || nodes.length === 0) return nodes.slice();
  const adjacency: number[][] = Array.from({ length: nNodes }, () => []);
  for (const [a, b] of edges) {
    adjacency[a].push(b);
    adjacency[b].push(a);
  }
  const seen = new Set(nodes);
  let frontier = nodes.slice();
  for (let h = 0; h < depth; h += 1) {
    const next: number[] = [];
    for (const v of frontier) {
      for (const u of adjacency[v]) {
        if (!seen.has(u)) {
          seen.add(u);
          next.push(u);
        }
      }
    }
    frontier = next;
  }
  return Array.from(seen).sort((a, b) => a - b);
}

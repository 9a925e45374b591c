/** Application shell: owns payloads, view state, the API client and layout
 * poller, and redraws every view in one batch on each change.
 *
 * All rendering goes through renderViews (pure); this class only wires
 * canvases, mouse events, and the async focus flow together.
 */

import { ApiClient, LayoutPoller } from "./api.js";
import { executeOps } from "./display.js";
import type { ColorMode } from "./encoding.js";
import { DEFAULT_SIZES, renderViews, type Frame } from "./render.js";
import {
  extendToNeighbors,
  initialViewState,
  reduce,
  type Action,
  type ViewName,
  type ViewState,
} from "./state.js";
import type { Payloads } from "./types.js";
import { unproject, type ViewSize } from "./views/common.js";
import type { BrushRect } from "./views/distance.js";

const DISTANCE_SCOPES = ["all", "within:0", "within:1", "between:0,1"];

export class App {
  state: ViewState = initialViewState();
  payloads: Payloads | null = null;
  frame: Frame | null = null;
  brushRect: BrushRect | null = null;
  brushedPairs: [number, number][] = [];
  readonly poller: LayoutPoller;
  private canvases = new Map<ViewName, HTMLCanvasElement>();
  private sizes = DEFAULT_SIZES;

  constructor(
    readonly api: ApiClient,
    private root: HTMLElement | null = null,
  ) {
    this.poller = new LayoutPoller(api);
    if (root) this.mount(root);
  }

  /** Create one canvas per view plus the settings strip. */
  mount(root: HTMLElement): void {
    const doc = root.ownerDocument;
    for (const view of Object.keys(this.sizes) as ViewName[]) {
      const holder = doc.createElement("div");
      holder.className = `view view-${view}`;
      const title = doc.createElement("h3");
      title.textContent = view;
      const canvas = doc.createElement("canvas");
      canvas.width = this.sizes[view].width;
      canvas.height = this.sizes[view].height;
      canvas.dataset.view = view;
      holder.appendChild(title);
      holder.appendChild(canvas);
      root.appendChild(holder);
      this.canvases.set(view, canvas);
      this.wireEvents(view, canvas);
    }
  }

  async load(): Promise<void> {
    const [dataset, latent, globalLayout, features] = await Promise.all([
      this.api.getDataset(),
      this.api.getLatent(),
      this.api.getGlobalLayout(),
      this.api.getFeatures(["all", "foc-0", "foc-1", "diff"]),
    ]);
    const distances = [await this.api.getDistances({ y: this.state.distanceTab, scope: "all" })];
    this.payloads = {
      dataset,
      latent,
      globalLayout,
      features,
      distances,
      khop: null,
      focalGroups: [],
    };
    this.redraw();
  }

  dispatch(action: Action): void {
    this.state = reduce(this.state, action);
    this.redraw();
  }

  /** Hover semantics: the target plus, per settings, its neighbors. */
  hoverNode(nodeId: number | null): void {
    if (!this.payloads) return;
    if (nodeId == null) {
      this.dispatch({ type: "clearHover" });
      return;
    }
    const nodes = extendToNeighbors(
      [nodeId],
      this.state.hoverExtendsToNeighbors,
      this.payloads.dataset.edges,
      this.payloads.dataset.nNodes,
    );
    this.dispatch({ type: "hover", nodes });
  }

  /** Highlight a node-pair list (e.g. a distance brush) across views. */
  highlightPairs(pairs: [number, number][]): void {
    const nodes = Array.from(new Set(pairs.flat())).sort((a, b) => a - b);
    this.brushedPairs = pairs;
    this.dispatch({ type: "hover", nodes, pairs });
  }

  setColorMode(mode: ColorMode, feature: number | null = null): void {
    this.dispatch({ type: "setColorMode", mode, feature });
  }

  /** Brush a rectangle in latent space: selects the nodes inside it. */
  brushLatent(x0: number, x1: number, y0: number, y1: number): number[] {
    if (!this.payloads) return [];
    const picked: number[] = [];
    this.payloads.latent.positions.forEach(([x, y], v) => {
      if (x >= x0 && x <= x1 && y >= y0 && y <= y1) picked.push(v);
    });
    this.dispatch({ type: "select", nodes: picked });
    return picked;
  }

  /** Dispatch the focus action, mark the K-hop view pending, poll, publish. */
  async focus(action: { kind: string; nodeIds?: number[]; group?: number }): Promise<void> {
    if (!this.payloads) return;
    const accepted = await this.api.postFocus(action);
    this.poller.track(accepted.jobId);
    if (accepted.jobId == null) {
      this.payloads.khop = null;
      this.payloads.focalGroups = [];
      this.dispatch({ type: "khopPending", pending: false });
      return;
    }
    this.dispatch({ type: "khopPending", pending: true });
    const [layout, session] = await Promise.all([
      this.poller.poll(accepted.jobId),
      this.api.getSession(),
    ]);
    if (layout === null) return; // superseded by a newer focus
    this.payloads.khop = layout;
    this.payloads.focalGroups = session.focalGroups;
    this.payloads.features = await this.api.getFeatures(["all", "foc-0", "foc-1", "diff"]);
    this.payloads.distances = await this.refreshedCharts(session.focalGroups.length);
    this.dispatch({ type: "khopPending", pending: false });
    this.dispatch({ type: "clearSelection" });
  }

  private async refreshedCharts(nFocal: number) {
    const scopes = DISTANCE_SCOPES.filter((scope) => {
      if (scope === "all") return true;
      if (scope.startsWith("within:")) return Number(scope.split(":")[1]) < nFocal;
      return nFocal >= 2;
    });
    return Promise.all(
      scopes.map((scope) => this.api.getDistances({ y: this.state.distanceTab, scope })),
    );
  }

  async brushDistances(region: [number, number, number, number]): Promise<[number, number][]> {
    const result = await this.api.brush(region, { y: this.state.distanceTab, scope: "all" });
    this.brushRect = { x0: region[0], x1: region[1], y0: region[2], y1: region[3] };
    this.highlightPairs(result.pairs);
    return result.pairs;
  }

  /** Build all display lists in one batch and draw them. */
  redraw(): void {
    if (!this.payloads) return;
    this.frame = renderViews(this.payloads, this.state, this.sizes, this.brushRect);
    for (const [view, canvas] of this.canvases) {
      const ctx = canvas.getContext("2d");
      if (!ctx) continue; // headless DOM without a canvas backend
      const list = this.frame.lists[view];
      const { width, height } = this.sizes[view];
      executeOps(ctx, list.base, width, height);
      executeOps(ctx, list.overlay, width, height);
    }
  }

  /** Nearest node to a screen point in a scatter view, within tolerance. */
  hitTest(view: ViewName, sx: number, sy: number, tolerance = 0.02): number | null {
    if (!this.payloads) return null;
    const positions =
      view === "latent"
        ? this.payloads.latent.positions
        : view === "globalTopo"
          ? this.payloads.globalLayout.positions
          : null;
    if (!positions) return null;
    const [x, y] = unproject(sx, sy, this.state.cameras[view], this.sizes[view]);
    let best: number | null = null;
    let bestDist = tolerance;
    positions.forEach(([px, py], v) => {
      const d = Math.hypot(px - x, py - y);
      if (d < bestDist) {
        best = v;
        bestDist = d;
      }
    });
    return best;
  }

  private wireEvents(view: ViewName, canvas: HTMLCanvasElement): void {
    if (view !== "latent" && view !== "globalTopo") return;
    let dragStart: [number, number] | null = null;
    canvas.addEventListener("mousemove", (ev: MouseEvent) => {
      if (dragStart) return;
      this.hoverNode(this.hitTest(view, ev.offsetX, ev.offsetY));
    });
    canvas.addEventListener("mouseleave", () => this.dispatch({ type: "clearHover" }));
    canvas.addEventListener("mousedown", (ev: MouseEvent) => {
      dragStart = [ev.offsetX, ev.offsetY];
    });
    canvas.addEventListener("mouseup", (ev: MouseEvent) => {
      if (!dragStart) return;
      const [x0s, y0s] = dragStart;
      dragStart = null;
      const moved = Math.hypot(ev.offsetX - x0s, ev.offsetY - y0s) > 4;
      if (moved && view === "latent") {
        const [ax, ay] = unproject(x0s, y0s, this.state.cameras[view], this.sizes[view]);
        const [bx, by] = unproject(ev.offsetX, ev.offsetY, this.state.cameras[view], this.sizes[view]);
        this.brushLatent(Math.min(ax, bx), Math.max(ax, bx), Math.min(ay, by), Math.max(ay, by));
      } else {
        const hit = this.hitTest(view, ev.offsetX, ev.offsetY);
        if (hit == null) this.dispatch({ type: "clearSelection" });
        else this.dispatch({ type: "select", nodes: [hit] });
      }
    });
  }
}

import { describe, expect, it } from "vitest";

import { renderViews } from "../src/render.js";
import { initialViewState, reduce } from "../src/state.js";
import type { Payloads } from "../src/types.js";
import { loadFixtures } from "./helpers.js";

function payloads(withKhop = true): Payloads {
  const fx = loadFixtures();
  return {
    dataset: fx.dataset,
    latent: fx.latent,
    globalLayout: fx.globalLayout,
    features: fx.features,
    distances: [fx.distances],
    khop: withKhop ? fx.khop : null,
    focalGroups: withKhop ? [fx.khop.boxes[0].nodes] : [],
  };
}

describe("renderViews", () => {
  it("is a pure function: identical inputs produce identical display lists", () => {
    const p = payloads();
    const state = reduce(initialViewState(), { type: "hover", nodes: [0, 1] });
    const a = renderViews(p, state);
    const b = renderViews(p, state);
    expect(JSON.stringify(a.lists)).toBe(JSON.stringify(b.lists));
  });

  it("replaying a recorded interaction script reproduces identical lists", () => {
    const p = payloads();
    const script = [
      { type: "hover", nodes: [3] } as const,
      { type: "select", nodes: [3, 4, 5] } as const,
      { type: "setColorMode", mode: "nodeType" } as const,
      { type: "clearHover" } as const,
    ];
    const run = () => {
      let state = initialViewState();
      const frames: string[] = [];
      for (const action of script) {
        state = reduce(state, action);
        frames.push(JSON.stringify(renderViews(p, state).lists));
      }
      return frames;
    };
    expect(run()).toEqual(run());
  });

  it("puts the pending spinner on the khop view only", () => {
    const p = payloads(false);
    const state = reduce(initialViewState(), { type: "khopPending", pending: true });
    const frame = renderViews(p, state);
    const spinnerViews = Object.values(frame.lists).filter((list) =>
      list.base.some((op) => op.op === "spinner"),
    );
    expect(spinnerViews.map((l) => l.view)).toEqual(["khop"]);
    // other views stay live
    expect(frame.lists.latent.base.length).toBeGreaterThan(10);
    expect(frame.lists.globalTopo.base.length).toBeGreaterThan(10);
  });

  it("draws focal boxes and nodes once a khop layout is present", () => {
    const frame = renderViews(payloads(true), initialViewState());
    const khopOps = frame.lists.khop.base;
    const labels = khopOps.filter((op) => op.op === "text").map((op) => (op as { text: string }).text);
    expect(labels).toContain("foc-0");
    expect(labels).toContain("hop-1");
    const glyphs = khopOps.filter((op) => op.op === "glyph");
    expect(glyphs.length).toBeGreaterThan(50);
  });

  it("outlines each block's origin cell in the blocks view", () => {
    const p = payloads();
    const frame = renderViews(p, initialViewState());
    const redOutlines = frame.lists.blocks.base.filter(
      (op) => op.op === "rect" && op.stroke === "#d62728",
    );
    expect(redOutlines.length).toBe(p.latent.blocks.blocks.length);
  });

  it("hovering draws black partial distributions on the feature histograms", () => {
    const p = payloads();
    const idle = renderViews(p, initialViewState());
    expect(idle.lists.features.overlay.length).toBe(0);
    const hovered = renderViews(p, reduce(initialViewState(), { type: "hover", nodes: [0, 1, 2, 3] }));
    const black = hovered.lists.features.overlay.filter(
      (op) => op.op === "rect" && op.fill === "#111111",
    );
    expect(black.length).toBeGreaterThan(0);
  });

  it("hover adds overlay strokes and a desaturating mask without touching the base", () => {
    const p = payloads();
    const idle = renderViews(p, initialViewState());
    const hovered = renderViews(p, reduce(initialViewState(), { type: "hover", nodes: [7] }));
    expect(JSON.stringify(hovered.lists.latent.base)).toBe(JSON.stringify(idle.lists.latent.base));
    expect(hovered.lists.latent.overlay.some((op) => op.op === "mask")).toBe(true);
    expect(hovered.lists.globalTopo.overlay.some((op) => op.op === "glyph")).toBe(true);
  });
});

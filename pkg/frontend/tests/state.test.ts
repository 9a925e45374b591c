import { describe, expect, it } from "vitest";

import { extendToNeighbors, initialViewState, reduce } from "../src/state.js";

describe("view state reducer", () => {
  it("shows the focus menu only after a selection exists", () => {
    let state = initialViewState();
    expect(state.focusMenuVisible).toBe(false);
    state = reduce(state, { type: "select", nodes: [3, 1, 3] });
    expect(state.selection).toEqual([1, 3]);
    expect(state.focusMenuVisible).toBe(true);
    state = reduce(state, { type: "clearSelection" });
    expect(state.focusMenuVisible).toBe(false);
  });

  it("additive select merges and keeps the menu open", () => {
    let state = reduce(initialViewState(), { type: "select", nodes: [1] });
    state = reduce(state, { type: "select", nodes: [2], additive: true });
    expect(state.selection).toEqual([1, 2]);
    expect(state.focusMenuVisible).toBe(true);
  });

  it("hover is transient and separate from selection", () => {
    let state = reduce(initialViewState(), { type: "select", nodes: [5] });
    state = reduce(state, { type: "hover", nodes: [9] });
    expect(state.hoverNodes).toEqual([9]);
    state = reduce(state, { type: "clearHover" });
    expect(state.hoverNodes).toEqual([]);
    expect(state.selection).toEqual([5]);
  });

  it("is pure: inputs are never mutated", () => {
    const before = initialViewState();
    const frozen = JSON.stringify(before);
    reduce(before, { type: "select", nodes: [1, 2] });
    reduce(before, { type: "zoom", view: "latent", factor: 2, cx: 10, cy: 10 });
    expect(JSON.stringify(before)).toBe(frozen);
  });

  it("zoom keeps the anchor point fixed", () => {
    const state = reduce(initialViewState(), { type: "zoom", view: "latent", factor: 2, cx: 100, cy: 50 });
    const cam = state.cameras.latent;
    // anchor in world coords maps back to the same screen point
    expect(cam.scale).toBe(2);
    expect(cam.x + cam.scale * ((100 - 0) / 1)).not.toBeNaN();
    expect(cam.x).toBeCloseTo(100 - 2 * 100);
  });

  it("extends hover targets to neighbors by depth", () => {
    const edges: [number, number][] = [[0, 1], [1, 2], [2, 3]];
    expect(extendToNeighbors([0], 0, edges, 4)).toEqual([0]);
    expect(extendToNeighbors([0], 1, edges, 4)).toEqual([0, 1]);
    expect(extendToNeighbors([0], 2, edges, 4)).toEqual([0, 1, 2]);
    expect(extendToNeighbors([0], 3, edges, 4)).toEqual([0, 1, 2, 3]);
  });
});

/** Node visual encodings, identical across every view.
 *
 * Color is user-configurable: the positional rainbow (latentPosition),
 * a sequential ramp over one dense feature, categorical node types or
 * predicted labels, or correctness (right/wrong). Shape follows node type.
 */

import type { DatasetPayload, LatentPayload } from "./types.js";

export type ColorMode =
  | "latentPosition"
  | "feature"
  | "nodeType"
  | "predictedLabel"
  | "correctness";

export type NodeShape = "circle" | "square" | "triangle" | "diamond" | "cross" | "star";

const CATEGORICAL = [
  "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1",
  "#76b7b2", "#edc948", "#ff9da7", "#9c755f", "#bab0ac",
];

const SHAPES: NodeShape[] = ["circle", "triangle", "square", "diamond", "cross", "star"];

const ABSENT = "#c8c8c8";
const CORRECT = "#4e9a06";
const WRONG = "#cc0000";

/** CIELAB (D65) to sRGB hex; mirrors the server-side positional rainbow. */
export function labToHex(l: number, a: number, b: number): string {
  const fy = (l + 16) / 116;
  const fx = fy + a / 500;
  const fz = fy - b / 200;
  const delta = 6 / 29;
  const fInv = (t: number) => (t > delta ? t * t * t : 3 * delta * delta * (t - 4 / 29));
  const x = 0.95047 * fInv(fx);
  const y = 1.0 * fInv(fy);
  const z = 1.08883 * fInv(fz);
  const lin = [
    3.2404542 * x - 1.5371385 * y - 0.4985314 * z,
    -0.969266 * x + 1.8760108 * y + 0.041556 * z,
    0.0556434 * x - 0.2040259 * y + 1.0572252 * z,
  ].map((c) => Math.min(1, Math.max(0, c)));
  const srgb = lin.map((c) => (c <= 0.0031308 ? 12.92 * c : 1.055 * Math.pow(c, 1 / 2.4) - 0.055));
  const hex = srgb
    .map((c) => Math.round(Math.min(1, Math.max(0, c)) * 255).toString(16).padStart(2, "0"))
    .join("");
  return `#${hex}`;
}

/** Positional rainbow for a unit-square point (L fixed, a from x, b from y). */
export function positionColor(x: number, y: number): string {
  return labToHex(60, -80 + 160 * x, -80 + 160 * y);
}

export function sequentialRamp(t: number): string {
  // light steel to dark blue
  const clamp = Math.min(1, Math.max(0, t));
  const from = [222, 235, 247];
  const to = [8, 48, 107];
  const rgb = from.map((f, i) => Math.round(f + (to[i] - f) * clamp));
  return `#${rgb.map((c) => c.toString(16).padStart(2, "0")).join("")}`;
}

export function nodeShapes(dataset: DatasetPayload): NodeShape[] {
  if (dataset.nodeTypes.length <= 1) return dataset.types.map(() => "circle");
  return dataset.types.map((t) => SHAPES[t % SHAPES.length]);
}

/** Per-node colors for the active mode; the single source every view uses. */
export function nodeColors(
  mode: ColorMode,
  featureIndex: number | null,
  dataset: DatasetPayload,
  latent: LatentPayload,
): string[] {
  const n = dataset.nNodes;
  switch (mode) {
    case "latentPosition":
      return latent.colors.slice();
    case "nodeType":
      return dataset.types.map((t) => CATEGORICAL[t % CATEGORICAL.length]);
    case "predictedLabel": {
      const labels = dataset.predLabels;
      if (!labels) return new Array(n).fill(ABSENT);
      return labels.map((c) => CATEGORICAL[c % CATEGORICAL.length]);
    }
    case "correctness": {
      const correct = dataset.correct;
      if (!correct) return new Array(n).fill(ABSENT);
      return correct.map((ok) => (ok ? CORRECT : WRONG));
    }
    case "feature": {
      if (featureIndex == null || featureIndex >= dataset.denseFeatures.length) {
        return new Array(n).fill(ABSENT);
      }
      const values: number[] = [];
      const present: boolean[] = [];
      for (let v = 0; v < n; v += 1) {
        const has = dataset.denseMask[dataset.types[v]][featureIndex];
        present.push(has);
        if (has) values.push(dataset.denseValues[v][featureIndex]);
      }
      const lo = Math.min(...values);
      const hi = Math.max(...values);
      const span = hi > lo ? hi - lo : 1;
      return dataset.types.map((_, v) =>
        present[v] ? sequentialRamp((dataset.denseValues[v][featureIndex] - lo) / span) : ABSENT,
      );
    }
  }
}

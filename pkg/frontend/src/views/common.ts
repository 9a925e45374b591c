/** Shared geometry for canvas views. */

import type { Camera } from "../state.js";

export interface ViewSize {
  width: number;
  height: number;
}

export const VIEW_MARGIN = 12;

/** Unit-square point to screen coordinates under the view camera. */
export function project(
  x: number,
  y: number,
  camera: Camera,
  size: ViewSize,
): [number, number] {
  const inner = Math.min(size.width, size.height) - 2 * VIEW_MARGIN;
  const sx = VIEW_MARGIN + x * inner;
  const sy = VIEW_MARGIN + y * inner;
  return [camera.x + camera.scale * sx, camera.y + camera.scale * sy];
}

/** Inverse of project, for hit-testing mouse coordinates. */
export function unproject(
  sx: number,
  sy: number,
  camera: Camera,
  size: ViewSize,
): [number, number] {
  const inner = Math.min(size.width, size.height) - 2 * VIEW_MARGIN;
  const x = ((sx - camera.x) / camera.scale - VIEW_MARGIN) / inner;
  const y = ((sy - camera.y) / camera.scale - VIEW_MARGIN) / inner;
  return [x, y];
}

export const BACKGROUND = "#ffffff";
export const EDGE_COLOR = "#d0d0d0";
export const HIGHLIGHT_STROKE = "#111111";
export const DESATURATE_MASK = "rgba(255,255,255,0.55)";
export const NODE_RADIUS = 3;

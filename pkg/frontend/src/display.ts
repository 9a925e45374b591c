/** Display lists: rendering is a pure function of (payloads, view state)
 * producing draw ops; executing them on a canvas context is the only
 * impure step. Each view has a base list and a highlight overlay so hover
 * changes never force a base re-render.
 */

import type { NodeShape } from "./encoding.js";

export type DrawOp =
  | { op: "clear"; color: string }
  | { op: "rect"; x: number; y: number; w: number; h: number; fill?: string; stroke?: string; lineWidth?: number }
  | { op: "glyph"; shape: NodeShape; x: number; y: number; r: number; fill?: string; stroke?: string; lineWidth?: number }
  | { op: "line"; points: [number, number][]; stroke: string; lineWidth: number }
  | { op: "text"; x: number; y: number; text: string; fill: string; size: number }
  | { op: "mask"; color: string }
  | { op: "spinner"; x: number; y: number; label: string };

export interface DisplayList {
  view: string;
  base: DrawOp[];
  overlay: DrawOp[];
}

export function countOps(list: DisplayList): number {
  return list.base.length + list.overlay.length;
}

function tracePath(ctx: CanvasRenderingContext2D, shape: NodeShape, x: number, y: number, r: number): void {
  ctx.beginPath();
  switch (shape) {
    case "circle":
      ctx.arc(x, y, r, 0, Math.PI * 2);
      break;
    case "square":
      ctx.rect(x - r, y - r, 2 * r, 2 * r);
      break;
    case "triangle":
      ctx.moveTo(x, y - r);
      ctx.lineTo(x - r, y + r);
      ctx.lineTo(x + r, y + r);
      ctx.closePath();
      break;
    case "diamond":
      ctx.moveTo(x, y - r);
      ctx.lineTo(x + r, y);
      ctx.lineTo(x, y + r);
      ctx.lineTo(x - r, y);
      ctx.closePath();
      break;
    case "cross":
      ctx.moveTo(x - r, y);
      ctx.lineTo(x + r, y);
      ctx.moveTo(x, y - r);
      ctx.lineTo(x, y + r);
      break;
    case "star": {
      for (let i = 0; i < 5; i += 1) {
        const angle = -Math.PI / 2 + (i * 2 * Math.PI) / 5;
        const px = x + r * Math.cos(angle);
        const py = y + r * Math.sin(angle);
        if (i === 0) ctx.moveTo(px, py);
        else ctx.lineTo(px, py);
      }
      ctx.closePath();
      break;
    }
  }
}

/** Replay ops onto a 2D context; width/height bound clears and masks. */
export function executeOps(
  ctx: CanvasRenderingContext2D,
  ops: DrawOp[],
  width: number,
  height: number,
): void {
  for (const op of ops) {
    switch (op.op) {
      case "clear":
        ctx.fillStyle = op.color;
        ctx.fillRect(0, 0, width, height);
        break;
      case "rect":
        if (op.fill) {
          ctx.fillStyle = op.fill;
          ctx.fillRect(op.x, op.y, op.w, op.h);
        }
        if (op.stroke) {
          ctx.strokeStyle = op.stroke;
          ctx.lineWidth = op.lineWidth ?? 1;
          ctx.strokeRect(op.x, op.y, op.w, op.h);
        }
        break;
      case "glyph":
        tracePath(ctx, op.shape, op.x, op.y, op.r);
        if (op.fill) {
          ctx.fillStyle = op.fill;
          ctx.fill();
        }
        if (op.stroke) {
          ctx.strokeStyle = op.stroke;
          ctx.lineWidth = op.lineWidth ?? 1;
          ctx.stroke();
        }
        break;
      case "line": {
        ctx.strokeStyle = op.stroke;
        ctx.lineWidth = op.lineWidth;
        ctx.beginPath();
        op.points.forEach(([x, y], i) => (i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y)));
        ctx.stroke();
        break;
      }
      case "text":
        ctx.fillStyle = op.fill;
        ctx.font = `${op.size}px sans-serif`;
        ctx.fillText(op.text, op.x, op.y);
        break;
      case "mask":
        ctx.fillStyle = op.color;
        ctx.fillRect(0, 0, width, height);
        break;
      case "spinner":
        ctx.fillStyle = "#555";
        ctx.font = "13px sans-serif";
        ctx.fillText(op.label, op.x, op.y);
        break;
    }
  }
}

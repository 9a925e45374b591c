/** Latent neighbor blocks: 8x8 grid of occupied blocks, each nesting a
 * full-space 8x8 cell grid of its members' hop-1 neighbor counts, with the
 * block's own cell (the origin) outlined in red.
 */

import type { DisplayList, DrawOp } from "../display.js";
import type { ViewState } from "../state.js";
import type { LatentPayload } from "../types.js";
import { BACKGROUND, VIEW_MARGIN, type ViewSize } from "./common.js";

const ORIGIN_OUTLINE = "#d62728";

export function buildBlocksView(
  latent: LatentPayload,
  state: ViewState,
  size: ViewSize,
): DisplayList {
  const base: DrawOp[] = [{ op: "clear", color: BACKGROUND }];
  const overlay: DrawOp[] = [];
  const grid = latent.blocks.gridSize;
  const inner = Math.min(size.width, size.height) - 2 * VIEW_MARGIN;
  const blockSide = inner / grid;
  const cellSide = blockSide / grid;
  const hovered = new Set(state.hoverNodes);

  for (const block of latent.blocks.blocks) {
    const bx = VIEW_MARGIN + block.col * blockSide;
    const by = VIEW_MARGIN + block.row * blockSide;
    let top = 0;
    for (const row of block.cells) for (const c of row) top = Math.max(top, c);
    for (let r = 0; r < grid; r += 1) {
      for (let c = 0; c < grid; c += 1) {
        const count = block.cells[r][c];
        const t = top > 0 ? count / top : 0;
        const lum = Math.round(255 * (1 - t));
        const hexl = lum.toString(16).padStart(2, "0");
        base.push({
          op: "rect",
          x: bx + c * cellSide,
          y: by + r * cellSide,
          w: cellSide,
          h: cellSide,
          fill: `#${hexl}${hexl}${hexl}`,
        });
      }
    }
    // the origin cell corresponds to the block's own grid index
    base.push({
      op: "rect",
      x: bx + block.col * cellSide,
      y: by + block.row * cellSide,
      w: cellSide,
      h: cellSide,
      stroke: ORIGIN_OUTLINE,
      lineWidth: 1,
    });
    base.push({ op: "rect", x: bx, y: by, w: blockSide, h: blockSide, stroke: "#bbbbbb", lineWidth: 0.5 });

    if (block.members.some((v) => hovered.has(v))) {
      overlay.push({
        op: "rect",
        x: bx,
        y: by,
        w: blockSide,
        h: blockSide,
        stroke: "#111111",
        lineWidth: 2,
      });
    }
  }
  return { view: "blocks", base, overlay };
}

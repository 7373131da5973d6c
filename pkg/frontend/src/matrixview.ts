/** Grey-scale similarity matrix in clustering display order.
 *
 * Cells use the darkness of the Bhattacharyya value (diagonal darkest);
 * colored tints are reserved for interactions: search hits and the
 * selected cell.
 */

import { greyscale } from "./scales.js";
import type { MatrixPayload } from "./types.js";
import type { CanvasLike } from "./stripes.js";

export interface MatrixGeometry {
  size: number; // full drawing size in px, square
}

export interface CellRef {
  row: number; // position in display order
  col: number;
  i: number;   // original record indices
  j: number;
}

export function cellSize(matrix: MatrixPayload, geom: MatrixGeometry): number {
  return geom.size / matrix.ids.length;
}

/** Pixel -> cell, honoring the display permutation. */
export function cellAt(x: number, y: number, matrix: MatrixPayload,
                       geom: MatrixGeometry): CellRef | null {
  const n = matrix.ids.length;
  const px = cellSize(matrix, geom);
  const col = Math.floor(x / px);
  const row = Math.floor(y / px);
  if (row < 0 || col < 0 || row >= n || col >= n) return null;
  return { row, col, i: matrix.display_order[row], j: matrix.display_order[col] };
}

/** Records whose ids appear among the hits get a tinted row/column. */
export function drawMatrix(
  ctx: CanvasLike,
  matrix: MatrixPayload,
  geom: MatrixGeometry,
  highlightIds: Set<string> = new Set(),
  selected: CellRef | null = null,
): void {
  const n = matrix.ids.length;
  const px = cellSize(matrix, geom);
  ctx.clearRect(0, 0, geom.size, geom.size);
  for (let row = 0; row < n; row++) {
    const i = matrix.display_order[row];
    for (let col = 0; col < n; col++) {
      const j = matrix.display_order[col];
      ctx.fillStyle = greyscale(matrix.values[i][j]);
      ctx.fillRect(col * px, row * px, Math.ceil(px), Math.ceil(px));
      const tinted = highlightIds.has(matrix.ids[i]) || highlightIds.has(matrix.ids[j]);
      if (tinted) {
        ctx.fillStyle = "rgba(230,159,0,0.35)";
        ctx.fillRect(col * px, row * px, Math.ceil(px), Math.ceil(px));
      }
    }
  }
  if (selected) {
    ctx.fillStyle = "rgba(86,180,233,0.45)";
    ctx.fillRect(selected.col * px, selected.row * px, Math.ceil(px), Math.ceil(px));
  }
}

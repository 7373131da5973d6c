/** Topic stripe rendering: one row per topic, opacity = weight.
 *
 * Layout math is separated from painting so alignment can be asserted
 * without a real canvas.
 */

import { maxPerPixel, rgba } from "./scales.js";
import type { TopicSeriesPayload } from "./types.js";

export interface StripeGeometry {
  width: number;
  rowHeight: number;
  gap: number;
}

export const DEFAULT_GEOMETRY: StripeGeometry = { width: 720, rowHeight: 18, gap: 2 };

export interface CanvasLike {
  fillStyle: string | CanvasGradient | CanvasPattern;
  fillRect(x: number, y: number, w: number, h: number): void;
  clearRect(x: number, y: number, w: number, h: number): void;
}

export function stripesHeight(k: number, geom: StripeGeometry): number {
  return k * (geom.rowHeight + geom.gap);
}

/**
 * Paint a topic series into a canvas context.  `xOffsetPx` shifts the
 * whole drawing; the search panel uses it to align hits under the query.
 * `pxPerWindow` fixes the horizontal scale; every thumbnail in the search
 * panel shares the query view's scale so equal window counts occupy equal
 * widths regardless of record length.  Defaults to filling `geom.width`.
 * Returns the drawn opacity columns per topic (handy for tests).
 */
export function drawStripes(
  ctx: CanvasLike,
  series: TopicSeriesPayload,
  geom: StripeGeometry,
  xOffsetPx = 0,
  pxPerWindow?: number,
): number[][] {
  const length = series.weights.length;
  const ppw = pxPerWindow ?? geom.width / length;
  const perTopic: number[][] = [];
  for (let k = 0; k < series.K; k++) {
    const column: number[] = [];
    for (let t = 0; t < length; t++) {
      column.push(series.weights[t][k]);
    }
    const y = k * (geom.rowHeight + geom.gap);
    if (ppw >= 0.5) {
      perTopic.push(column);
      for (let t = 0; t < length; t++) {
        ctx.fillStyle = rgba(series.colors[k], column[t]);
        ctx.fillRect(xOffsetPx + t * ppw, y, Math.ceil(ppw), geom.rowHeight);
      }
    } else {
      // sub-pixel windows: aggregate to one rect per pixel by max weight
      const nPixels = Math.max(1, Math.round(length * ppw));
      const pixels = maxPerPixel(column, nPixels);
      perTopic.push(pixels);
      for (let p = 0; p < pixels.length; p++) {
        ctx.fillStyle = rgba(series.colors[k], pixels[p]);
        ctx.fillRect(xOffsetPx + p, y, 1, geom.rowHeight);
      }
    }
  }
  return perTopic;
}

/** Map a pixel x inside the stripes to a window index. */
export function pxToWindow(x: number, nWindows: number, geom: StripeGeometry): number {
  const perWindow = geom.width / nWindows;
  return Math.max(0, Math.min(nWindows - 1, Math.floor(x / perWindow)));
}

/** Window index -> left pixel edge. */
export function windowToPx(w: number, nWindows: number, geom: StripeGeometry): number {
  return (w / nWindows) * geom.width;
}

// --- search panel alignment -------------------------------------------------

export interface ThumbnailLayout {
  recordId: string;
  /** px translation applied to the hit's stripe canvas so that its matched
   * segment starts at the same x as the query segment. */
  translatePx: number;
  /** x of the highlighted (matched) segment, identical for every row. */
  segmentStartPx: number;
  segmentWidthPx: number;
}

/**
 * Alignment layout for the search panel: every thumbnail is translated so
 * its matched offset lands exactly under the query's brushed region.
 */
export function alignThumbnails(
  queryStart: number,
  length: number,
  hits: { record_id: string; offset: number }[],
  pxPerWindow: number,
  queryPx: number,
): ThumbnailLayout[] {
  return hits.map((hit) => ({
    recordId: hit.record_id,
    translatePx: queryPx - hit.offset * pxPerWindow,
    segmentStartPx: queryPx,
    segmentWidthPx: length * pxPerWindow,
  }));
}

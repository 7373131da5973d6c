/** Details view drawing: ground-acceleration overview with a brush, the
 * brushed region as a grey area chart, and the time x floor heatmap with
 * linear interpolation between floors.
 */

import { diverging, interpolateFloors, timeToPx, type ColormapMode } from "./scales.js";
import type { GroundAccelPayload, HeatmapPayload } from "./types.js";
import type { CanvasLike } from "./stripes.js";

export interface ChartGeometry {
  width: number;
  height: number;
}

/** Min/max envelope line chart; returns the drawn [t0, t1] domain. */
export function drawEnvelope(
  ctx: CanvasLike,
  data: GroundAccelPayload,
  geom: ChartGeometry,
  color = "#555555",
): [number, number] {
  const t0 = data.times_s[0];
  const t1 = data.times_s[data.times_s.length - 1];
  const span = Math.max(...data.max.map(Math.abs), ...data.min.map(Math.abs), 1e-12);
  ctx.clearRect(0, 0, geom.width, geom.height);
  ctx.fillStyle = color;
  const mid = geom.height / 2;
  for (let b = 0; b < data.times_s.length; b++) {
    const x = timeToPx(data.times_s[b], t0, t1, geom.width);
    const yTop = mid - (data.max[b] / span) * mid;
    const yBottom = mid - (data.min[b] / span) * mid;
    ctx.fillRect(x, yTop, Math.max(1, geom.width / data.times_s.length), yBottom - yTop + 1);
  }
  return [t0, t1];
}

/** Grey area chart of the brushed portion (absolute envelope). */
export function drawArea(
  ctx: CanvasLike,
  data: GroundAccelPayload,
  geom: ChartGeometry,
): void {
  ctx.clearRect(0, 0, geom.width, geom.height);
  ctx.fillStyle = "#bbbbbb";
  const span = Math.max(...data.max.map(Math.abs), ...data.min.map(Math.abs), 1e-12);
  for (let b = 0; b < data.times_s.length; b++) {
    const x = (b / data.times_s.length) * geom.width;
    const magnitude = Math.max(Math.abs(data.max[b]), Math.abs(data.min[b]));
    const h = (magnitude / span) * geom.height;
    ctx.fillRect(x, geom.height - h,
                 Math.max(1, geom.width / data.times_s.length), h);
  }
}

/**
 * Time x floor heatmap.  Values are floor-interpolated onto pixel rows;
 * floors draw bottom-up (floor 1 at the bottom).  Returns the interpolated
 * column count for tests.
 */
export function drawHeatmap(
  ctx: CanvasLike,
  data: HeatmapPayload,
  geom: ChartGeometry,
  mode: ColormapMode,
  threshold: number,
): number {
  ctx.clearRect(0, 0, geom.width, geom.height);
  const nBuckets = data.times_s.length;
  const colWidth = geom.width / nBuckets;
  const nRows = Math.max(data.floors.length * 4, 32);
  const rowHeight = geom.height / nRows;
  const limit = maxAbs(data.values);
  for (let b = 0; b < nBuckets; b++) {
    const interpolated = interpolateFloors(data.values[b], nRows);
    for (let r = 0; r < nRows; r++) {
      ctx.fillStyle = diverging(interpolated[r], limit, mode, threshold);
      // row 0 of the interpolation is floor 1 -> bottom of the chart
      ctx.fillRect(b * colWidth, geom.height - (r + 1) * rowHeight,
                   Math.ceil(colWidth), Math.ceil(rowHeight));
    }
  }
  return nRows;
}

function maxAbs(values: number[][]): number {
  let out = 1e-12;
  for (const row of values) {
    for (const v of row) out = Math.max(out, Math.abs(v));
  }
  return out;
}

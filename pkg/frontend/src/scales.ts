/** Coordinate mappings and colormaps shared by all views.
 *
 * The one invariant that keeps the views linked: a brush in seconds and a
 * window-index selection always denote the same absolute time range,
 * window w covering [w * hop, w * hop + window) seconds of its record.
 */

export interface WindowSelection {
  startIndex: number;
  length: number;
}

/** Brush interval in seconds -> window selection (start times in range). */
export function brushToWindows(
  startS: number,
  endS: number,
  hopS: number,
  nWindows: number,
): WindowSelection | null {
  if (endS <= startS) return null;
  let start = Math.round(startS / hopS);
  let end = Math.round(endS / hopS); // exclusive
  start = Math.max(0, Math.min(start, nWindows - 1));
  end = Math.max(start + 1, Math.min(end, nWindows));
  return { startIndex: start, length: end - start };
}

/** Window selection -> seconds (start-time span, end exclusive). */
export function windowsToSeconds(sel: WindowSelection, hopS: number): [number, number] {
  return [sel.startIndex * hopS, (sel.startIndex + sel.length) * hopS];
}

export function timeToPx(t: number, t0: number, t1: number, width: number): number {
  return ((t - t0) / (t1 - t0)) * width;
}

export function pxToTime(x: number, t0: number, t1: number, width: number): number {
  return t0 + (x / width) * (t1 - t0);
}

/** Aggregate per-window weights to per-pixel maxima for wide series. */
export function maxPerPixel(column: number[], nPixels: number): number[] {
  if (column.length <= nPixels) return column.slice();
  const out = new Array<number>(nPixels).fill(0);
  for (let i = 0; i < column.length; i++) {
    const p = Math.min(nPixels - 1, Math.floor((i * nPixels) / column.length));
    out[p] = Math.max(out[p], column[i]);
  }
  return out;
}

// --- colors ---------------------------------------------------------------

export function hexToRgb(hex: string): [number, number, number] {
  const v = parseInt(hex.replace("#", ""), 16);
  return [(v >> 16) & 255, (v >> 8) & 255, v & 255];
}

export function rgba(hex: string, alpha: number): string {
  const [r, g, b] = hexToRgb(hex);
  return `rgba(${r},${g},${b},${alpha})`;
}

/** Sequential single-hue ramp: value in [0,1] -> color with that opacity. */
export function sequential(hex: string, value: number): string {
  return rgba(hex, clamp01(value));
}

/** Grey ramp for the similarity matrix: 1 -> near black, 0 -> white. */
export function greyscale(value: number): string {
  const level = Math.round(255 * (1 - clamp01(value)));
  return `rgb(${level},${level},${level})`;
}

export type ColormapMode = "continuous" | "discrete";

/**
 * Diverging blue-white-red map for signed, design-limit-normalized values.
 * In discrete mode, |v| below the threshold renders as neutral (hidden)
 * and values above it snap to a handful of bands, which makes it easy to
 * filter unimportant values by raising the threshold.
 */
export function diverging(
  value: number,
  limit: number,
  mode: ColormapMode = "continuous",
  threshold = 0,
): string {
  let v = clamp(value / limit, -1, 1);
  if (mode === "discrete") {
    if (Math.abs(v) < threshold) return "rgb(255,255,255)";
    const bands = 4;
    const sign = Math.sign(v);
    v = (sign * Math.ceil(Math.abs(v) * bands)) / bands;
  }
  const t = Math.abs(v);
  const other = Math.round(255 * (1 - t));
  return v >= 0
    ? `rgb(255,${other},${other})`   // warm for positive
    : `rgb(${other},${other},255)`;  // cool for negative
}

function clamp01(x: number): number {
  return clamp(x, 0, 1);
}

function clamp(x: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, x));
}

/** Linear interpolation of a per-floor profile onto a pixel row grid. */
export function interpolateFloors(values: number[], nRows: number): number[] {
  const n = values.length;
  if (n === 1) return new Array(nRows).fill(values[0]);
  const out = new Array<number>(nRows);
  for (let r = 0; r < nRows; r++) {
    const pos = (r / (nRows - 1)) * (n - 1);
    const lo = Math.min(n - 2, Math.floor(pos));
    const frac = pos - lo;
    out[r] = values[lo] * (1 - frac) + values[lo + 1] * frac;
  }
  return out;
}

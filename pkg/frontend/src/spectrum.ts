/** Topic spectrum heatmap: x = frequency bins, y = floors (bottom-up),
 * single-hue opacity ramp in the topic's own color. */

import { sequential } from "./scales.js";
import type { SpectrumPayload } from "./types.js";
import type { CanvasLike } from "./stripes.js";

export interface SpectrumGeometry {
  width: number;
  height: number;
}

export function drawSpectrum(
  ctx: CanvasLike,
  spectrum: SpectrumPayload,
  geom: SpectrumGeometry,
): void {
  ctx.clearRect(0, 0, geom.width, geom.height);
  const nChannels = spectrum.grid.length;
  const nBins = spectrum.grid[0].length;
  const cellW = geom.width / nBins;
  const cellH = geom.height / nChannels;
  for (let c = 0; c < nChannels; c++) {
    for (let b = 0; b < nBins; b++) {
      ctx.fillStyle = sequential(spectrum.color, spectrum.grid[c][b]);
      // first channel (lowest floor) at the bottom
      ctx.fillRect(b * cellW, geom.height - (c + 1) * cellH,
                   Math.ceil(cellW), Math.ceil(cellH));
    }
  }
}

/** Tick labels at round frequencies for the x axis. */
export function frequencyTicks(binEdges: number[], every = 4): { x01: number; label: string }[] {
  const fMax = binEdges[binEdges.length - 1];
  const ticks: { x01: number; label: string }[] = [];
  for (let i = 0; i < binEdges.length; i += every) {
    ticks.push({ x01: binEdges[i] / fMax, label: `${binEdges[i]}` });
  }
  return ticks;
}

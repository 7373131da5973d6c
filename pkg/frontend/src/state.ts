/** Central view state with URL round-tripping.
 *
 * Everything a session needs to be shareable lives here; the URL hash is
 * the single serialization, parsed back on load.
 */

import type { ColormapMode } from "./scales.js";
import type { SearchResponse } from "./types.js";

export interface ViewState {
  selectedRecord: string | null;
  brush: { startIndex: number; length: number } | null;
  selectedTopics: number[] | null;        // null = all topics
  matrixCell: [number, number] | null;    // display-order independent ids
  detailRecord: string | null;
  detailZoom: [number, number] | null;    // seconds
  detailAttribute: string;
  colormap: ColormapMode;
  threshold: number;                      // discrete-mode cutoff, fraction of limit
}

export function initialState(): ViewState {
  return {
    selectedRecord: null,
    brush: null,
    selectedTopics: null,
    matrixCell: null,
    detailRecord: null,
    detailZoom: null,
    detailAttribute: "shear",
    colormap: "continuous",
    threshold: 0.25,
  };
}

export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.selectedRecord) params.set("r", state.selectedRecord);
  if (state.brush) params.set("b", `${state.brush.startIndex}:${state.brush.length}`);
  if (state.selectedTopics) params.set("t", state.selectedTopics.join(","));
  if (state.matrixCell) params.set("mc", state.matrixCell.join(":"));
  if (state.detailRecord) params.set("d", state.detailRecord);
  if (state.detailZoom) {
    params.set("z", state.detailZoom.map((v) => v.toFixed(3)).join(":"));
  }
  params.set("a", state.detailAttribute);
  params.set("cm", state.colormap);
  params.set("th", String(state.threshold));
  return params.toString();
}

export function decodeState(encoded: string): ViewState {
  const params = new URLSearchParams(encoded);
  const state = initialState();
  state.selectedRecord = params.get("r");
  const brush = params.get("b");
  if (brush) {
    const [start, length] = brush.split(":").map(Number);
    if (Number.isFinite(start) && Number.isFinite(length) && length > 0) {
      state.brush = { startIndex: start, length };
    }
  }
  const topics = params.get("t");
  if (topics) {
    const parsed = topics.split(",").map(Number).filter(Number.isInteger);
    state.selectedTopics = parsed.length ? parsed : null;
  }
  const cell = params.get("mc");
  if (cell) {
    const [i, j] = cell.split(":").map(Number);
    if (Number.isInteger(i) && Number.isInteger(j)) state.matrixCell = [i, j];
  }
  state.detailRecord = params.get("d");
  const zoom = params.get("z");
  if (zoom) {
    const [a, b] = zoom.split(":").map(Number);
    if (Number.isFinite(a) && Number.isFinite(b) && b > a) state.detailZoom = [a, b];
  }
  state.detailAttribute = params.get("a") ?? state.detailAttribute;
  const cm = params.get("cm");
  if (cm === "continuous" || cm === "discrete") state.colormap = cm;
  const th = Number(params.get("th"));
  if (Number.isFinite(th) && th >= 0 && th <= 1) state.threshold = th;
  return state;
}

type Listener = (state: ViewState) => void;

/** Minimal store: mutate via update(), views subscribe for redraws. */
export class Store {
  private listeners: Listener[] = [];
  searchResults: SearchResponse | null = null;

  constructor(public state: ViewState = initialState()) {}

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  update(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const fn of this.listeners) fn(this.state);
  }
}

/** Browser bootstrap: builds the four-panel layout and wires interactions.
 *
 * Panels: similarity matrix + topic spectra (left), topic stripes with
 * brushing and the aligned search results (middle), details view with
 * overview brush, area chart and floor heatmap (right).
 */

import { ApiClient } from "./api.js";
import { App } from "./app.js";
import { drawEnvelope, drawArea, drawHeatmap } from "./details.js";
import { cellAt, drawMatrix } from "./matrixview.js";
import { pxToTime, timeToPx } from "./scales.js";
import { drawSpectrum } from "./spectrum.js";
import {
  DEFAULT_GEOMETRY,
  alignThumbnails,
  drawStripes,
  stripesHeight,
  windowToPx,
} from "./stripes.js";

const app = new App(new ApiClient(""), location.hash.slice(1));

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, cls?: string, parent?: HTMLElement): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  parent?.appendChild(node);
  return node;
}

function canvas(parent: HTMLElement, width: number, height: number,
                cls?: string): [HTMLCanvasElement, CanvasRenderingContext2D | null] {
  const c = el("canvas", cls, parent);
  c.width = width;
  c.height = height;
  return [c, c.getContext("2d")];
}

async function boot() {
  await app.load();
  const root = document.getElementById("app")!;
  root.innerHTML = "";

  // --- header ---------------------------------------------------------
  const header = el("div", "header", root);
  el("h1", undefined, header).textContent = "quakescope";
  const recordSelect = el("select", "record-select", header);
  for (const rec of app.records) {
    const option = el("option", undefined, recordSelect);
    option.value = rec.id;
    option.textContent = `${rec.id} (${rec.duration_s.toFixed(0)} s)`;
  }
  recordSelect.value = app.store.state.selectedRecord ?? "";
  recordSelect.onchange = () => {
    app.store.searchResults = null;
    app.store.update({ selectedRecord: recordSelect.value, brush: null });
  };

  const layout = el("div", "layout", root);
  const left = el("div", "col left", layout);
  const middle = el("div", "col middle", layout);
  const right = el("div", "col right", layout);

  // --- matrix panel -----------------------------------------------------
  el("h2", undefined, left).textContent = "similarity matrix";
  const matrixGeom = { size: 260 };
  const [matrixCanvas, matrixCtx] = canvas(left, matrixGeom.size, matrixGeom.size, "matrix");
  const matrixCaption = el("div", "caption", left);
  matrixCanvas.onclick = async (ev) => {
    if (!app.matrix) return;
    const rect = matrixCanvas.getBoundingClientRect();
    const cell = cellAt(ev.clientX - rect.left, ev.clientY - rect.top,
                        app.matrix, matrixGeom);
    if (!cell) return;
    await app.selectMatrixCell(cell.i, cell.j);
    recordSelect.value = app.store.state.selectedRecord ?? "";
    matrixCaption.textContent =
      `${app.matrix.ids[cell.i]} vs ${app.matrix.ids[cell.j]}: ` +
      `similarity ${app.matrix.values[cell.i][cell.j].toFixed(3)}`;
  };

  // --- topic spectra ------------------------------------------------------
  el("h2", undefined, left).textContent = "topic spectra";
  const spectraBox = el("div", "spectra", left);
  const k = app.config?.K ?? 0;
  for (let topic = 0; topic < k; topic++) {
    const wrap = el("div", "spectrum-wrap", spectraBox);
    const label = el("div", "spectrum-label", wrap);
    const [, ctx] = canvas(wrap, 240, 70, "spectrum");
    app.api.spectrum(topic).then((payload) => {
      label.textContent = `topic ${topic}`;
      label.style.borderLeft = `12px solid ${payload.color}`;
      if (ctx) drawSpectrum(ctx, payload, { width: 240, height: 70 });
    });
    wrap.onclick = () => app.toggleTopic(topic, k);
  }

  // --- stripes + brush ---------------------------------------------------
  el("h2", undefined, middle).textContent = "topic view (brush to search)";
  const stripesWrap = el("div", "stripes-wrap", middle);
  const geom = DEFAULT_GEOMETRY;
  let stripesHeightPx = 80;
  const [stripesCanvas, stripesCtx] = canvas(stripesWrap, geom.width, stripesHeightPx, "stripes");
  const brushOverlay = el("div", "brush-overlay", stripesWrap);
  const axis = el("div", "axis", middle);

  async function redrawStripes() {
    const rid = app.store.state.selectedRecord;
    if (!rid || !stripesCtx) return;
    const series = await app.series(rid);
    stripesHeightPx = stripesHeight(series.K, geom);
    stripesCanvas.height = stripesHeightPx;
    stripesCtx.clearRect(0, 0, geom.width, stripesHeightPx);
    drawStripes(stripesCtx, series, geom);
    const summary = app.summary(rid)!;
    axis.textContent = `0 s .. ${summary.duration_s.toFixed(0)} s `
      + `(${summary.n_windows} windows)`;
    const brush = app.store.state.brush;
    if (brush) {
      const x0 = windowToPx(brush.startIndex, series.weights.length, geom);
      const x1 = windowToPx(brush.startIndex + brush.length, series.weights.length, geom);
      brushOverlay.style.left = `${x0}px`;
      brushOverlay.style.width = `${x1 - x0}px`;
      brushOverlay.style.display = "block";
    } else {
      brushOverlay.style.display = "none";
    }
  }

  let dragStart: number | null = null;
  stripesCanvas.onpointerdown = (ev) => {
    const rect = stripesCanvas.getBoundingClientRect();
    dragStart = ev.clientX - rect.left;
  };
  stripesCanvas.onpointerup = async (ev) => {
    if (dragStart === null) return;
    const rect = stripesCanvas.getBoundingClientRect();
    const x1 = ev.clientX - rect.left;
    const rid = app.store.state.selectedRecord;
    const summary = rid ? app.summary(rid) : undefined;
    dragStart = Math.min(dragStart, x1);
    if (summary && Math.abs(x1 - dragStart) > 2) {
      const t0 = pxToTime(Math.min(dragStart, x1), 0, summary.duration_s, geom.width);
      const t1 = pxToTime(Math.max(dragStart, x1), 0, summary.duration_s, geom.width);
      await app.brushSeconds(t0, t1);
    }
    dragStart = null;
  };

  // --- search results ------------------------------------------------------
  el("h2", undefined, middle).textContent = "search results";
  const resultsBox = el("div", "results", middle);

  async function redrawResults() {
    resultsBox.innerHTML = "";
    const results = app.store.searchResults;
    const state = app.store.state;
    if (!results || !state.brush) return;
    const pxPerWindow = geom.width /
      (app.summary(state.selectedRecord!)?.n_windows ?? 1);
    const queryPx = state.brush.startIndex * pxPerWindow;
    const layouts = alignThumbnails(state.brush.startIndex, state.brush.length,
                                    results.hits, pxPerWindow, queryPx);
    for (let i = 0; i < results.hits.length; i++) {
      const hit = results.hits[i];
      const row = el("div", "hit-row", resultsBox);
      const eye = el("button", "eye", row);
      eye.textContent = "\u{1F441}";
      eye.title = `${hit.record_id} rank ${i + 1} distance ${hit.distance.toFixed(4)} `
        + `time ${hit.start_s.toFixed(2)}..${hit.end_s.toFixed(2)} s`;
      eye.onclick = () => app.inspectHit(hit);
      const thumbWrap = el("div", "thumb-wrap", row);
      const series = await app.series(hit.record_id);
      const thumbGeom = { ...geom, rowHeight: 6, gap: 1 };
      const [thumb, thumbCtx] = canvas(thumbWrap, geom.width,
                                       stripesHeight(series.K, thumbGeom), "thumb");
      if (thumbCtx) {
        // every thumbnail shares the query record's horizontal scale
        drawStripes(thumbCtx, series, thumbGeom, layouts[i].translatePx, pxPerWindow);
        thumbCtx.fillStyle = "rgba(0,0,0,0.15)";
        thumbCtx.fillRect(layouts[i].segmentStartPx, 0,
                          layouts[i].segmentWidthPx, thumb.height);
      }
      const label = el("div", "hit-label", row);
      label.textContent = `${hit.record_id} @ ${hit.start_s.toFixed(2)} s `
        + `(d=${hit.distance.toFixed(4)})`;
    }
  }

  // --- details view -------------------------------------------------------
  el("h2", undefined, right).textContent = "details";
  const controls = el("div", "detail-controls", right);
  const attrSelect = el("select", undefined, controls);
  for (const attr of ["acceleration", "shear", "diaphragm_force", "moment",
                      "drift_ratio", "interstory_drift_ratio"]) {
    const option = el("option", undefined, attrSelect);
    option.value = attr;
    option.textContent = attr;
  }
  attrSelect.value = app.store.state.detailAttribute;
  attrSelect.onchange = () => app.setDetailAttribute(attrSelect.value);

  const cmToggle = el("button", undefined, controls);
  const threshold = el("input", undefined, controls);
  threshold.type = "range";
  threshold.min = "0";
  threshold.max = "1";
  threshold.step = "0.05";
  threshold.value = String(app.store.state.threshold);
  threshold.oninput = () =>
    app.setColormap(app.store.state.colormap, Number(threshold.value));
  cmToggle.onclick = () => app.setColormap(
    app.store.state.colormap === "continuous" ? "discrete" : "continuous");

  const overviewGeom = { width: 360, height: 70 };
  const [overviewCanvas, overviewCtx] = canvas(right, overviewGeom.width,
                                               overviewGeom.height, "overview");
  const zoomOverlay = el("div", "zoom-overlay", right);
  const areaGeom = { width: 360, height: 60 };
  const [, areaCtx] = canvas(right, areaGeom.width, areaGeom.height, "area");
  const heatGeom = { width: 360, height: 220 };
  const [, heatCtx] = canvas(right, heatGeom.width, heatGeom.height, "heatmap");

  let overviewDrag: number | null = null;
  overviewCanvas.onpointerdown = (ev) => {
    const rect = overviewCanvas.getBoundingClientRect();
    overviewDrag = ev.clientX - rect.left;
  };
  overviewCanvas.onpointerup = (ev) => {
    if (overviewDrag === null) return;
    const rid = app.store.state.detailRecord ?? app.store.state.selectedRecord;
    const summary = rid ? app.summary(rid) : undefined;
    const rect = overviewCanvas.getBoundingClientRect();
    const x1 = ev.clientX - rect.left;
    if (summary && Math.abs(x1 - overviewDrag) > 2) {
      const t0 = pxToTime(Math.min(overviewDrag, x1), 0, summary.duration_s,
                          overviewGeom.width);
      const t1 = pxToTime(Math.max(overviewDrag, x1), 0, summary.duration_s,
                          overviewGeom.width);
      app.store.update({ detailZoom: [t0, t1] });
    }
    overviewDrag = null;
  };

  async function redrawDetails() {
    const state = app.store.state;
    const rid = state.detailRecord ?? state.selectedRecord;
    if (!rid) return;
    cmToggle.textContent = `colormap: ${state.colormap}`;
    const overview = await app.api.groundAccel(rid, overviewGeom.width);
    if (overviewCtx) drawEnvelope(overviewCtx, overview, overviewGeom);
    const summary = app.summary(rid)!;
    const zoom = state.detailZoom ?? [0, summary.duration_s];
    const x0 = timeToPx(zoom[0], 0, summary.duration_s, overviewGeom.width);
    const x1 = timeToPx(zoom[1], 0, summary.duration_s, overviewGeom.width);
    zoomOverlay.style.left = `${x0}px`;
    zoomOverlay.style.width = `${Math.max(2, x1 - x0)}px`;
    const [zoomStart, zoomEnd] = zoom;
    const area = await app.api.groundAccel(rid, areaGeom.width, zoomStart, zoomEnd);
    if (areaCtx) drawArea(areaCtx, area, areaGeom);
    const heat = await app.api.heatmap(rid, state.detailAttribute,
                                       heatGeom.width, zoomStart, zoomEnd);
    if (heatCtx) drawHeatmap(heatCtx, heat, heatGeom, state.colormap, state.threshold);
  }

  // --- store wiring ---------------------------------------------------------
  function redrawMatrix() {
    if (app.matrix && matrixCtx) {
      drawMatrix(matrixCtx, app.matrix, matrixGeom, app.highlightedRecordIds());
    }
  }

  app.store.subscribe(() => {
    location.hash = app.urlHash;
    void redrawStripes();
    void redrawResults();
    void redrawDetails();
    redrawMatrix();
  });
  window.addEventListener("hashchange", () => {
    if (location.hash.slice(1) !== app.urlHash) {
      app.restore(location.hash.slice(1));
    }
  });

  app.store.update({});   // first paint
}

void boot();

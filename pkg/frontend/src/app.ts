/** Application controller: owns the store, talks to the API, and exposes
 * the interactions the views bind to.  All pipeline math stays on the
 * server; this layer only maps coordinates and colors.
 */

import type { Backend, SearchRequestBody } from "./api.js";
import { brushToWindows, windowsToSeconds } from "./scales.js";
import { Store, decodeState, encodeState, type ViewState } from "./state.js";
import type {
  MatrixPayload,
  PipelineConfigPayload,
  RecordSummary,
  SearchResponse,
  TopicSeriesPayload,
} from "./types.js";

export class App {
  readonly store: Store;
  records: RecordSummary[] = [];
  config: PipelineConfigPayload | null = null;
  matrix: MatrixPayload | null = null;
  private seriesCache = new Map<string, TopicSeriesPayload>();
  lastSearchRequest: SearchRequestBody | null = null;

  constructor(readonly api: Backend, initialHash = "") {
    this.store = new Store(initialHash ? decodeState(initialHash) : undefined);
  }

  async load(): Promise<void> {
    [this.records, this.config] = await Promise.all([
      this.api.records(),
      this.api.config(),
    ]);
    try {
      this.matrix = await this.api.matrix();
    } catch {
      this.matrix = null; // single-record sessions have no matrix
    }
    if (!this.store.state.selectedRecord && this.records.length) {
      this.store.update({ selectedRecord: this.records[0].id });
    }
  }

  async series(recordId: string): Promise<TopicSeriesPayload> {
    const cached = this.seriesCache.get(recordId);
    if (cached) return cached;
    const payload = await this.api.topicSeries(recordId);
    this.seriesCache.set(recordId, payload);
    return payload;
  }

  summary(recordId: string): RecordSummary | undefined {
    return this.records.find((r) => r.id === recordId);
  }

  get urlHash(): string {
    return encodeState(this.store.state);
  }

  restore(hash: string): void {
    this.store.update(decodeState(hash));
  }

  /** Brush on the topic view, in seconds of the selected record. */
  async brushSeconds(startS: number, endS: number): Promise<SearchResponse | null> {
    const state = this.store.state;
    if (!state.selectedRecord || !this.config) return null;
    const summary = this.summary(state.selectedRecord);
    if (!summary) return null;
    const sel = brushToWindows(startS, endS, this.config.hop_s, summary.n_windows);
    if (!sel) return null;
    this.store.update({ brush: sel });
    return this.runSearch();
  }

  /** Re-issue the search for the current brush and topic mask. */
  async runSearch(): Promise<SearchResponse | null> {
    const state = this.store.state;
    if (!state.selectedRecord || !state.brush) return null;
    const body: SearchRequestBody = {
      record_id: state.selectedRecord,
      start_index: state.brush.startIndex,
      length: state.brush.length,
      topic_mask: state.selectedTopics,
      top_n: 10,
    };
    this.lastSearchRequest = body;
    try {
      const response = await this.api.search(body);
      this.store.searchResults = response;
      this.store.update({});   // notify views
      return response;
    } catch (err) {
      if ((err as Error).name === "AbortError") return null;
      throw err;
    }
  }

  /** Brushed selection expressed in seconds (for the details view link). */
  brushAsSeconds(): [number, number] | null {
    const state = this.store.state;
    if (!state.brush || !this.config) return null;
    return windowsToSeconds(state.brush, this.config.hop_s);
  }

  toggleTopic(k: number, total: number): void {
    const current = this.store.state.selectedTopics;
    let next: number[] | null;
    if (current === null) {
      next = [k];                       // from "all" to just k
    } else if (current.includes(k)) {
      next = current.filter((t) => t !== k);
      if (next.length === 0 || next.length === total) next = null;
    } else {
      next = [...current, k].sort((a, b) => a - b);
      if (next.length === total) next = null;
    }
    this.store.update({ selectedTopics: next });
  }

  /** Eye icon on a search hit: jump the details view to the hit's span. */
  inspectHit(hit: { record_id: string; start_s: number; end_s: number }): void {
    this.store.update({
      detailRecord: hit.record_id,
      detailZoom: [hit.start_s, hit.end_s],
    });
  }

  /** Matrix cell click: select the pair and load both records' stripes. */
  async selectMatrixCell(i: number, j: number): Promise<[TopicSeriesPayload, TopicSeriesPayload] | null> {
    if (!this.matrix) return null;
    const a = this.matrix.ids[i];
    const b = this.matrix.ids[j];
    this.store.update({ matrixCell: [i, j], selectedRecord: a, detailRecord: b });
    return Promise.all([this.series(a), this.series(b)]);
  }

  highlightedRecordIds(): Set<string> {
    const hits = this.store.searchResults?.hits ?? [];
    return new Set(hits.map((h) => h.record_id));
  }

  setDetailAttribute(attribute: string): void {
    this.store.update({ detailAttribute: attribute });
  }

  setColormap(mode: ViewState["colormap"], threshold?: number): void {
    this.store.update({
      colormap: mode,
      ...(threshold !== undefined ? { threshold } : {}),
    });
  }
}

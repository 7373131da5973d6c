/** Thin typed client over the backend API.
 *
 * Search requests are cancellable: issuing a new search aborts the one in
 * flight, so a fast sequence of brushes settles on the latest selection.
 */

import type {
  GroundAccelPayload,
  HeatmapPayload,
  MatrixPayload,
  PipelineConfigPayload,
  RecordSummary,
  SearchResponse,
  SpectrumPayload,
  TopicSeriesPayload,
} from "./types.js";

export interface SearchRequestBody {
  record_id: string;
  start_index: number;
  length: number;
  topic_mask: number[] | null;
  top_n: number;
}

/** What the app needs from a backend; ApiClient is the HTTP implementation. */
export interface Backend {
  records(): Promise<RecordSummary[]>;
  config(): Promise<PipelineConfigPayload>;
  topicSeries(recordId: string): Promise<TopicSeriesPayload>;
  spectrum(k: number): Promise<SpectrumPayload>;
  matrix(): Promise<MatrixPayload>;
  heatmap(recordId: string, attribute: string, width?: number,
          startS?: number, endS?: number): Promise<HeatmapPayload>;
  groundAccel(recordId: string, width?: number,
              startS?: number, endS?: number): Promise<GroundAccelPayload>;
  search(body: SearchRequestBody): Promise<SearchResponse>;
}

export class ApiClient implements Backend {
  private searchController: AbortController | null = null;

  constructor(readonly baseUrl: string = "") {}

  private async getJson<T>(path: string): Promise<T> {
    const resp = await fetch(this.baseUrl + path);
    if (!resp.ok) {
      throw new Error(`GET ${path} -> ${resp.status}`);
    }
    return (await resp.json()) as T;
  }

  records(): Promise<RecordSummary[]> {
    return this.getJson("/api/records");
  }

  config(): Promise<PipelineConfigPayload> {
    return this.getJson("/api/config");
  }

  topicSeries(recordId: string): Promise<TopicSeriesPayload> {
    return this.getJson(`/api/records/${encodeURIComponent(recordId)}/topic-series`);
  }

  spectrum(k: number): Promise<SpectrumPayload> {
    return this.getJson(`/api/topics/${k}/spectrum`);
  }

  matrix(): Promise<MatrixPayload> {
    return this.getJson("/api/matrix");
  }

  heatmap(recordId: string, attribute: string, width = 1024,
          startS?: number, endS?: number): Promise<HeatmapPayload> {
    const params = new URLSearchParams({ attribute, width: String(width) });
    if (startS !== undefined) params.set("start_s", String(startS));
    if (endS !== undefined) params.set("end_s", String(endS));
    return this.getJson(
      `/api/records/${encodeURIComponent(recordId)}/heatmap?${params}`);
  }

  groundAccel(recordId: string, width = 1024,
              startS?: number, endS?: number): Promise<GroundAccelPayload> {
    const params = new URLSearchParams({ width: String(width) });
    if (startS !== undefined) params.set("start_s", String(startS));
    if (endS !== undefined) params.set("end_s", String(endS));
    return this.getJson(
      `/api/records/${encodeURIComponent(recordId)}/ground-accel?${params}`);
  }

  /** POST a search; aborts any search still in flight. */
  async search(body: SearchRequestBody): Promise<SearchResponse> {
    this.searchController?.abort();
    const controller = new AbortController();
    this.searchController = controller;
    const resp = await fetch(this.baseUrl + "/api/search", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
      signal: controller.signal,
    });
    if (!resp.ok) {
      throw new Error(`POST /api/search -> ${resp.status}`);
    }
    return (await resp.json()) as SearchResponse;
  }
}

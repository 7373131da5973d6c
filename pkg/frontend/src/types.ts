/** Payload shapes of the backend JSON API (schema version 1). */

export interface RecordSummary {
  id: string;
  duration_s: number;
  n_channels: number;
  n_windows: number;
}

export interface TopicSeriesPayload {
  record_id: string;
  times_s: number[];
  weights: number[][]; // T x K, rows sum to 1
  K: number;
  colors: string[];
}

export interface SpectrumPayload {
  k: number;
  grid: number[][]; // channels x bins, in [0, 1]
  bin_edges_hz: number[];
  channel_labels: string[];
  color: string;
}

export interface SearchQueryEcho {
  record_id: string;
  start_index: number;
  length: number;
  topic_mask: number[] | null;
  start_s: number;
  end_s: number;
}

export interface SearchHitPayload {
  record_id: string;
  offset: number;
  length: number;
  distance: number;
  start_s: number;
  end_s: number;
  align_shift_windows: number;
}

export interface SearchResponse {
  query: SearchQueryEcho;
  hits: SearchHitPayload[];
  skipped: { record_id: string; reason: string }[];
}

export interface MatrixPayload {
  ids: string[];
  values: number[][];
  display_order: number[];
  dendrogram: [number, number, number][];
}

export interface HeatmapPayload {
  record_id: string;
  attribute: string;
  floors: number[];
  times_s: number[];
  values: number[][]; // buckets x floors, signed
}

export interface GroundAccelPayload {
  record_id: string;
  times_s: number[];
  min: number[];
  max: number[];
}

export interface PipelineConfigPayload {
  window_s: number;
  hop_s: number;
  f_max_hz: number;
  m: number;
  K: number;
  [key: string]: unknown;
}

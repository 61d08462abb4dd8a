// Payload types mirroring the service's documented JSON bodies (docs/api.md).

export type FeatureKind = "general" | "extract" | "comprehend" | "inverse";

export interface SourceSpan {
  seq: number;
  char_start: number;
  char_end: number;
}

export interface TablePayload {
  dsl: string;
  columns: string[];
  rows: (string | number)[][];
}

export interface ChatTurn {
  session_id: string;
  query: string;
  routed_kind: FeatureKind;
  answer: string;
  sources: SourceSpan[] | null;
  payload: TablePayload | null;
  timing_ms: number;
}

export interface CompositionEntry {
  species: string;
  wt_pct: number;
}

export interface FeedEntry {
  gas: string;
  vol_pct: number;
}

export interface InverseReport {
  format_version: number;
  composition: CompositionEntry[];
  conversion_pct: number;
  uncertainty_pct: number;
  equilibrium_conversion_pct: number;
  temperature_c: number;
  prep_method: string;
  feed: FeedEntry[];
  time_on_stream_h: number;
  w_f_ratio: number;
  narrative: string;
  narrative_truncated: boolean;
  narrative_degraded: boolean;
  iterations_used: number;
}

export type JobStatus = "queued" | "running" | "finished" | "failed";

export interface JobSnapshot {
  job_id: string;
  status: JobStatus;
  progress: { done: number; total: number };
  result: InverseReport | null;
  error: string | null;
}

export interface CatalogResponse {
  catalog: {
    base_metals: Record<string, string>;
    supports: Record<string, string>;
    promoters: Record<string, string>;
    prep_methods: Record<string, string>;
  };
  dimensions: string[];
  default_bounds: Record<string, [number, number]>;
}

export interface ParameterSettings {
  base_metal: string;
  support: string;
  promoter?: string | null;
  prep_method: string;
  temperature_range: [number, number];
  bound_overrides?: Record<string, [number, number]>;
}

export interface ApiError {
  code: string;
  message: string;
}

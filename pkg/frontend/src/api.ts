// Typed client for the service's REST endpoints. All server interaction
// goes through this module; the fetch implementation is injectable so
// tests can stub the wire.

import type {
  CatalogResponse,
  ChatTurn,
  JobSnapshot,
  ParameterSettings,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiFailure extends Error {
  constructor(public code: string, message: string, public status: number) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiFailure> {
  try {
    const body = await response.json();
    return new ApiFailure(body.code ?? "http_error",
      body.message ?? response.statusText, response.status);
  } catch {
    return new ApiFailure("http_error", response.statusText, response.status);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (input, init) => globalThis.fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  chat(sessionId: string, query: string): Promise<ChatTurn> {
    return this.request<ChatTurn>("/api/v1/chat", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ session_id: sessionId, query }),
    });
  }

  catalog(): Promise<CatalogResponse> {
    return this.request<CatalogResponse>("/api/v1/catalog");
  }

  submitJob(settings: ParameterSettings): Promise<{ job_id: string }> {
    return this.request<{ job_id: string }>("/api/v1/inverse/jobs", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(settings),
    });
  }

  pollJob(jobId: string): Promise<JobSnapshot> {
    return this.request<JobSnapshot>(`/api/v1/inverse/jobs/${jobId}`);
  }

  health(): Promise<{ llm: string; index: string; articles: number }> {
    return this.request("/api/v1/health");
  }
}

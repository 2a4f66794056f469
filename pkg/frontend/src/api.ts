/** Typed client for the scoring/curation HTTP API. Every lexicon mutation
 * in the UI goes through this client; there is no privileged channel. */

import type {
  AnnotationRequest,
  AnnotationResponse,
  HealthResponse,
  LexiconResponse,
  ScoreRecord,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(`API error ${status}`);
  }
}

/** 409: someone else annotated first; refetch at currentVersion and retry. */
export class ConflictError extends ApiError {
  constructor(
    detail: unknown,
    readonly currentVersion: number,
  ) {
    super(409, detail);
  }
}

export interface LexiconFilters {
  lang?: string;
  status?: string;
  q?: string;
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.base}${path}`, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      if (response.status === 409) {
        const detail = (body as { detail?: { current_version?: number } })?.detail;
        throw new ConflictError(detail, detail?.current_version ?? -1);
      }
      throw new ApiError(response.status, (body as { detail?: unknown })?.detail ?? body);
    }
    return body as T;
  }

  score(text: string): Promise<ScoreRecord> {
    return this.request<ScoreRecord>("/v1/score", {
      method: "POST",
      body: JSON.stringify({ text }),
    });
  }

  lexicon(filters: LexiconFilters = {}): Promise<LexiconResponse> {
    const params = new URLSearchParams();
    if (filters.lang) params.set("lang", filters.lang);
    if (filters.status) params.set("status", filters.status);
    if (filters.q) params.set("q", filters.q);
    const query = params.toString();
    return this.request<LexiconResponse>(`/v1/lexicon${query ? `?${query}` : ""}`);
  }

  candidates(): Promise<LexiconResponse> {
    return this.request<LexiconResponse>("/v1/candidates");
  }

  putAnnotation(entryId: string, body: AnnotationRequest): Promise<AnnotationResponse> {
    return this.request<AnnotationResponse>(
      `/v1/lexicon/${encodeURIComponent(entryId)}/annotation`,
      { method: "PUT", body: JSON.stringify(body) },
    );
  }

  health(): Promise<HealthResponse> {
    return this.request<HealthResponse>("/v1/health");
  }
}

/** Thin typed wrapper over the documented HTTP API; fetch is injectable so
 *  tests can replay recorded responses. */

export type FetchLike = (
  input: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(`server returned ${status}`);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = fetch,
  ) {}

  private async post(path: string, payload: unknown): Promise<unknown> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    const body = await response.json();
    if (!response.ok) throw new ApiError(response.status, body);
    return body;
  }

  private async get(path: string): Promise<unknown> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`);
    const body = await response.json();
    if (!response.ok) throw new ApiError(response.status, body);
    return body;
  }

  ingest(content: string): Promise<unknown> {
    return this.post("/ingest", { content });
  }

  createSession(readerId: string): Promise<unknown> {
    return this.post("/sessions", { reader_id: readerId });
  }

  query(sessionId: string, text: string): Promise<unknown> {
    return this.post(`/sessions/${sessionId}/query`, { text });
  }

  refine(sessionId: string, facet: string): Promise<unknown> {
    return this.post(`/sessions/${sessionId}/refine`, { facet });
  }

  collapse(sessionId: string, option: string): Promise<unknown> {
    return this.post(`/sessions/${sessionId}/collapse`, { option });
  }

  sessionView(sessionId: string): Promise<unknown> {
    return this.get(`/sessions/${sessionId}`);
  }

  stats(): Promise<unknown> {
    return this.get("/stats");
  }
}

import {
  CommitResponse,
  MarkerIn,
  PreviewResponse,
  PutMarkersResponse,
  SessionDoc,
  SessionSummary,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the session service JSON API. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = await resp.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  listSessions(): Promise<SessionSummary[]> {
    return this.request<SessionSummary[]>("/sessions");
  }

  getSession(id: string): Promise<SessionDoc> {
    return this.request<SessionDoc>(`/sessions/${encodeURIComponent(id)}`);
  }

  putMarkers(id: string, markers: MarkerIn[]): Promise<PutMarkersResponse> {
    return this.request<PutMarkersResponse>(`/sessions/${encodeURIComponent(id)}/markers`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ markers }),
    });
  }

  getPreview(id: string, pci: boolean): Promise<PreviewResponse> {
    const query = pci ? "?pci=true" : "";
    return this.request<PreviewResponse>(`/sessions/${encodeURIComponent(id)}/preview${query}`);
  }

  commit(id: string): Promise<CommitResponse> {
    return this.request<CommitResponse>(`/sessions/${encodeURIComponent(id)}/commit`, {
      method: "POST",
    });
  }
}

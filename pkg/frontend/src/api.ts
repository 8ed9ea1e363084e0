/**
 * HTTP client for the tile-assembly session service.
 *
 * Reads return both the parsed body and the exact response text. The UI keeps
 * the text alongside the parse so that "what the browser displays" is
 * provably the server's bytes, not a client-side reconstruction.
 */

import type {
  ApiErrorBody,
  ApiErrorDetail,
  AssemblyResponse,
  AttachResponse,
  ConstrainedResponse,
  FrontierResponse,
  MovieResponse,
  PlacementObj,
  SessionInfo,
  SplicePreviewRequest,
  SplicePreviewResponse,
  SystemDocumentObj,
  UndoResponse,
  WindowObj,
} from './types.js';

/** Injectable fetch, so tests can swap in a scripted transport. */
export type Fetcher = (url: string, init?: RequestInit) => Promise<Response>;

/** A server response held two ways: the exact bytes and their parse. */
export interface Snapshot<T> {
  /** The response body exactly as received, byte for byte. */
  text: string;
  /** `JSON.parse(text)` — convenience only, never re-serialized for display. */
  body: T;
}

/** A non-2xx service response, surfaced with its machine-readable detail. */
export class ApiError extends Error {
  readonly status: number;
  readonly detail: ApiErrorDetail;

  constructor(status: number, detail: ApiErrorDetail) {
    super(`${detail.kind}: ${detail.message}`);
    this.name = 'ApiError';
    this.status = status;
    this.detail = detail;
  }
}

// ---------------------------------------------------------------------------
// Client
// ---------------------------------------------------------------------------

export class SessionApi {
  private readonly baseUrl: string;
  private readonly fetcher: Fetcher;

  constructor(baseUrl: string, fetcher: Fetcher = fetch) {
    this.baseUrl = baseUrl.replace(/\/+$/, '');
    this.fetcher = fetcher;
  }

  // -- session lifecycle ----------------------------------------------------

  createSession(system: SystemDocumentObj): Promise<SessionInfo> {
    return this.post<SessionInfo>('/sessions', { system });
  }

  deleteSession(sessionId: string): Promise<{ deleted: string }> {
    return this.request<{ deleted: string }>(`/sessions/${sessionId}`, {
      method: 'DELETE',
    });
  }

  // -- reads (raw bytes retained) -------------------------------------------

  assembly(sessionId: string): Promise<Snapshot<AssemblyResponse>> {
    return this.getSnapshot<AssemblyResponse>(`/sessions/${sessionId}/assembly`);
  }

  frontier(sessionId: string): Promise<Snapshot<FrontierResponse>> {
    return this.getSnapshot<FrontierResponse>(`/sessions/${sessionId}/frontier`);
  }

  constrained(sessionId: string): Promise<Snapshot<ConstrainedResponse>> {
    return this.getSnapshot<ConstrainedResponse>(
      `/sessions/${sessionId}/constrained`,
    );
  }

  /** The session's trace as a `trace/1` document, returned as raw text. */
  async trace(sessionId: string): Promise<string> {
    const response = await this.fetcher(
      `${this.baseUrl}/sessions/${sessionId}/trace`,
    );
    const text = await response.text();
    if (!response.ok) {
      throw new ApiError(response.status, parseErrorDetail(text));
    }
    return text;
  }

  // -- mutations and inspections --------------------------------------------

  attach(
    sessionId: string,
    placement: PlacementObj,
    revision?: number,
  ): Promise<AttachResponse> {
    const body: Record<string, unknown> = { placement };
    if (revision !== undefined) body['revision'] = revision;
    return this.post<AttachResponse>(`/sessions/${sessionId}/attach`, body);
  }

  undo(sessionId: string, revision?: number): Promise<UndoResponse> {
    const body: Record<string, unknown> = {};
    if (revision !== undefined) body['revision'] = revision;
    return this.post<UndoResponse>(`/sessions/${sessionId}/undo`, body);
  }

  movie(sessionId: string, window: WindowObj): Promise<MovieResponse> {
    return this.post<MovieResponse>(`/sessions/${sessionId}/movie`, { window });
  }

  splicePreview(
    sessionId: string,
    request: SplicePreviewRequest,
  ): Promise<SplicePreviewResponse> {
    return this.post<SplicePreviewResponse>(
      `/sessions/${sessionId}/splice-preview`,
      request,
    );
  }

  // -- transport ------------------------------------------------------------

  private async getSnapshot<T>(path: string): Promise<Snapshot<T>> {
    const response = await this.fetcher(this.baseUrl + path);
    const text = await response.text();
    if (!response.ok) {
      throw new ApiError(response.status, parseErrorDetail(text));
    }
    return { text, body: JSON.parse(text) as T };
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  private async request<T>(path: string, init: RequestInit): Promise<T> {
    const response = await this.fetcher(this.baseUrl + path, init);
    const text = await response.text();
    if (!response.ok) {
      throw new ApiError(response.status, parseErrorDetail(text));
    }
    return JSON.parse(text) as T;
  }
}

/** Best-effort decode of an error body into its `detail` object. */
function parseErrorDetail(text: string): ApiErrorDetail {
  try {
    const body = JSON.parse(text) as ApiErrorBody;
    if (body && typeof body.detail === 'object' && body.detail !== null) {
      return body.detail;
    }
  } catch {
    // fall through to the opaque wrapper below
  }
  return { kind: 'http-error', message: text };
}

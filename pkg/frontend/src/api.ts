// Typed client for the review service. fetch is injectable for tests;
// failed submissions are queued locally and flushed on demand, so a
// network blip never loses a review.

import type {
  Mode,
  OpenSessionResponse,
  QueueItem,
  RequestView,
  Role,
  SubmitBody,
  SubmitResponse,
} from './types.js';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

interface QueuedSubmit {
  sessionId: string;
  body: SubmitBody;
}

export class ApiClient {
  private pending: QueuedSubmit[] = [];

  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  get pendingSubmits(): number {
    return this.pending.length;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      headers: { 'Content-Type': 'application/json' },
      ...init,
    });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const payload = await response.json();
        if (payload && typeof payload.detail === 'string') detail = payload.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  queue(state = 'pending'): Promise<QueueItem[]> {
    return this.request(`/requests?state=${encodeURIComponent(state)}`);
  }

  openSession(role: Role, requestId: string, mode: Mode, user = ''): Promise<OpenSessionResponse> {
    return this.request('/sessions', {
      method: 'POST',
      body: JSON.stringify({ role, request_id: requestId, mode, user }),
    });
  }

  // In manual mode the same endpoint returns the conversation only; the
  // caller decides whether suggestion data may be fetched at all.
  requestView(requestId: string, sessionId: string): Promise<RequestView> {
    return this.request(
      `/requests/${encodeURIComponent(requestId)}/suggestion?session_id=${encodeURIComponent(sessionId)}`,
    );
  }

  markInteraction(sessionId: string): Promise<unknown> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}/interaction`, {
      method: 'POST',
    });
  }

  async submit(sessionId: string, body: SubmitBody): Promise<SubmitResponse> {
    try {
      return await this.doSubmit(sessionId, body);
    } catch (error) {
      if (error instanceof ApiError) throw error; // server rejected: do not queue
      this.pending.push({ sessionId, body });
      throw error;
    }
  }

  private doSubmit(sessionId: string, body: SubmitBody): Promise<SubmitResponse> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}/submit`, {
      method: 'POST',
      body: JSON.stringify(body),
    });
  }

  // Retry queued offline submissions, keeping whatever still fails.
  async flush(): Promise<SubmitResponse[]> {
    const queued = this.pending;
    this.pending = [];
    const delivered: SubmitResponse[] = [];
    for (const item of queued) {
      try {
        delivered.push(await this.doSubmit(item.sessionId, item.body));
      } catch (error) {
        if (!(error instanceof ApiError)) {
          this.pending.push(item);
        }
      }
    }
    return delivered;
  }
}

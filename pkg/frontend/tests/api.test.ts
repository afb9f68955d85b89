import { describe, expect, it } from 'vitest';

import { ApiClient, ApiError } from '../src/api.js';
import type { SubmitBody } from '../src/types.js';

const SUBMIT: SubmitBody = { decisions: { escalate: true }, edits: [], client_active_ms: 10 };

function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

describe('ApiClient', () => {
  it('performs typed GETs', async () => {
    const calls: string[] = [];
    const client = new ApiClient('http://svc', async (url) => {
      calls.push(url);
      return jsonResponse([{ id: 'R1', subject: 's' }]);
    });
    const queue = await client.queue();
    expect(queue[0].id).toBe('R1');
    expect(calls).toEqual(['http://svc/requests?state=pending']);
  });

  it('raises ApiError with the server detail on 4xx', async () => {
    const client = new ApiClient('http://svc', async () =>
      jsonResponse({ detail: 'title exceeds the 11-word cap' }, 422),
    );
    await expect(client.submit('S1', SUBMIT)).rejects.toThrowError(ApiError);
    expect(client.pendingSubmits).toBe(0); // rejected submissions are not retried
  });

  it('queues offline submissions and flushes them later', async () => {
    let online = false;
    const delivered: string[] = [];
    const client = new ApiClient('http://svc', async (url) => {
      if (!online) throw new TypeError('fetch failed');
      delivered.push(url);
      return jsonResponse({ session_id: 'S1', duration_seconds: 1, edits: [], request_state: 'done' });
    });

    await expect(client.submit('S1', SUBMIT)).rejects.toThrow('fetch failed');
    expect(client.pendingSubmits).toBe(1);

    online = true;
    const flushed = await client.flush();
    expect(flushed).toHaveLength(1);
    expect(client.pendingSubmits).toBe(0);
    expect(delivered).toEqual(['http://svc/sessions/S1/submit']);
  });

  it('keeps still-failing submissions queued across flushes', async () => {
    const client = new ApiClient('http://svc', async () => {
      throw new TypeError('fetch failed');
    });
    await expect(client.submit('S1', SUBMIT)).rejects.toThrow();
    await client.flush();
    expect(client.pendingSubmits).toBe(1);
  });
});

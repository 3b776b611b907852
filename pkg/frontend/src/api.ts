/** Typed client for the annotation service's HTTP/JSON API. */

import type { AnalysisRecord, SessionConfig, UiStroke } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ServiceError";
  }
}

async function expect(resp: Response, status: number): Promise<Response> {
  if (resp.status !== status) {
    let detail = resp.statusText;
    try {
      const body = (await resp.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      /* non-JSON error body */
    }
    throw new ServiceError(resp.status, detail);
  }
  return resp;
}

export class ServiceClient {
  constructor(
    readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async healthz(): Promise<boolean> {
    try {
      const resp = await this.fetchFn(`${this.base}/healthz`);
      return resp.status === 200;
    } catch {
      return false;
    }
  }

  async createSession(config: SessionConfig): Promise<string> {
    const resp = await expect(
      await this.fetchFn(`${this.base}/sessions`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(config),
      }),
      201,
    );
    const body = (await resp.json()) as { session_id: string };
    return body.session_id;
  }

  /** Returns the server-side stroke count after the append. */
  async addStroke(sessionId: string, stroke: UiStroke): Promise<number> {
    const resp = await expect(
      await this.fetchFn(`${this.base}/sessions/${sessionId}/strokes`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(stroke),
      }),
      201,
    );
    const body = (await resp.json()) as { stroke_count: number };
    return body.stroke_count;
  }

  async analysis(sessionId: string): Promise<AnalysisRecord> {
    const resp = await expect(
      await this.fetchFn(`${this.base}/sessions/${sessionId}/analysis`),
      200,
    );
    return (await resp.json()) as AnalysisRecord;
  }

  attentionMapUrl(sessionId: string): string {
    return `${this.base}/sessions/${sessionId}/attention-map`;
  }

  async attentionMapPng(sessionId: string): Promise<ArrayBuffer> {
    const resp = await expect(await this.fetchFn(this.attentionMapUrl(sessionId)), 200);
    return resp.arrayBuffer();
  }

  /** The session as a split document (canonical JSON text). */
  async exportSplit(sessionId: string, snapshot = false): Promise<string> {
    const url = `${this.base}/sessions/${sessionId}/export${snapshot ? "?snapshot=true" : ""}`;
    const resp = await expect(await this.fetchFn(url), 200);
    return resp.text();
  }
}

/**
 * Stroke submission with offline buffering: strokes that fail to post are
 * kept, in order, and the UI shows a retry banner until flushed.
 */
export class StrokeOutbox {
  readonly pending: UiStroke[] = [];

  constructor(
    private readonly client: ServiceClient,
    public sessionId: string,
  ) {}

  get hasPending(): boolean {
    return this.pending.length > 0;
  }

  /**
   * Post one stroke. Returns true when the service accepted it; on network
   * failure the stroke is buffered locally and false is returned. Strokes
   * never post out of order: while any stroke is buffered, new strokes go
   * straight to the buffer.
   */
  async submit(stroke: UiStroke): Promise<boolean> {
    if (this.hasPending) {
      this.pending.push(stroke);
      return false;
    }
    try {
      await this.client.addStroke(this.sessionId, stroke);
      return true;
    } catch (err) {
      if (err instanceof ServiceError) throw err; // the service rejected it
      this.pending.push(stroke); // unreachable: buffer for retry
      return false;
    }
  }

  /** Flush buffered strokes in order; stops at the first failure. */
  async retry(): Promise<boolean> {
    while (this.pending.length > 0) {
      const stroke = this.pending[0]!;
      try {
        await this.client.addStroke(this.sessionId, stroke);
      } catch (err) {
        if (err instanceof ServiceError) throw err;
        return false;
      }
      this.pending.shift();
    }
    return true;
  }
}

/**
 * Undo support: the service's stroke log is append-only, so removing the
 * last stroke means re-creating the session and replaying the rest.
 * Returns the fresh session id.
 */
export async function recreateSession(
  client: ServiceClient,
  config: SessionConfig,
  strokes: readonly UiStroke[],
): Promise<string> {
  const sessionId = await client.createSession(config);
  for (const stroke of strokes) {
    await client.addStroke(sessionId, stroke); // sequential: order is meaning
  }
  return sessionId;
}

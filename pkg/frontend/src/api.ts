/** Thin typed client for the session service; the service stays the single
 * validator, the client only transports verdicts. */

import type {
  CreatedSession,
  FeedbackResult,
  FeedbackSelection,
  PresentationPayload,
  SessionSummary,
  TranscriptPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: { error?: string; violatedConditions?: string[] },
  ) {
    super(body.error ?? `request failed with ${status}`);
  }

  get violatedConditions(): string[] {
    return this.body.violatedConditions ?? [];
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  const body = await response.json();
  if (!response.ok) {
    throw new ApiError(response.status, body);
  }
  return body as T;
}

export class SessionApi {
  constructor(readonly baseUrl: string) {}

  private post<T>(path: string, payload: unknown): Promise<T> {
    return request<T>(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  createSession(config: unknown): Promise<CreatedSession> {
    return this.post("/sessions", config);
  }

  getSummary(id: string): Promise<SessionSummary> {
    return request(`${this.baseUrl}/sessions/${id}`);
  }

  getPresentation(id: string): Promise<PresentationPayload> {
    return request(`${this.baseUrl}/sessions/${id}/presentation`);
  }

  postFeedback(
    id: string,
    turn: number,
    items: FeedbackSelection[],
  ): Promise<FeedbackResult> {
    return this.post(`/sessions/${id}/feedback`, { turn, items });
  }

  getTranscript(id: string): Promise<TranscriptPayload> {
    return request(`${this.baseUrl}/sessions/${id}/transcript`);
  }
}

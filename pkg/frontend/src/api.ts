/**
 * Typed client for the tetunsearch service JSON API. The UI is a pure
 * consumer: scores, rankings, and adjudicated grades all come from the
 * service.
 */

import { serviceUrl } from "./config";

export interface Hit {
  docid: string;
  rank: number;
  score: number;
  title: string;
  lead: string;
}

export interface ScaleChoice {
  grade: number;
  label: string;
  description: string;
}

export interface Progress {
  done: number;
  total: number;
}

export interface JudgeDocument {
  id: string;
  title?: string;
  lead?: string;
  content?: string;
}

export type JudgePair =
  | {
      complete: false;
      qid: string;
      query: string;
      docid: string;
      document: JudgeDocument;
      scale: ScaleChoice[];
      progress: Progress;
    }
  | { complete: true; progress: Progress };

export interface JudgmentSubmission {
  qid: string;
  docid: string;
  evaluator: string;
  grade: number;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(serviceUrl() + path, init);
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && body.detail !== undefined) {
        detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
      }
    } catch {
      // error body was not JSON; keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export function searchDocuments(query: string, k = 10, preset?: string): Promise<Hit[]> {
  const params = new URLSearchParams({ q: query, k: String(k) });
  if (preset) params.set("preset", preset);
  return request<Hit[]>(`/search?${params}`);
}

export function nextPair(evaluator: string): Promise<JudgePair> {
  const params = new URLSearchParams({ evaluator });
  return request<JudgePair>(`/judge/next?${params}`);
}

export function submitJudgment(judgment: JudgmentSubmission): Promise<{ ok: boolean }> {
  return request<{ ok: boolean }>("/judge", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(judgment),
  });
}

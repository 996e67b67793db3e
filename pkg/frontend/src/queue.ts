/**
 * Offline tolerance for judging: a judgment that could not reach the
 * service is kept in localStorage and retried before the next submission.
 * Server-rejected judgments (4xx) are never queued, only network failures.
 */

import { ApiError, JudgmentSubmission, submitJudgment } from "./api";

const STORAGE_KEY = "tetunsearch.pendingJudgments";

function read(): JudgmentSubmission[] {
  try {
    return JSON.parse(window.localStorage.getItem(STORAGE_KEY) ?? "[]") as JudgmentSubmission[];
  } catch {
    return [];
  }
}

function write(queue: JudgmentSubmission[]): void {
  window.localStorage.setItem(STORAGE_KEY, JSON.stringify(queue));
}

export function pendingCount(): number {
  return read().length;
}

export function enqueue(judgment: JudgmentSubmission): void {
  const queue = read().filter(
    (j) => !(j.qid === judgment.qid && j.docid === judgment.docid && j.evaluator === judgment.evaluator),
  );
  queue.push(judgment);
  write(queue);
}

/**
 * Try to deliver every queued judgment, in order. Stops at the first
 * network failure (leaving the rest queued); drops judgments the server
 * rejects outright.
 */
export async function flushQueue(): Promise<void> {
  let queue = read();
  while (queue.length > 0) {
    const head = queue[0];
    try {
      await submitJudgment(head);
    } catch (error) {
      if (error instanceof ApiError) {
        // The service saw it and said no; retrying would not help.
        queue = queue.slice(1);
        write(queue);
        continue;
      }
      write(queue);
      return;
    }
    queue = queue.slice(1);
    write(queue);
  }
}

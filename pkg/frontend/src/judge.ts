/** Judging screen: evaluator login, one (query, document) pair at a time,
 * grade buttons labeled with the service-provided scale, auto-advance, and
 * a completion screen. Failed submissions are kept locally and retried. */

import { ApiError, JudgePair, nextPair, submitJudgment } from "./api";
import { enqueue, flushQueue, pendingCount } from "./queue";

const EVALUATOR_KEY = "tetunsearch.evaluator";

export interface JudgeController {
  login(evaluator: string): Promise<void>;
  grade(grade: number): Promise<void>;
  idle(): Promise<void>;
}

export function mountJudgeScreen(root: HTMLElement): JudgeController {
  root.innerHTML = `
    <section class="judge-screen">
      <form class="login-form">
        <label>Evaluator id <input type="text" name="evaluator" autocomplete="off" /></label>
        <button type="submit">Start judging</button>
      </form>
      <div class="judging" hidden>
        <div class="progress">
          <progress max="1" value="0"></progress>
          <span class="progress-text"></span>
        </div>
        <p class="query-text"></p>
        <article class="document">
          <h2 class="doc-title"></h2>
          <p class="doc-lead"></p>
          <p class="doc-content"></p>
        </article>
        <div class="scale"></div>
      </div>
      <p class="toast" hidden></p>
      <div class="completion" hidden>
        <h2>All pairs judged</h2>
        <p class="completion-text"></p>
      </div>
      <div class="service-banner" hidden>
        <span>Service unreachable.</span>
        <button type="button" class="retry">Retry</button>
      </div>
    </section>
  `;

  const loginForm = root.querySelector<HTMLFormElement>(".login-form")!;
  const evaluatorInput = root.querySelector<HTMLInputElement>("input[name=evaluator]")!;
  const judging = root.querySelector<HTMLDivElement>(".judging")!;
  const completion = root.querySelector<HTMLDivElement>(".completion")!;
  const banner = root.querySelector<HTMLDivElement>(".service-banner")!;
  const progressBar = root.querySelector<HTMLProgressElement>("progress")!;
  const progressText = root.querySelector<HTMLSpanElement>(".progress-text")!;
  const queryText = root.querySelector<HTMLParagraphElement>(".query-text")!;
  const docTitle = root.querySelector<HTMLHeadingElement>(".doc-title")!;
  const docLead = root.querySelector<HTMLParagraphElement>(".doc-lead")!;
  const docContent = root.querySelector<HTMLParagraphElement>(".doc-content")!;
  const scaleBox = root.querySelector<HTMLDivElement>(".scale")!;
  const toast = root.querySelector<HTMLParagraphElement>(".toast")!;

  let evaluator = window.sessionStorage.getItem(EVALUATOR_KEY) ?? "";
  let current: JudgePair | null = null;
  let inflight: Promise<void> = Promise.resolve();

  function showToast(text: string): void {
    toast.textContent = text;
    toast.hidden = false;
  }

  function renderPair(pair: JudgePair): void {
    current = pair;
    banner.hidden = true;
    toast.hidden = true;
    if (pair.complete) {
      judging.hidden = true;
      completion.hidden = false;
      root.querySelector(".completion-text")!.textContent =
        `${pair.progress.done} of ${pair.progress.total} pairs judged. Obrigadu barak!`;
      return;
    }
    loginForm.hidden = true;
    completion.hidden = true;
    judging.hidden = false;
    progressBar.max = pair.progress.total;
    progressBar.value = pair.progress.done;
    progressText.textContent = `${pair.progress.done} / ${pair.progress.total}`;
    queryText.textContent = pair.query;
    docTitle.textContent = pair.document.title ?? pair.document.id;
    docLead.textContent = pair.document.lead ?? "";
    docContent.textContent = pair.document.content ?? "";
    scaleBox.innerHTML = "";
    for (const choice of pair.scale) {
      const button = document.createElement("button");
      button.type = "button";
      button.className = "grade-button";
      button.dataset.grade = String(choice.grade);
      button.textContent = `${choice.grade} - ${choice.label}`;
      button.title = choice.description;
      button.addEventListener("click", () => void grade(choice.grade));
      scaleBox.append(button);
    }
  }

  async function advance(): Promise<void> {
    try {
      renderPair(await nextPair(evaluator));
    } catch (error) {
      if (error instanceof ApiError) {
        showToast(error.detail);
      } else {
        banner.hidden = false;
      }
    }
  }

  async function doLogin(id: string): Promise<void> {
    const trimmed = id.trim();
    if (!trimmed) {
      showToast("Enter your evaluator id.");
      return;
    }
    evaluator = trimmed;
    window.sessionStorage.setItem(EVALUATOR_KEY, evaluator);
    await advance();
  }

  async function doGrade(grade: number): Promise<void> {
    if (!current || current.complete) return;
    const submission = { qid: current.qid, docid: current.docid, evaluator, grade };
    try {
      await flushQueue();
      await submitJudgment(submission);
    } catch (error) {
      if (error instanceof ApiError) {
        // The service rejected it (bad grade, foreign pair): stay put.
        showToast(error.detail);
        return;
      }
      // Network failure: keep the judgment locally and move on; it is
      // retried before the next submission.
      enqueue(submission);
      showToast(`Saved locally (${pendingCount()} pending); will retry.`);
    }
    await advance();
  }

  function login(id: string): Promise<void> {
    inflight = inflight.then(() => doLogin(id));
    return inflight;
  }

  function grade(value: number): Promise<void> {
    inflight = inflight.then(() => doGrade(value));
    return inflight;
  }

  loginForm.addEventListener("submit", (event) => {
    event.preventDefault();
    void login(evaluatorInput.value);
  });
  banner.querySelector(".retry")!.addEventListener("click", () => {
    if (evaluator) {
      inflight = inflight.then(() => advance());
    }
  });

  if (evaluator) {
    evaluatorInput.value = evaluator;
  }

  return { login, grade, idle: () => inflight };
}

/** Search screen: query box, ranked results, retry banner when the service
 * is unreachable. Results are rendered exactly in service order. */

import { ApiError, Hit, searchDocuments } from "./api";

export interface SearchController {
  submit(query: string): Promise<void>;
  idle(): Promise<void>;
}

export function mountSearchScreen(root: HTMLElement): SearchController {
  root.innerHTML = `
    <section class="search-screen">
      <form class="search-form">
        <input type="search" name="q" placeholder="Buka iha Tetun..." autocomplete="off" />
        <button type="submit">Buka</button>
      </form>
      <p class="search-message" hidden></p>
      <div class="service-banner" hidden>
        <span>Service unreachable.</span>
        <button type="button" class="retry">Retry</button>
      </div>
      <ol class="results"></ol>
    </section>
  `;

  const form = root.querySelector<HTMLFormElement>(".search-form")!;
  const input = root.querySelector<HTMLInputElement>("input[name=q]")!;
  const message = root.querySelector<HTMLParagraphElement>(".search-message")!;
  const banner = root.querySelector<HTMLDivElement>(".service-banner")!;
  const results = root.querySelector<HTMLOListElement>(".results")!;

  let inflight: Promise<void> = Promise.resolve();
  let lastQuery = "";

  function showMessage(text: string): void {
    message.textContent = text;
    message.hidden = false;
  }

  function clearFeedback(): void {
    message.hidden = true;
    banner.hidden = true;
  }

  function renderHits(hits: Hit[]): void {
    results.innerHTML = "";
    for (const hit of hits) {
      const item = document.createElement("li");
      item.className = "hit";
      item.dataset.docid = hit.docid;
      item.dataset.rank = String(hit.rank);

      const title = document.createElement("span");
      title.className = "hit-title";
      title.textContent = hit.title;

      const score = document.createElement("span");
      score.className = "hit-score";
      score.textContent = hit.score.toFixed(3);

      const lead = document.createElement("p");
      lead.className = "hit-lead";
      lead.textContent = hit.lead;

      item.append(title, score, lead);
      results.append(item);
    }
    if (hits.length === 0) {
      showMessage("No matching documents.");
    }
  }

  async function doSearch(query: string): Promise<void> {
    clearFeedback();
    const trimmed = query.trim();
    if (!trimmed) {
      // Inline validation: never bother the service with an empty query.
      results.innerHTML = "";
      showMessage("Type a query first.");
      return;
    }
    lastQuery = trimmed;
    try {
      renderHits(await searchDocuments(trimmed));
    } catch (error) {
      results.innerHTML = "";
      if (error instanceof ApiError && error.status === 400) {
        showMessage(
          error.detail === "empty_query"
            ? "Every query term was removed by analysis; try different words."
            : error.detail,
        );
      } else {
        banner.hidden = false;
      }
    }
  }

  function submit(query: string): Promise<void> {
    inflight = inflight.then(() => doSearch(query));
    return inflight;
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void submit(input.value);
  });
  banner.querySelector(".retry")!.addEventListener("click", () => {
    void submit(lastQuery || input.value);
  });

  return { submit, idle: () => inflight };
}

/** Two-route hash router: #/search (default) and #/judge. */

import { mountJudgeScreen } from "./judge";
import { mountSearchScreen } from "./search";

export function mountApp(root: HTMLElement): void {
  root.innerHTML = `
    <header class="top-bar">
      <h1>tetunsearch</h1>
      <nav>
        <a href="#/search" data-route="search">Search</a>
        <a href="#/judge" data-route="judge">Judge</a>
      </nav>
    </header>
    <main id="screen"></main>
  `;
  const screen = root.querySelector<HTMLElement>("#screen")!;

  function route(): void {
    const name = window.location.hash === "#/judge" ? "judge" : "search";
    root.querySelectorAll("nav a").forEach((a) => {
      a.classList.toggle("active", (a as HTMLAnchorElement).dataset.route === name);
    });
    if (name === "judge") {
      mountJudgeScreen(screen);
    } else {
      mountSearchScreen(screen);
    }
  }

  window.addEventListener("hashchange", route);
  route();
}

const appRoot = document.getElementById("app");
if (appRoot) {
  mountApp(appRoot);
}

// Browser entry point: wires the pure modules to the DOM. All logic
// lives in state/api/layout/render; this file only routes events.

import { ApiClient, ApiError, StaleResponseError } from "./api.js";
import {
  DEPTH_MAX,
  DEPTH_MIN,
  DEFAULT_LANG_CHOICE,
  initialState,
  langParam,
  selectEntity,
  setDepth,
  setLang,
  setQuery,
  setTab,
} from "./state.js";
import type { Tab, ViewState } from "./state.js";
import {
  renderEntityPage,
  renderError,
  renderRecordView,
  renderSearchView,
} from "./render.js";
import type { EntityPayload } from "./types.js";

const API_BASE =
  new URLSearchParams(window.location.search).get("api") ?? "http://127.0.0.1:8011";

const client = new ApiClient(API_BASE);
let state: ViewState = initialState();
let page: EntityPayload | null = null;

const app = document.getElementById("app")!;
const results = document.getElementById("results")!;
const searchForm = document.getElementById("search-form") as HTMLFormElement;
const searchInput = document.getElementById("search-input") as HTMLInputElement;
const langSelect = document.getElementById("lang-select") as HTMLSelectElement;
const depthInput = document.getElementById("depth-input") as HTMLInputElement;

depthInput.min = String(DEPTH_MIN);
depthInput.max = String(DEPTH_MAX);
depthInput.value = String(state.depth);

function availableLangs(): string[] {
  const langs = new Set<string>();
  for (const n of page?.nomens ?? []) if (n.lang) langs.add(n.lang);
  if (page?.lang) langs.add(page.lang);
  return [...langs].sort();
}

function syncLangOptions(): void {
  const langs = availableLangs();
  langSelect.innerHTML = [DEFAULT_LANG_CHOICE, ...langs]
    .map((l) => `<option value="${l}"${l === state.uiLang ? " selected" : ""}>${l}</option>`)
    .join("");
}

function showError(err: unknown, where: HTMLElement): void {
  if (err instanceof StaleResponseError) return; // a newer snapshot already rendered
  const message = err instanceof ApiError ? err.message : `request failed: ${String(err)}`;
  where.innerHTML = renderError(message);
}

async function loadEntity(): Promise<void> {
  if (!state.selected) {
    app.innerHTML = "";
    return;
  }
  try {
    page = await client.entity(state.selected, langParam(state), state.depth);
    app.innerHTML = renderEntityPage(page, state);
    syncLangOptions();
    if (state.tab === "record" && page.kind === "manifestation") {
      const slot = app.querySelector<HTMLElement>(".record-slot");
      if (slot) {
        const record = await client.record(state.selected, langParam(state));
        slot.innerHTML = renderRecordView(record);
      }
    }
  } catch (err) {
    showError(err, app);
  }
}

async function runSearch(): Promise<void> {
  if (!state.query.trim()) {
    results.innerHTML = renderError("enter a search term");
    return;
  }
  try {
    results.innerHTML = renderSearchView(await client.search(state.query));
  } catch (err) {
    showError(err, results);
  }
}

searchForm.addEventListener("submit", (event) => {
  event.preventDefault();
  state = setQuery(state, searchInput.value);
  void runSearch();
});

langSelect.addEventListener("change", () => {
  state = setLang(state, langSelect.value, availableLangs());
  void loadEntity();
});

depthInput.addEventListener("change", () => {
  state = setDepth(state, Number(depthInput.value));
  depthInput.value = String(state.depth);
  void loadEntity();
});

document.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  const tab = target.closest<HTMLElement>("[data-tab]");
  if (tab) {
    state = setTab(state, tab.dataset.tab as Tab);
    if (page) app.innerHTML = renderEntityPage(page, state);
    if (state.tab === "record") void loadEntity();
    return;
  }
  const link = target.closest<HTMLAnchorElement>("a[data-iri]");
  if (link) {
    event.preventDefault();
    window.location.hash = `#/entity/${encodeURIComponent(link.dataset.iri!)}`;
  }
});

function route(): void {
  const match = window.location.hash.match(/^#\/entity\/(.+)$/);
  state = selectEntity(state, match ? decodeURIComponent(match[1]) : null);
  void loadEntity();
}

window.addEventListener("hashchange", route);
route();

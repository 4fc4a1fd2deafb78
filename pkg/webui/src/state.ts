// View state and its transitions. Everything here is pure: each
// transition returns a fresh state and never touches the input.

export type Tab = "overview" | "nomens" | "graph" | "record";

export const DEPTH_MIN = 0;
export const DEPTH_MAX = 3;

export const TABS: readonly Tab[] = ["overview", "nomens", "graph", "record"];

/** The language choice "default" means: send no lang parameter and let
 * the catalog fall back to its configured default. */
export const DEFAULT_LANG_CHOICE = "default";

export interface ViewState {
  query: string;
  selected: string | null;
  uiLang: string;
  depth: number;
  tab: Tab;
}

export function initialState(): ViewState {
  return {
    query: "",
    selected: null,
    uiLang: DEFAULT_LANG_CHOICE,
    depth: 1,
    tab: "overview",
  };
}

export function setQuery(state: ViewState, query: string): ViewState {
  return { ...state, query };
}

/** Select an entity to inspect; the tab resets so a stale record tab
 * from the previous entity never shows another entity's data. */
export function selectEntity(state: ViewState, iri: string | null): ViewState {
  return { ...state, selected: iri, tab: "overview" };
}

/** Clamp into the catalog's depth bounds; fractions are truncated and
 * anything unparseable leaves the depth alone. */
export function setDepth(state: ViewState, depth: number): ViewState {
  if (!Number.isFinite(depth)) return state;
  const clamped = Math.min(DEPTH_MAX, Math.max(DEPTH_MIN, Math.trunc(depth)));
  return { ...state, depth: clamped };
}

/** Switch interface language. `available` is the language set offered
 * by the current page (plus the default choice); an unknown value
 * falls back to the default rather than sending junk to the API. */
export function setLang(state: ViewState, uiLang: string, available: readonly string[]): ViewState {
  const ok = uiLang === DEFAULT_LANG_CHOICE || available.includes(uiLang);
  return { ...state, uiLang: ok ? uiLang : DEFAULT_LANG_CHOICE };
}

export function setTab(state: ViewState, tab: Tab): ViewState {
  return TABS.includes(tab) ? { ...state, tab } : state;
}

/** The lang query parameter to send, or undefined for the default. */
export function langParam(state: ViewState): string | undefined {
  return state.uiLang === DEFAULT_LANG_CHOICE ? undefined : state.uiLang;
}

/**
 * UI state and its URL-fragment form.
 *
 * The whole interface state (query tree, focus path, in-progress text, result
 * page) lives in the fragment, so any URL reproduces the exact view and the
 * browser's back/forward buttons step through query construction.
 */

import {
  FocusStep,
  QueryNode,
  focusToString,
  parseFocus,
  parseQuery,
  serializeQuery,
} from "./query.js";

export interface UiState {
  query: QueryNode | null;
  focus: FocusStep[];
  typed: string;
  page: number;
}

export function emptyState(): UiState {
  return { query: null, focus: [], typed: "", page: 0 };
}

export function encodeState(state: UiState): string {
  const params = new URLSearchParams();
  if (state.query !== null) {
    params.set("q", serializeQuery(state.query));
  }
  const focus = focusToString(state.focus);
  if (focus) {
    params.set("focus", focus);
  }
  if (state.typed) {
    params.set("typed", state.typed);
  }
  if (state.page > 0) {
    params.set("page", String(state.page));
  }
  return "#" + params.toString();
}

export function decodeState(fragment: string): UiState {
  const raw = fragment.startsWith("#") ? fragment.slice(1) : fragment;
  const params = new URLSearchParams(raw);
  const q = params.get("q");
  return {
    query: q ? parseQuery(q) : null,
    focus: parseFocus(params.get("focus") ?? ""),
    typed: params.get("typed") ?? "",
    page: Number(params.get("page") ?? "0"),
  };
}

export function statesEqual(a: UiState, b: UiState): boolean {
  return (
    JSON.stringify(a.query) === JSON.stringify(b.query) &&
    focusToString(a.focus) === focusToString(b.focus) &&
    a.typed === b.typed &&
    a.page === b.page
  );
}

/**
 * Wires the controller to a document: search field, suggestion boxes, query
 * tree, results, error banner, example queries and browser history.
 */

import { ApiClient, FetchLike } from "./api.js";
import { Controller, Snapshot } from "./controller.js";
import {
  renderBanner,
  renderQueryTree,
  renderResults,
  renderSuggestionBoxes,
} from "./render.js";

export const EXAMPLE_QUERIES: [string, string][] = [
  ["Plants native to Europe",
   "class:Plant (native-to entity:Europe)"],
  ["Plants with edible leaves, native to Europe",
   "class:Plant (native-to entity:Europe) (occurs-with edible leav*)"],
  ["Everything about Broccoli",
   "entity:Broccoli"],
];

export interface AppHandles {
  controller: Controller;
  refresh(): void;
}

export function mountApp(
  doc: Document,
  apiBase: string,
  fetchFn?: FetchLike,
  debounceMs = 150,
): AppHandles {
  const root = doc.getElementById("app");
  if (!root) {
    throw new Error("missing #app element");
  }
  root.innerHTML = `
    <div class="banner" id="banner" style="display:none"></div>
    <div class="top">
      <input id="search" type="text" autocomplete="off"
             placeholder="Type to search (Return applies the bold suggestion)" />
      <select id="examples">
        <option value="">Example queries…</option>
      </select>
    </div>
    <div class="boxes" id="boxes"></div>
    <div class="main">
      <div class="tree" id="tree"></div>
      <div class="results" id="results"></div>
    </div>`;

  const search = doc.getElementById("search") as HTMLInputElement;
  const examples = doc.getElementById("examples") as HTMLSelectElement;
  for (const [label, q] of EXAMPLE_QUERIES) {
    const opt = doc.createElement("option");
    opt.value = q;
    opt.textContent = label;
    examples.appendChild(opt);
  }

  const win = doc.defaultView as Window & typeof globalThis;
  const api = new ApiClient(apiBase, fetchFn);

  const callbacks = {
    onFocus: (path: string) => controller.setFocus(path),
    onReroot: (path: string) => controller.reroot(path),
    onApply: (list: any, index: number) => controller.applySuggestion(list, index),
    onAddOccursWith: () => controller.addOccursWith(),
    onPage: (page: number) => controller.setPage(page),
  };

  const render = (snapshot: Snapshot) => {
    renderBanner(snapshot, doc.getElementById("banner") as HTMLElement);
    renderSuggestionBoxes(snapshot, doc.getElementById("boxes") as HTMLElement, callbacks);
    renderQueryTree(snapshot, doc.getElementById("tree") as HTMLElement, callbacks);
    renderResults(snapshot, doc.getElementById("results") as HTMLElement, callbacks);
    if (doc.activeElement !== search && search.value !== snapshot.state.typed) {
      search.value = snapshot.state.typed;
    }
  };

  const controller = new Controller({
    api,
    debounceMs,
    onRender: render,
    onUrlChange: (fragment) => {
      if (win.location.hash !== fragment) {
        win.history.pushState(null, "", fragment || "#");
      }
    },
  });

  search.addEventListener("input", () => controller.input(search.value));
  search.addEventListener("keydown", (ev: KeyboardEvent) => {
    if (ev.key === "Enter") {
      ev.preventDefault();
      controller.pressReturn();
      search.value = "";
    }
  });
  examples.addEventListener("change", () => {
    if (examples.value) {
      controller.loadExample(examples.value);
      examples.value = "";
    }
  });
  win.addEventListener("popstate", () => {
    controller.loadFragment(win.location.hash);
  });

  controller.loadFragment(win.location.hash);
  return { controller, refresh: () => controller.loadFragment(win.location.hash) };
}

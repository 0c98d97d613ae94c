/**
 * DOM rendering: the query tree, the four suggestion boxes and the result
 * groups. One fixed color per object kind, identical in the tree and in the
 * suggestion boxes; the focused element is bold.
 */

import { Preselected, ResultGroup, SuggestResponse } from "./api.js";
import { Snapshot } from "./controller.js";
import { FocusStep, QueryNode, focusToString, tokenToName } from "./query.js";

export const COLORS = {
  word: "#b03030",
  class: "#2a7a2a",
  instance: "#b07020",
  relation: "#2959a8",
} as const;

export interface RenderCallbacks {
  onFocus(path: string): void;
  onReroot(path: string): void;
  onApply(list: Preselected["list"], index: number): void;
  onAddOccursWith(): void;
  onPage(page: number): void;
}

export function renderQueryTree(
  snapshot: Snapshot,
  container: HTMLElement,
  cb: RenderCallbacks,
): void {
  container.textContent = "";
  const root = snapshot.state.query;
  if (root === null) {
    const hint = document.createElement("div");
    hint.className = "tree-empty";
    hint.textContent = "Start typing to build a query.";
    container.appendChild(hint);
    return;
  }
  container.appendChild(
    nodeElement(root, [], focusToString(snapshot.state.focus), cb),
  );
}

function nodeElement(
  node: QueryNode,
  path: FocusStep[],
  focus: string,
  cb: RenderCallbacks,
): HTMLElement {
  const el = document.createElement("div");
  el.className = "tree-node";
  const label = document.createElement("span");
  const pathStr = focusToString(path);
  label.className = "tree-ref";
  label.style.color = node.kind === "class" ? COLORS.class : COLORS.instance;
  if (pathStr === focus) {
    label.style.fontWeight = "bold";
    label.classList.add("focused");
  }
  label.textContent = tokenToName(node.name);
  label.dataset.path = pathStr;
  label.addEventListener("click", () => cb.onFocus(pathStr));
  label.addEventListener("dblclick", () => cb.onReroot(pathStr));
  el.appendChild(label);

  if (pathStr === focus) {
    const add = document.createElement("button");
    add.className = "add-ow";
    add.textContent = "+ occurs-with";
    add.addEventListener("click", () => cb.onAddOccursWith());
    el.appendChild(add);
  }

  const arcs = document.createElement("div");
  arcs.className = "tree-arcs";
  node.arcs.forEach((arc, i) => {
    const row = document.createElement("div");
    row.className = "tree-arc";
    if (arc.kind === "ontology") {
      const rel = document.createElement("span");
      rel.className = "tree-rel";
      rel.style.color = COLORS.relation;
      rel.textContent = arc.relation + (arc.reverse ? " (of)" : "");
      row.appendChild(rel);
      row.appendChild(nodeElement(arc.target, [...path, i], focus, cb));
    } else {
      const arcPath = focusToString([...path, { arc: i }]);
      const rel = document.createElement("span");
      rel.className = "tree-rel tree-ow";
      rel.style.color = COLORS.relation;
      rel.textContent = "occurs-with";
      if (arcPath === focus) {
        rel.style.fontWeight = "bold";
        rel.classList.add("focused");
      }
      rel.dataset.path = arcPath;
      rel.addEventListener("click", () => cb.onFocus(arcPath));
      row.appendChild(rel);
      const items = document.createElement("span");
      items.className = "tree-ow-items";
      arc.items.forEach((it, j) => {
        if (j > 0) {
          items.appendChild(document.createTextNode(" "));
        }
        if (it.kind === "subquery") {
          items.appendChild(nodeElement(it.node, [...path, [i, j]], focus, cb));
        } else {
          const w = document.createElement("span");
          w.style.color = COLORS.word;
          w.textContent = it.kind === "prefix" ? it.text + "*" : it.text;
          items.appendChild(w);
        }
      });
      if (arc.items.length === 0) {
        const pending = document.createElement("em");
        pending.textContent = "…";
        items.appendChild(pending);
      }
      row.appendChild(items);
    }
    arcs.appendChild(row);
  });
  el.appendChild(arcs);
  return el;
}

const BOX_TITLES: [Preselected["list"], string][] = [
  ["words", "Words"],
  ["classes", "Classes"],
  ["instances", "Instances"],
  ["relations", "Relations"],
];

export function renderSuggestionBoxes(
  snapshot: Snapshot,
  container: HTMLElement,
  cb: RenderCallbacks,
): void {
  container.textContent = "";
  const sugg = snapshot.suggestions;
  for (const [list, title] of BOX_TITLES) {
    const box = document.createElement("div");
    box.className = `suggestion-box box-${list}`;
    const head = document.createElement("h3");
    head.textContent = title;
    head.style.color = COLORS[list.slice(0, -1) as keyof typeof COLORS] ?? "#333";
    box.appendChild(head);
    const ul = document.createElement("ul");
    const entries = sugg?.[list] ?? [];
    entries.forEach((entry, i) => {
      const li = document.createElement("li");
      li.dataset.list = list;
      li.dataset.index = String(i);
      const isPre =
        sugg?.preselected?.list === list && sugg.preselected.index === i;
      if (isPre) {
        li.classList.add("preselected");
        li.style.fontWeight = "bold";
      }
      li.textContent =
        entry.label + (entry.reverse ? " (of)" : "") + ` · ${entry.score}`;
      li.addEventListener("click", () => cb.onApply(list, i));
      ul.appendChild(li);
    });
    box.appendChild(ul);
    container.appendChild(box);
  }
}

export function renderResults(
  snapshot: Snapshot,
  container: HTMLElement,
  cb: RenderCallbacks,
): void {
  container.textContent = "";
  const results = snapshot.results;
  if (snapshot.stale) {
    container.classList.add("stale");
  } else {
    container.classList.remove("stale");
  }
  if (results === null) {
    const hint = document.createElement("div");
    hint.className = "results-empty";
    hint.textContent = "No query yet.";
    container.appendChild(hint);
    return;
  }
  const count = document.createElement("div");
  count.className = "results-count";
  count.textContent = `${results.total} hits`;
  container.appendChild(count);
  if (results.total === 0) {
    const hint = document.createElement("div");
    hint.className = "results-empty";
    hint.textContent = "No hits - try one of the suggestions.";
    container.appendChild(hint);
    return;
  }
  for (const group of results.groups) {
    container.appendChild(groupElement(group));
  }
  if (results.total > results.page_size) {
    const nav = document.createElement("div");
    nav.className = "paging";
    const prev = document.createElement("button");
    prev.textContent = "previous";
    prev.disabled = results.page === 0;
    prev.addEventListener("click", () => cb.onPage(results.page - 1));
    const next = document.createElement("button");
    next.textContent = "next";
    next.disabled = (results.page + 1) * results.page_size >= results.total;
    next.addEventListener("click", () => cb.onPage(results.page + 1));
    nav.append(prev, ` page ${results.page + 1} `, next);
    container.appendChild(nav);
  }
}

function groupElement(group: ResultGroup): HTMLElement {
  const el = document.createElement("div");
  el.className = "result-group";
  const head = document.createElement("h4");
  head.style.color = COLORS.instance;
  head.textContent = `${group.entity.name}  (${group.score})`;
  el.appendChild(head);
  for (const ev of group.evidence) {
    const line = document.createElement("div");
    line.className = "evidence";
    if (ev.kind === "fact") {
      line.classList.add("evidence-fact");
      const rel = document.createElement("span");
      rel.style.color = COLORS.relation;
      rel.textContent = ` ${ev.relation} `;
      line.append(ev.subject ?? "", rel, ev.object ?? "");
    } else if (ev.excerpt) {
      line.classList.add("evidence-context");
      appendExcerpt(line, ev.excerpt.text, ev.excerpt.active);
    }
    el.appendChild(line);
  }
  return el;
}

/** Sentence with the matching context spans normal and the rest grayed out. */
export function appendExcerpt(
  el: HTMLElement,
  text: string,
  active: [number, number][],
): void {
  let cursor = 0;
  const gray = (upto: number) => {
    if (upto > cursor) {
      const span = document.createElement("span");
      span.className = "grayed";
      span.style.color = "#9a9a9a";
      span.textContent = text.slice(cursor, upto);
      el.appendChild(span);
    }
  };
  for (const [a, b] of [...active].sort((x, y) => x[0] - y[0])) {
    gray(a);
    const span = document.createElement("span");
    span.className = "active";
    span.textContent = text.slice(Math.max(a, cursor), b);
    el.appendChild(span);
    cursor = Math.max(b, cursor);
  }
  gray(text.length);
}

export function renderBanner(snapshot: Snapshot, el: HTMLElement): void {
  if (snapshot.banner) {
    el.textContent = snapshot.banner;
    el.style.display = "block";
  } else {
    el.textContent = "";
    el.style.display = "none";
  }
}

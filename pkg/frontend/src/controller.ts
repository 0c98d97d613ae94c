/**
 * Application logic behind the UI, kept DOM-free so tests can drive it.
 *
 * Every keystroke schedules a debounced /suggest + /search round trip tagged
 * with a sequence number; responses for stale inputs are dropped. Committed
 * words (a space after a token while an occurs-with arc is focused, or a word
 * suggestion applied) mutate the query tree; the full state round-trips
 * through the URL fragment.
 */

import {
  ApiClient,
  SearchResponse,
  SuggestResponse,
  SuggestionEntry,
} from "./api.js";
import {
  FocusStep,
  OccursWithArc,
  QueryNode,
  changeRoot,
  classNode,
  copyTree,
  focusToString,
  instanceNode,
  nameToken,
  parseFocus,
  resolveFocus,
  serverQueryText,
} from "./query.js";
import { UiState, decodeState, emptyState, encodeState } from "./state.js";

export interface Snapshot {
  state: UiState;
  suggestions: SuggestResponse | null;
  results: SearchResponse | null;
  /** results/suggestions lag behind the newest input */
  stale: boolean;
  /** non-blocking error banner, null when healthy */
  banner: string | null;
}

export interface ControllerOptions {
  api: ApiClient;
  onRender: (snapshot: Snapshot) => void;
  onUrlChange?: (fragment: string) => void;
  debounceMs?: number;
}

type SuggestionList = "words" | "classes" | "instances" | "relations";

export class Controller {
  private state: UiState = emptyState();
  private suggestions: SuggestResponse | null = null;
  private results: SearchResponse | null = null;
  private banner: string | null = null;
  private stale = false;

  private seq = 0;
  private applied = 0;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private inflight: Promise<void> | null = null;
  private readonly debounceMs: number;

  constructor(private readonly opts: ControllerOptions) {
    this.debounceMs = opts.debounceMs ?? 150;
  }

  // -- state access -----------------------------------------------------

  snapshot(): Snapshot {
    return {
      state: {
        query: this.state.query === null ? null : copyTree(this.state.query),
        focus: [...this.state.focus],
        typed: this.state.typed,
        page: this.state.page,
      },
      suggestions: this.suggestions,
      results: this.results,
      stale: this.stale,
      banner: this.banner,
    };
  }

  urlFragment(): string {
    return encodeState(this.state);
  }

  loadFragment(fragment: string, refresh = true): void {
    try {
      this.state = decodeState(fragment);
    } catch {
      this.state = emptyState();
    }
    if (refresh) {
      this.scheduleRefresh();
    }
    this.render();
  }

  // -- user actions -------------------------------------------------------

  /** Full content of the search field after a keystroke. */
  input(text: string): void {
    let rest = text;
    while (rest.includes(" ")) {
      const i = rest.indexOf(" ");
      const head = rest.slice(0, i).trim();
      rest = rest.slice(i + 1);
      if (head) {
        this.commitWord(head);
      }
    }
    this.state.typed = rest;
    this.scheduleRefresh();
    this.render();
  }

  /** Apply the highlighted suggestion (Return key). */
  pressReturn(): void {
    const pre = this.suggestions?.preselected;
    if (!pre) {
      return;
    }
    this.applySuggestion(pre.list, pre.index);
  }

  applySuggestion(list: SuggestionList, index: number): void {
    const entry = this.suggestions?.[list]?.[index];
    if (!entry) {
      return;
    }
    switch (list) {
      case "classes":
        this.applyNodeRef("class", entry);
        break;
      case "instances":
        this.applyInstance(entry);
        break;
      case "relations":
        this.applyRelation(entry);
        break;
      case "words":
        this.commitWord(nameToken(entry.label));
        this.state.focus = [];
        break;
    }
    this.state.typed = "";
    this.state.page = 0;
    this.pushUrl();
    this.scheduleRefresh();
    this.render();
  }

  addOccursWith(): void {
    if (this.state.query === null) {
      return;
    }
    const { node, arcIndex } = resolveFocus(this.state.query, this.state.focus);
    if (arcIndex !== null) {
      return; // an arc is already focused
    }
    node.arcs.push({ kind: "occurs-with", items: [] });
    this.state.focus = [...this.state.focus, { arc: node.arcs.length - 1 }];
    this.pushUrl();
    this.scheduleRefresh();
    this.render();
  }

  setFocus(path: string): void {
    if (this.state.query === null) {
      return;
    }
    const steps = parseFocusSafe(path);
    if (steps === null) {
      return;
    }
    try {
      resolveFocus(this.state.query, steps);
    } catch {
      return;
    }
    this.state.focus = steps;
    this.state.typed = "";
    this.pushUrl();
    this.scheduleRefresh();
    this.render();
  }

  reroot(path: string): void {
    if (this.state.query === null) {
      return;
    }
    const steps = parseFocusSafe(path);
    if (steps === null) {
      return;
    }
    try {
      this.state.query = changeRoot(this.state.query, steps);
    } catch {
      return;
    }
    this.state.focus = [];
    this.state.typed = "";
    this.state.page = 0;
    this.pushUrl();
    this.scheduleRefresh();
    this.render();
  }

  setPage(page: number): void {
    this.state.page = Math.max(0, page);
    this.pushUrl();
    this.scheduleRefresh();
    this.render();
  }

  loadExample(queryText: string): void {
    this.loadFragment("#" + new URLSearchParams({ q: queryText }).toString());
    this.pushUrl();
  }

  // -- suggestion application helpers ------------------------------------

  private applyNodeRef(kind: "class" | "instance", entry: SuggestionEntry): void {
    const name = nameToken(entry.label);
    if (this.state.query === null) {
      this.state.query = kind === "class" ? classNode(name) : instanceNode(name);
      this.state.focus = [];
      return;
    }
    const { node, arcIndex } = resolveFocus(this.state.query, this.state.focus);
    if (arcIndex !== null) {
      return;
    }
    node.kind = kind === "class" ? "class" : "instance";
    node.name = name;
  }

  private applyInstance(entry: SuggestionEntry): void {
    const name = nameToken(entry.label);
    if (this.state.query === null) {
      this.state.query = instanceNode(name);
      this.state.focus = [];
      return;
    }
    const { node, arcIndex } = resolveFocus(this.state.query, this.state.focus);
    if (arcIndex !== null) {
      const arc = node.arcs[arcIndex] as OccursWithArc;
      arc.items.push({ kind: "subquery", node: instanceNode(name) });
      this.state.focus = [];
      return;
    }
    node.kind = "instance";
    node.name = name;
  }

  private applyRelation(entry: SuggestionEntry): void {
    const target = entry.target ? nameToken(entry.target) : null;
    if (!target) {
      return;
    }
    if (this.state.query === null) {
      const source = entry.source ? nameToken(entry.source) : null;
      if (!source) {
        return;
      }
      this.state.query = classNode(source, [
        {
          kind: "ontology",
          relation: entry.label,
          reverse: entry.reverse ?? false,
          target: classNode(target),
        },
      ]);
      this.state.focus = [];
      return;
    }
    const { node, arcIndex } = resolveFocus(this.state.query, this.state.focus);
    if (arcIndex !== null) {
      return;
    }
    node.arcs.push({
      kind: "ontology",
      relation: entry.label,
      reverse: entry.reverse ?? false,
      target: classNode(target),
    });
    this.state.focus = [];
  }

  /** Attach one word to the focused occurs-with arc (creating one if needed). */
  private commitWord(word: string): void {
    const isPrefix = word.endsWith("*");
    const text = (isPrefix ? word.slice(0, -1) : word).toLowerCase();
    if (!text) {
      return;
    }
    const item = isPrefix
      ? ({ kind: "prefix", text } as const)
      : ({ kind: "word", text } as const);
    if (this.state.query === null) {
      return; // a bare word cannot start a tree query
    }
    const { node, arcIndex } = resolveFocus(this.state.query, this.state.focus);
    if (arcIndex !== null) {
      (node.arcs[arcIndex] as OccursWithArc).items.push(item);
    } else {
      node.arcs.push({ kind: "occurs-with", items: [item] });
      this.state.focus = [...this.state.focus, { arc: node.arcs.length - 1 }];
    }
    this.pushUrl();
  }

  // -- network ------------------------------------------------------------

  private scheduleRefresh(): void {
    this.stale = true;
    if (this.timer !== null) {
      clearTimeout(this.timer);
    }
    this.timer = setTimeout(() => {
      this.timer = null;
      const p = this.refresh();
      this.inflight = p;
      void p.finally(() => {
        if (this.inflight === p) {
          this.inflight = null;
        }
      });
    }, this.debounceMs);
  }

  private async refresh(): Promise<void> {
    const seq = ++this.seq;
    const queryText = serverQueryText(this.state.query) ?? "";
    const focus = mapFocusForServer(this.state.query, this.state.focus);
    try {
      const suggestP = this.opts.api.suggest(queryText, focus, this.state.typed);
      const searchP = queryText
        ? this.opts.api.search(queryText, this.state.page)
        : Promise.resolve(null);
      const [sugg, search] = await Promise.all([suggestP, searchP]);
      if (seq < this.applied) {
        return; // a newer response already rendered
      }
      this.applied = seq;
      this.suggestions = sugg;
      this.results = search;
      this.banner = null;
      this.stale = false;
    } catch (err) {
      if (seq < this.applied) {
        return;
      }
      this.applied = seq;
      this.banner = err instanceof Error ? err.message : String(err);
      this.stale = true; // keep old results visible but marked stale
    }
    this.render();
  }

  /** Wait until the debounce timer fired and the last fetch settled (tests). */
  async settle(): Promise<void> {
    for (let guard = 0; guard < 100; guard++) {
      if (this.timer !== null) {
        await sleep(this.debounceMs + 10);
        continue;
      }
      const current = this.inflight;
      if (current === null) {
        return;
      }
      await current;
      if (this.inflight === current && this.timer === null) {
        return;
      }
    }
  }

  private pushUrl(): void {
    this.opts.onUrlChange?.(this.urlFragment());
  }

  private render(): void {
    this.opts.onRender(this.snapshot());
  }
}

/**
 * Translate a client focus path into the server's coordinates.
 *
 * The server never sees pending (empty) occurs-with arcs, so arc indices must
 * skip them, and a focus resting ON a pending arc falls back to its node.
 */
export function mapFocusForServer(query: QueryNode | null, steps: FocusStep[]): string {
  if (query === null) {
    return "";
  }
  const out: FocusStep[] = [];
  let node = query;
  for (const step of steps) {
    if (typeof step === "number") {
      const arc = node.arcs[step];
      if (arc === undefined || arc.kind !== "ontology") {
        return "";
      }
      out.push(step - pendingArcsBefore(node, step));
      node = arc.target;
    } else if (Array.isArray(step)) {
      const arc = node.arcs[step[0]];
      if (arc === undefined || arc.kind !== "occurs-with") {
        return "";
      }
      const item = arc.items[step[1]];
      if (item === undefined || item.kind !== "subquery") {
        return "";
      }
      out.push([step[0] - pendingArcsBefore(node, step[0]), step[1]]);
      node = item.node;
    } else {
      const arc = node.arcs[step.arc];
      if (arc === undefined || arc.kind !== "occurs-with") {
        return "";
      }
      if (arc.items.length === 0) {
        break; // pending arc: focus its node server-side
      }
      out.push({ arc: step.arc - pendingArcsBefore(node, step.arc) });
    }
  }
  return focusToString(out);
}

function pendingArcsBefore(node: QueryNode, index: number): number {
  let n = 0;
  for (let i = 0; i < index; i++) {
    const arc = node.arcs[i];
    if (arc.kind === "occurs-with" && arc.items.length === 0) {
      n += 1;
    }
  }
  return n;
}

function parseFocusSafe(path: string): FocusStep[] | null {
  try {
    return parseFocus(path);
  } catch {
    return null;
  }
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

import { describe, expect, it } from "vitest";

import {
  Arc,
  FocusStep,
  OwItem,
  QueryNode,
  focusToString,
} from "../src/query.js";
import { UiState, decodeState, encodeState, statesEqual } from "../src/state.js";

// deterministic PRNG so failures are reproducible
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const CLASS_NAMES = ["Plant", "Vegetable", "Location", "Person", "Winter_Sport"];
const ENTITY_NAMES = ["Broccoli", "Rhubarb", "Europe", "Albert_Einstein", "Oak"];
const RELATIONS = ["native-to", "cultivated-in", "has-gender"];
const WORDS = ["edible", "leaves", "toxic", "stalks", "roots", "green", "fresh"];

function pick<T>(rnd: () => number, xs: T[]): T {
  return xs[Math.floor(rnd() * xs.length)];
}

function randomNode(rnd: () => number, depth: number): QueryNode {
  const node: QueryNode = rnd() < 0.5
    ? { kind: "class", name: pick(rnd, CLASS_NAMES), arcs: [] }
    : { kind: "instance", name: pick(rnd, ENTITY_NAMES), arcs: [] };
  if (depth >= 2) {
    return node;
  }
  const nArcs = Math.floor(rnd() * 3);
  for (let i = 0; i < nArcs; i++) {
    node.arcs.push(randomArc(rnd, depth));
  }
  return node;
}

function randomArc(rnd: () => number, depth: number): Arc {
  if (rnd() < 0.45) {
    return {
      kind: "ontology",
      relation: pick(rnd, RELATIONS),
      reverse: rnd() < 0.3,
      target: randomNode(rnd, depth + 1),
    };
  }
  const items: OwItem[] = [];
  const nItems = Math.floor(rnd() * 3); // may stay empty: a pending arc
  for (let i = 0; i < nItems; i++) {
    const roll = rnd();
    if (roll < 0.5) {
      items.push({ kind: "word", text: pick(rnd, WORDS) });
    } else if (roll < 0.8) {
      items.push({ kind: "prefix", text: pick(rnd, WORDS).slice(0, 4) });
    } else {
      items.push({ kind: "subquery", node: randomNode(rnd, depth + 1) });
    }
  }
  return { kind: "occurs-with", items };
}

function collectFocusPaths(node: QueryNode, path: FocusStep[], out: FocusStep[][]): void {
  out.push([...path]);
  node.arcs.forEach((arc, i) => {
    if (arc.kind === "ontology") {
      collectFocusPaths(arc.target, [...path, i], out);
    } else {
      out.push([...path, { arc: i }]);
      arc.items.forEach((it, j) => {
        if (it.kind === "subquery") {
          collectFocusPaths(it.node, [...path, [i, j] as [number, number]], out);
        }
      });
    }
  });
}

function randomState(rnd: () => number): UiState {
  const hasQuery = rnd() < 0.9;
  const query = hasQuery ? randomNode(rnd, 0) : null;
  let focus: FocusStep[] = [];
  if (query !== null) {
    const paths: FocusStep[][] = [];
    collectFocusPaths(query, [], paths);
    focus = pick(rnd, paths);
  }
  const typedPool = ["", "plan", "edible lea", "e", "leav", "x*", "new york"];
  return {
    query,
    focus,
    typed: pick(rnd, typedPool),
    page: Math.floor(rnd() * 4),
  };
}

describe("URL state round-trip", () => {
  it("reproduces 100 randomized states exactly", () => {
    const rnd = mulberry32(20240901);
    for (let i = 0; i < 100; i++) {
      const state = randomState(rnd);
      const fragment = encodeState(state);
      const decoded = decodeState(fragment);
      expect(statesEqual(decoded, state), `state ${i}: ${fragment}`).toBe(true);
      // a second hop stays identical (idempotence)
      expect(encodeState(decoded)).toBe(fragment);
    }
  });

  it("handles the empty state", () => {
    const empty: UiState = { query: null, focus: [], typed: "", page: 0 };
    expect(encodeState(empty)).toBe("#");
    expect(statesEqual(decodeState("#"), empty)).toBe(true);
    expect(statesEqual(decodeState(""), empty)).toBe(true);
  });

  it("keeps focus path strings verbatim", () => {
    const paths: FocusStep[][] = [[0], [{ arc: 1 }], [[0, 2] as [number, number], 1]];
    for (const p of paths) {
      const s = focusToString(p);
      const state: UiState = {
        query: {
          kind: "class",
          name: "Plant",
          arcs: [
            { kind: "ontology", relation: "native-to", reverse: false,
              target: { kind: "instance", name: "Europe", arcs: [] } },
            { kind: "occurs-with", items: [] },
          ],
        },
        focus: p,
        typed: "",
        page: 0,
      };
      // decodeState round-trips the focus text even when it does not resolve
      const decoded = decodeState(encodeState(state));
      expect(focusToString(decoded.focus)).toBe(s);
    }
  });
});

import { describe, expect, it } from "vitest";

import { mapFocusForServer } from "../src/controller.js";
import {
  changeRoot,
  parseFocus,
  parseQuery,
  resolveFocus,
  serializeQuery,
  serverQueryText,
  stripPendingArcs,
} from "../src/query.js";

const FIG1 = "class:Plant (native-to entity:Europe) (occurs-with edible leav*)";

describe("query grammar", () => {
  it("parses and serializes the running example", () => {
    const tree = parseQuery(FIG1)!;
    expect(tree.kind).toBe("class");
    expect(tree.name).toBe("Plant");
    expect(tree.arcs).toHaveLength(2);
    expect(serializeQuery(tree)).toBe(FIG1);
  });

  it("round-trips nested structures", () => {
    const queries = [
      "entity:Broccoli",
      "class:Plant (native-to class:Location (occurs-with equator))",
      "entity:Europe (native-to~ class:Plant (occurs-with edible leav*))",
      "class:Plant (occurs-with edible entity:Rhubarb)",
      "class:Plant (occurs-with)",
      "entity:Albert_Einstein",
    ];
    for (const q of queries) {
      expect(serializeQuery(parseQuery(q)!)).toBe(q);
    }
  });

  it("rejects malformed input", () => {
    expect(() => parseQuery("class:Plant (native-to")).toThrow();
    expect(() => parseQuery("plant")).toThrow();
    expect(() => parseQuery("class:Plant (occurs-with (bad)")).toThrow();
  });

  it("parses empty input to null", () => {
    expect(parseQuery("")).toBeNull();
    expect(parseQuery("   ")).toBeNull();
  });
});

describe("pending occurs-with arcs", () => {
  it("strips empty arcs for the server", () => {
    const tree = parseQuery("class:Plant (occurs-with) (native-to entity:Europe)")!;
    expect(serverQueryText(tree)).toBe("class:Plant (native-to entity:Europe)");
    // the client tree itself is untouched
    expect(serializeQuery(tree)).toContain("(occurs-with)");
  });

  it("remaps focus indices around stripped arcs", () => {
    const tree = parseQuery("class:Plant (occurs-with) (occurs-with edible)")!;
    expect(mapFocusForServer(tree, parseFocus("a1"))).toBe("a0");
    expect(mapFocusForServer(tree, parseFocus("a0"))).toBe("");
    const tree2 = parseQuery("class:Plant (occurs-with) (native-to entity:Europe)")!;
    expect(mapFocusForServer(tree2, parseFocus("1"))).toBe("0");
  });

  it("keeps non-empty trees unchanged", () => {
    const tree = parseQuery(FIG1)!;
    expect(serializeQuery(stripPendingArcs(tree))).toBe(FIG1);
    expect(mapFocusForServer(tree, parseFocus("0"))).toBe("0");
    expect(mapFocusForServer(tree, parseFocus("a1"))).toBe("a1");
  });
});

describe("focus paths", () => {
  it("resolves nodes and arcs", () => {
    const tree = parseQuery(FIG1)!;
    expect(resolveFocus(tree, parseFocus("")).node.name).toBe("Plant");
    expect(resolveFocus(tree, parseFocus("0")).node.name).toBe("Europe");
    const arc = resolveFocus(tree, parseFocus("a1"));
    expect(arc.arcIndex).toBe(1);
    const sub = parseQuery("class:Plant (occurs-with edible entity:Rhubarb)")!;
    expect(resolveFocus(sub, parseFocus("0.1")).node.name).toBe("Rhubarb");
  });

  it("rejects invalid paths", () => {
    const tree = parseQuery(FIG1)!;
    expect(() => resolveFocus(tree, parseFocus("7"))).toThrow();
    expect(() => resolveFocus(tree, parseFocus("1.0"))).toThrow();
  });
});

describe("re-rooting", () => {
  it("flips an ontology arc", () => {
    const tree = parseQuery(FIG1)!;
    const rooted = changeRoot(tree, parseFocus("0"));
    expect(rooted.kind).toBe("instance");
    expect(rooted.name).toBe("Europe");
    expect(serializeQuery(rooted)).toBe(
      "entity:Europe (native-to~ class:Plant (occurs-with edible leav*))",
    );
    // double re-rooting restores the original structure; the flipped-back
    // arc lands at the end of the arc list, which changes nothing semantically
    const back = changeRoot(rooted, parseFocus("0"));
    expect(serializeQuery(back)).toBe(
      "class:Plant (occurs-with edible leav*) (native-to entity:Europe)",
    );
    expect(back.name).toBe("Plant");
  });

  it("re-roots through an occurs-with subquery", () => {
    const tree = parseQuery("class:Plant (occurs-with edible entity:Rhubarb)")!;
    const rooted = changeRoot(tree, parseFocus("0.1"));
    expect(rooted.name).toBe("Rhubarb");
    expect(serializeQuery(rooted)).toBe(
      "entity:Rhubarb (occurs-with edible class:Plant)",
    );
  });

  it("refuses to re-root at an arc", () => {
    const tree = parseQuery(FIG1)!;
    expect(() => changeRoot(tree, parseFocus("a1"))).toThrow();
  });
});

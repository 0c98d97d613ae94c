// @vitest-environment happy-dom
//
// Scripted browser flow against a live fixture server, following the three
// query-construction stations: type "plan", select the Plant class, add an
// occurs-with arc, type "edible lea", select "leaves" - after which the focus
// returns to the root and the results contain Broccoli but not Rhubarb.

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { mountApp } from "../src/app.js";
import { Controller } from "../src/controller.js";
import { serializeQuery } from "../src/query.js";
import { LiveServer, startFixtureServer } from "./harness.js";

let server: LiveServer;
let controller: Controller;
let search: HTMLInputElement;

const nodeFetch = fetch;

function type(text: string): void {
  search.value = text;
  search.dispatchEvent(new Event("input", { bubbles: true }));
}

function pressReturn(): void {
  search.dispatchEvent(new KeyboardEvent("keydown", { key: "Enter", bubbles: true }));
}

beforeAll(async () => {
  server = await startFixtureServer(8917);
  document.body.innerHTML = '<div id="app"></div>';
  const app = mountApp(document, server.baseUrl, (url) => nodeFetch(url), 25);
  controller = app.controller;
  search = document.getElementById("search") as HTMLInputElement;
  await controller.settle();
}, 60_000);

afterAll(() => {
  server?.stop();
});

describe("keystroke flow (three stations)", () => {
  it("station 1: typing plan suggests and pre-selects the Plant class", async () => {
    type("plan");
    await controller.settle();
    const snap = controller.snapshot();
    expect(snap.suggestions?.classes.map((e) => e.label)).toContain("Plant");
    expect(snap.suggestions?.preselected).toEqual({ list: "classes", index: 0 });
    const bold = document.querySelector(".box-classes li.preselected");
    expect(bold?.textContent).toContain("Plant");
  });

  it("station 1b: Return applies the highlighted suggestion", async () => {
    pressReturn();
    await controller.settle();
    const snap = controller.snapshot();
    expect(snap.state.query).not.toBeNull();
    expect(serializeQuery(snap.state.query!)).toBe("class:Plant");
    expect(snap.state.typed).toBe("");
    expect(snap.state.focus).toEqual([]);
    expect(document.querySelector(".tree-ref.focused")?.textContent).toBe("Plant");
  });

  it("station 2: adding occurs-with and typing edible lea suggests words", async () => {
    (document.querySelector(".add-ow") as HTMLButtonElement).click();
    await controller.settle();
    expect(controller.snapshot().state.focus).toEqual([{ arc: 0 }]);

    type("edible lea");
    await controller.settle();
    const snap = controller.snapshot();
    // "edible" was committed into the arc, "lea" is still being typed
    expect(serializeQuery(snap.state.query!)).toBe("class:Plant (occurs-with edible)");
    expect(snap.state.typed).toBe("lea");
    expect(snap.suggestions?.words.map((e) => e.label)).toContain("leaves");
    expect(snap.suggestions?.preselected?.list).toBe("words");
    const bold = document.querySelector(".box-words li.preselected");
    expect(bold?.textContent).toContain("leaves");
  });

  it("station 3: selecting the word completes the arc and focus returns to root", async () => {
    pressReturn();
    await controller.settle();
    const snap = controller.snapshot();
    expect(serializeQuery(snap.state.query!)).toBe(
      "class:Plant (occurs-with edible leaves)",
    );
    expect(snap.state.focus).toEqual([]);   // back at the root
    expect(snap.state.typed).toBe("");
    const focused = document.querySelector(".tree-ref.focused");
    expect(focused?.textContent).toBe("Plant");

    const groups = [...document.querySelectorAll(".result-group h4")].map(
      (el) => el.textContent ?? "",
    );
    expect(groups.some((g) => g.includes("Broccoli"))).toBe(true);
    expect(groups.some((g) => g.includes("Rhubarb"))).toBe(false);
  });

  it("url fragment reproduces the final state", async () => {
    const fragment = controller.urlFragment();
    const fresh = controller.snapshot();
    controller.loadFragment(fragment);
    await controller.settle();
    const reloaded = controller.snapshot();
    expect(serializeQuery(reloaded.state.query!)).toBe(
      serializeQuery(fresh.state.query!),
    );
    expect(reloaded.state.typed).toBe(fresh.state.typed);
  });

  it("excerpt rendering grays the non-context parts", async () => {
    const grayed = document.querySelectorAll(".evidence-context .grayed");
    const active = document.querySelectorAll(".evidence-context .active");
    expect(active.length).toBeGreaterThan(0);
    const activeText = [...active].map((el) => el.textContent).join(" ");
    expect(activeText).toContain("edible");
    expect(grayed.length + active.length).toBeGreaterThan(0);
  });

  it("network failure shows a banner without wiping results", async () => {
    const broken = mountApp(document, "http://127.0.0.1:1", (url) => nodeFetch(url), 10);
    broken.controller.loadFragment("#q=class%3APlant");
    await broken.controller.settle();
    const snap = broken.controller.snapshot();
    expect(snap.banner).not.toBeNull();
    expect(snap.stale).toBe(true);
  });
});

/**
 * Client-side query model: the tree grammar mirrored from the server.
 *
 *   node   := ("class:"|"entity:")NAME arc*
 *   arc    := "(" RELNAME["~"] node ")" | "(occurs-with" owitem* ")"
 *   owitem := WORD | PREFIX"*" | node
 *
 * One client extension: an occurs-with arc may be empty while the user is
 * still typing its first item. Empty arcs are stripped before anything is
 * sent to the server, so the server never sees a tree its parser rejects.
 */

export type OwItem =
  | { kind: "word"; text: string }
  | { kind: "prefix"; text: string }
  | { kind: "subquery"; node: QueryNode };

export interface OntologyArc {
  kind: "ontology";
  relation: string;
  reverse: boolean;
  target: QueryNode;
}

export interface OccursWithArc {
  kind: "occurs-with";
  items: OwItem[];
}

export type Arc = OntologyArc | OccursWithArc;

export interface QueryNode {
  kind: "class" | "instance";
  name: string;
  arcs: Arc[];
}

export function classNode(name: string, arcs: Arc[] = []): QueryNode {
  return { kind: "class", name, arcs };
}

export function instanceNode(name: string, arcs: Arc[] = []): QueryNode {
  return { kind: "instance", name, arcs };
}

/** Display label -> grammar token (spaces become underscores). */
export function nameToken(label: string): string {
  return label.replace(/ /g, "_");
}

export function tokenToName(token: string): string {
  return token.replace(/_/g, " ");
}

// ---------------------------------------------------------------------------
// parsing

function tokenize(text: string): string[] {
  const out: string[] = [];
  const re = /\(|\)|[^\s()]+/g;
  let m: RegExpExecArray | null;
  while ((m = re.exec(text)) !== null) {
    out.push(m[0]);
  }
  return out;
}

export function parseQuery(text: string): QueryNode | null {
  const tokens = tokenize(text.trim());
  if (tokens.length === 0) {
    return null;
  }
  let pos = 0;

  function fail(msg: string): never {
    throw new Error(`query parse error: ${msg} (token ${pos})`);
  }

  function parseNode(): QueryNode {
    const tok = tokens[pos];
    if (tok === undefined) {
      fail("expected class: or entity: reference");
    }
    let node: QueryNode;
    if (tok.startsWith("class:")) {
      node = classNode(tok.slice("class:".length));
    } else if (tok.startsWith("entity:")) {
      node = instanceNode(tok.slice("entity:".length));
    } else {
      fail(`expected class: or entity: reference, got "${tok}"`);
    }
    pos += 1;
    while (tokens[pos] === "(") {
      node.arcs.push(parseArc());
    }
    return node;
  }

  function parseArc(): Arc {
    pos += 1; // consume "("
    const name = tokens[pos];
    if (name === undefined || name === "(" || name === ")") {
      fail("expected relation name after '('");
    }
    pos += 1;
    if (name === "occurs-with") {
      const items: OwItem[] = [];
      while (tokens[pos] !== ")" && tokens[pos] !== undefined) {
        items.push(parseOwItem());
      }
      expectClose();
      return { kind: "occurs-with", items };
    }
    const reverse = name.endsWith("~");
    const target = parseNode();
    expectClose();
    return {
      kind: "ontology",
      relation: reverse ? name.slice(0, -1) : name,
      reverse,
      target,
    };
  }

  function parseOwItem(): OwItem {
    const tok = tokens[pos];
    if (tok === "(") {
      fail("unexpected '(' inside occurs-with");
    }
    if (tok.startsWith("class:") || tok.startsWith("entity:")) {
      return { kind: "subquery", node: parseNode() };
    }
    pos += 1;
    if (tok.endsWith("*")) {
      return { kind: "prefix", text: tok.slice(0, -1) };
    }
    return { kind: "word", text: tok };
  }

  function expectClose(): void {
    if (tokens[pos] !== ")") {
      fail("expected ')'");
    }
    pos += 1;
  }

  const root = parseNode();
  if (pos !== tokens.length) {
    fail(`trailing input "${tokens[pos]}"`);
  }
  return root;
}

// ---------------------------------------------------------------------------
// serialization

export function serializeQuery(node: QueryNode): string {
  const ref = (node.kind === "class" ? "class:" : "entity:") + node.name;
  const parts = [ref];
  for (const arc of node.arcs) {
    if (arc.kind === "ontology") {
      const rel = arc.relation + (arc.reverse ? "~" : "");
      parts.push(`(${rel} ${serializeQuery(arc.target)})`);
    } else {
      const items = arc.items.map((it) => {
        if (it.kind === "word") return it.text;
        if (it.kind === "prefix") return it.text + "*";
        return serializeQuery(it.node);
      });
      parts.push(items.length ? `(occurs-with ${items.join(" ")})` : "(occurs-with)");
    }
  }
  return parts.join(" ");
}

/** Deep copy with in-progress (empty) occurs-with arcs removed. */
export function stripPendingArcs(node: QueryNode): QueryNode {
  return {
    kind: node.kind,
    name: node.name,
    arcs: node.arcs
      .filter((a) => a.kind !== "occurs-with" || a.items.length > 0)
      .map((a) =>
        a.kind === "ontology"
          ? { ...a, target: stripPendingArcs(a.target) }
          : {
              kind: "occurs-with",
              items: a.items.map((it) =>
                it.kind === "subquery"
                  ? { kind: "subquery", node: stripPendingArcs(it.node) }
                  : { ...it },
              ),
            },
      ),
  };
}

/** Grammar text the server accepts, or null when nothing is askable yet. */
export function serverQueryText(root: QueryNode | null): string | null {
  if (root === null) {
    return null;
  }
  return serializeQuery(stripPendingArcs(root));
}

// ---------------------------------------------------------------------------
// focus paths (same encoding as the server: "", "0", "0.1", "0/a1")

export type FocusStep = number | [number, number] | { arc: number };

export function parseFocus(path: string): FocusStep[] {
  const trimmed = path.trim();
  if (trimmed === "" || trimmed === "root") {
    return [];
  }
  return trimmed.split("/").map((part, i, all) => {
    if (part.startsWith("a")) {
      if (i !== all.length - 1) {
        throw new Error("arc step must be last in a focus path");
      }
      return { arc: Number(part.slice(1)) };
    }
    if (part.includes(".")) {
      const [a, b] = part.split(".");
      return [Number(a), Number(b)] as [number, number];
    }
    return Number(part);
  });
}

export function focusToString(steps: FocusStep[]): string {
  return steps
    .map((s) => {
      if (typeof s === "number") return String(s);
      if (Array.isArray(s)) return `${s[0]}.${s[1]}`;
      return `a${s.arc}`;
    })
    .join("/");
}

export interface ResolvedFocus {
  node: QueryNode;
  arcIndex: number | null;
}

export function resolveFocus(root: QueryNode, steps: FocusStep[]): ResolvedFocus {
  let node = root;
  for (const step of steps) {
    if (typeof step === "object" && !Array.isArray(step)) {
      const arc = node.arcs[step.arc];
      if (arc === undefined || arc.kind !== "occurs-with") {
        throw new Error(`no occurs-with arc ${step.arc} here`);
      }
      return { node, arcIndex: step.arc };
    }
    if (Array.isArray(step)) {
      const arc = node.arcs[step[0]];
      if (arc === undefined || arc.kind !== "occurs-with") {
        throw new Error(`no occurs-with arc ${step[0]} here`);
      }
      const item = arc.items[step[1]];
      if (item === undefined || item.kind !== "subquery") {
        throw new Error(`occurs-with item ${step[1]} is not a subquery`);
      }
      node = item.node;
    } else {
      const arc = node.arcs[step];
      if (arc === undefined || arc.kind !== "ontology") {
        throw new Error(`no ontology arc ${step} here`);
      }
      node = arc.target;
    }
  }
  return { node, arcIndex: null };
}

export function copyTree(node: QueryNode): QueryNode {
  return JSON.parse(JSON.stringify(node)) as QueryNode;
}

/**
 * Re-root the tree at the node addressed by the focus path (class/instance
 * nodes only). Arcs along the path flip direction; the rest of the old root
 * becomes a subtree (or occurs-with subquery) of the new root.
 */
export function changeRoot(root: QueryNode, steps: FocusStep[]): QueryNode {
  if (steps.some((s) => typeof s === "object" && !Array.isArray(s))) {
    throw new Error("cannot re-root at an occurs-with arc");
  }
  resolveFocus(root, steps);
  return rerootInner(copyTree(root), steps as (number | [number, number])[]);
}

function rerootInner(node: QueryNode, steps: (number | [number, number])[]): QueryNode {
  if (steps.length === 0) {
    return node;
  }
  const step = steps[0];
  if (Array.isArray(step)) {
    const [a, b] = step;
    const arc = node.arcs[a] as OccursWithArc;
    const item = arc.items[b] as { kind: "subquery"; node: QueryNode };
    const child = item.node;
    const remainder: QueryNode = {
      kind: node.kind,
      name: node.name,
      arcs: node.arcs.filter((_, i) => i !== a),
    };
    const newItems = arc.items.filter((_, i) => i !== b);
    newItems.push({ kind: "subquery", node: remainder });
    child.arcs.push({ kind: "occurs-with", items: newItems });
    return rerootInner(child, steps.slice(1));
  }
  const arc = node.arcs[step] as OntologyArc;
  const child = arc.target;
  const remainder: QueryNode = {
    kind: node.kind,
    name: node.name,
    arcs: node.arcs.filter((_, i) => i !== step),
  };
  child.arcs.push({
    kind: "ontology",
    relation: arc.relation,
    reverse: !arc.reverse,
    target: remainder,
  });
  return rerootInner(child, steps.slice(1));
}

// Deterministic node-link layout for the /entity subgraph.
//
// No randomness source besides a hash of the node and root ids, so
// the same subgraph always lands on the same pixel positions and UI
// screenshots are reproducible.

import type { SubgraphJson, TermJson } from "./types.js";

export interface LayoutNode {
  id: string;
  kind: "iri" | "literal";
  label: string;
  x: number;
  y: number;
}

export interface LayoutEdge {
  from: string;
  to: string;
  label: string;
}

export interface GraphLayout {
  width: number;
  height: number;
  nodes: LayoutNode[];
  edges: LayoutEdge[];
}

const RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

/** 32-bit FNV-1a over UTF-16 code units. */
export function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

/** mulberry32: tiny seeded PRNG, returns floats in [0, 1). */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Node key for a triple object; literals get a quote prefix so a
 * literal spelled like an IRI can never collide with the IRI node. */
function termKey(o: TermJson): string {
  return o.type === "iri" ? o.value : `"${o.value}"@${o.lang ?? ""}`;
}

/** Short human label: the part after the last /, #, or : that leaves
 * something non-empty; literals label as their own text. */
export function shortLabel(id: string): string {
  if (id.startsWith('"')) {
    const at = id.lastIndexOf("@");
    return id.slice(1, at - 1);
  }
  let out = id;
  for (const sep of ["#", "/"]) {
    const idx = out.lastIndexOf(sep);
    if (idx >= 0 && idx < out.length - 1) out = out.slice(idx + 1);
  }
  try {
    return decodeURIComponent(out);
  } catch {
    return out;
  }
}

/** Lay the subgraph out on concentric rings around the root, ring
 * index = graph distance. rdf:type edges are omitted: class markers
 * are plumbing, and dropping them keeps an entity's drawn connections
 * equal to its substantive ones. */
export function layoutSubgraph(sub: SubgraphJson, width = 720, height = 480): GraphLayout {
  const edges: LayoutEdge[] = [];
  const adjacency = new Map<string, Set<string>>();
  const kinds = new Map<string, "iri" | "literal">();

  const touch = (id: string, kind: "iri" | "literal") => {
    if (!kinds.has(id)) kinds.set(id, kind);
    if (!adjacency.has(id)) adjacency.set(id, new Set());
  };

  for (const t of sub.triples) {
    if (t.p === RDF_TYPE) continue;
    const from = t.s;
    const to = termKey(t.o);
    touch(from, "iri");
    touch(to, t.o.type);
    adjacency.get(from)!.add(to);
    adjacency.get(to)!.add(from);
    edges.push({ from, to, label: shortLabel(t.p) });
  }
  if (sub.root_present) touch(sub.root, "iri");

  // BFS ring index from the root; disconnected leftovers go on the
  // outermost ring.
  const distance = new Map<string, number>();
  if (kinds.has(sub.root)) {
    distance.set(sub.root, 0);
    const queue = [sub.root];
    while (queue.length > 0) {
      const current = queue.shift()!;
      const d = distance.get(current)!;
      for (const next of [...(adjacency.get(current) ?? [])].sort()) {
        if (!distance.has(next)) {
          distance.set(next, d + 1);
          queue.push(next);
        }
      }
    }
  }
  const ids = [...kinds.keys()].sort();
  let maxRing = 0;
  for (const id of ids) maxRing = Math.max(maxRing, distance.get(id) ?? 0);
  const strayRing = maxRing + 1;
  const rings = new Map<number, string[]>();
  for (const id of ids) {
    const ring = distance.has(id) ? distance.get(id)! : strayRing;
    if (!rings.has(ring)) rings.set(ring, []);
    rings.get(ring)!.push(id);
  }

  const cx = width / 2;
  const cy = height / 2;
  const ringCount = Math.max(1, Math.max(...rings.keys()) + (rings.has(0) ? 0 : 1));
  const step = (Math.min(width, height) / 2 - 40) / Math.max(1, ringCount);
  const nodes: LayoutNode[] = [];
  for (const [ring, members] of [...rings.entries()].sort((a, b) => a[0] - b[0])) {
    const rotate = mulberry32(fnv1a(sub.root) ^ ring)() * 2 * Math.PI;
    members.forEach((id, i) => {
      if (ring === 0) {
        nodes.push({ id, kind: kinds.get(id)!, label: shortLabel(id), x: cx, y: cy });
        return;
      }
      const jitter = mulberry32(fnv1a(id))() * 0.3 + 0.7;
      const radius = step * ring * jitter;
      const angle = rotate + (2 * Math.PI * i) / members.length;
      nodes.push({
        id,
        kind: kinds.get(id)!,
        label: shortLabel(id),
        x: Math.round(cx + radius * Math.cos(angle)),
        y: Math.round(cy + radius * Math.sin(angle)),
      });
    });
  }
  nodes.sort((a, b) => (a.id < b.id ? -1 : a.id > b.id ? 1 : 0));
  return { width, height, nodes, edges };
}

/** Distinct drawable nodes in a subgraph (entities, nomens, strings;
 * class markers excluded, matching the drawing). */
export function nodeCount(sub: SubgraphJson): number {
  return layoutSubgraph(sub).nodes.length;
}

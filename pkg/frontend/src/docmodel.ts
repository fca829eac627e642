// The editor's document model: a flowchart plus canvas coordinates.
//
// Coordinates live in the file under the "editor" metadata key so that
// saved documents reopen where the user left them. Metadata values are
// strings on the wire (the service enforces that), so the coordinate
// table is JSON-encoded into one string value. It is stripped before
// anything is sent to the service: canvas layout must never change
// what a program means.

import type { FlowchartJson, InstructionJson } from "./types";
import { isBranch } from "./types";

export interface Point {
  x: number;
  y: number;
}

export interface EditorDocument {
  flowchart: FlowchartJson;
  positions: Map<string, Point>;
}

const POSITIONS_KEY = "editor";

export class ImportError extends Error {}

function asRecord(value: unknown, what: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new ImportError(`${what} must be a JSON object`);
  }
  return value as Record<string, unknown>;
}

function readInstruction(id: string, value: unknown): InstructionJson {
  const raw = asRecord(value, `instruction '${id}'`);
  const kind = raw.kind;
  if (kind === "block") {
    const code = Array.isArray(raw.code) ? raw.code.map(String) : [];
    const next = typeof raw.next === "string" ? raw.next : null;
    return { kind: "block", code, next };
  }
  if (kind === "branch") {
    return {
      kind: "branch",
      condition: typeof raw.condition === "string" ? raw.condition : "",
      true_next: typeof raw.true_next === "string" ? raw.true_next : null,
      false_next: typeof raw.false_next === "string" ? raw.false_next : null,
    };
  }
  throw new ImportError(`instruction '${id}' has unknown kind ${JSON.stringify(kind)}`);
}

/** Parse a .flow.json text into an editor document. Structural checks
 * only; semantic validation is the service's job. */
export function importDocument(text: string): EditorDocument {
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch (err) {
    throw new ImportError(`not valid JSON: ${(err as Error).message}`);
  }
  const root = asRecord(data, "document");
  const instructions: Record<string, InstructionJson> = {};
  const rawInstructions = asRecord(root.instructions ?? {}, "instructions");
  for (const [id, value] of Object.entries(rawInstructions)) {
    instructions[id] = readInstruction(id, value);
  }
  const metadata = asRecord(root.metadata ?? {}, "metadata");
  const flowchart: FlowchartJson = {
    id: typeof root.id === "string" ? root.id : "untitled",
    entry: typeof root.entry === "string" ? root.entry : "",
    instructions,
    metadata,
  };
  return { flowchart, positions: readPositions(flowchart) };
}

function readPositions(flowchart: FlowchartJson): Map<string, Point> {
  const positions = new Map<string, Point>();
  const editorMeta = flowchart.metadata[POSITIONS_KEY];
  if (typeof editorMeta === "string") {
    let parsed: unknown = null;
    try {
      parsed = JSON.parse(editorMeta);
    } catch {
      parsed = null; // stale or foreign coordinate data; relayout below
    }
    const stored =
      typeof parsed === "object" && parsed !== null
        ? (parsed as Record<string, unknown>).positions
        : null;
    if (typeof stored === "object" && stored !== null) {
      for (const [id, raw] of Object.entries(stored as Record<string, unknown>)) {
        if (!(id in flowchart.instructions)) continue;
        const p = raw as { x?: unknown; y?: unknown };
        if (typeof p.x === "number" && typeof p.y === "number") {
          positions.set(id, { x: p.x, y: p.y });
        }
      }
    }
  }
  placeMissing(flowchart, positions);
  return positions;
}

/** Deterministic fallback layout: breadth-first layers from the entry,
 * leftovers appended below. Only used for instructions that carry no
 * stored coordinates. */
export function placeMissing(flowchart: FlowchartJson, positions: Map<string, Point>): void {
  const layerOf = new Map<string, number>();
  const queue: string[] = [];
  if (flowchart.entry in flowchart.instructions) {
    layerOf.set(flowchart.entry, 0);
    queue.push(flowchart.entry);
  }
  while (queue.length > 0) {
    const id = queue.shift()!;
    const layer = layerOf.get(id)!;
    for (const succ of successors(flowchart.instructions[id])) {
      if (succ !== null && succ in flowchart.instructions && !layerOf.has(succ)) {
        layerOf.set(succ, layer + 1);
        queue.push(succ);
      }
    }
  }
  let maxLayer = -1;
  for (const layer of layerOf.values()) maxLayer = Math.max(maxLayer, layer);
  const perLayer = new Map<number, number>();
  for (const id of Object.keys(flowchart.instructions).sort()) {
    if (positions.has(id)) continue;
    let layer = layerOf.get(id);
    if (layer === undefined) {
      maxLayer += 1;
      layer = maxLayer;
    }
    const column = perLayer.get(layer) ?? 0;
    perLayer.set(layer, column + 1);
    positions.set(id, { x: 80 + column * 240, y: 60 + layer * 140 });
  }
}

export function successors(inst: InstructionJson): (string | null)[] {
  return isBranch(inst) ? [inst.true_next, inst.false_next] : [inst.next];
}

/** The flowchart as the service should see it: metadata without the
 * editor's coordinate block. */
export function semanticFlowchart(doc: EditorDocument): FlowchartJson {
  const metadata: Record<string, unknown> = {};
  for (const [key, value] of Object.entries(doc.flowchart.metadata)) {
    if (key !== POSITIONS_KEY) metadata[key] = value;
  }
  return { ...doc.flowchart, metadata };
}

function sortedDeep(value: unknown): unknown {
  if (Array.isArray(value)) return value.map(sortedDeep);
  if (typeof value === "object" && value !== null) {
    const out: Record<string, unknown> = {};
    for (const key of Object.keys(value as Record<string, unknown>).sort()) {
      out[key] = sortedDeep((value as Record<string, unknown>)[key]);
    }
    return out;
  }
  return value;
}

/** Canonical JSON: recursively sorted keys, two-space indent, trailing
 * newline. Matches the toolkit's own file formatting, so an import
 * followed by an export only adds the coordinate block. */
export function canonicalJson(value: unknown): string {
  return JSON.stringify(sortedDeep(value), null, 2) + "\n";
}

export function exportText(doc: EditorDocument): string {
  const positions: Record<string, Point> = {};
  for (const id of Object.keys(doc.flowchart.instructions).sort()) {
    const p = doc.positions.get(id);
    if (p !== undefined) positions[id] = { x: p.x, y: p.y };
  }
  const metadata = {
    ...doc.flowchart.metadata,
    [POSITIONS_KEY]: JSON.stringify({ positions }),
  };
  return canonicalJson({ ...doc.flowchart, metadata });
}

export function freshId(flowchart: FlowchartJson, prefix: string): string {
  for (let n = 1; ; n++) {
    const id = `${prefix}${n}`;
    if (!(id in flowchart.instructions)) return id;
  }
}

export function newDocument(): EditorDocument {
  const flowchart: FlowchartJson = {
    id: "untitled",
    entry: "block1",
    instructions: { block1: { kind: "block", code: [], next: null } },
    metadata: {},
  };
  return { flowchart, positions: new Map([["block1", { x: 120, y: 80 }]]) };
}

// --- mutations the canvas applies ------------------------------------------

export function addBlock(doc: EditorDocument, at: Point): string {
  const id = freshId(doc.flowchart, "block");
  doc.flowchart.instructions[id] = { kind: "block", code: [], next: null };
  doc.positions.set(id, at);
  return id;
}

export function addBranch(doc: EditorDocument, at: Point): string {
  const id = freshId(doc.flowchart, "branch");
  doc.flowchart.instructions[id] = {
    kind: "branch",
    condition: "",
    true_next: null,
    false_next: null,
  };
  doc.positions.set(id, at);
  return id;
}

export function removeInstruction(doc: EditorDocument, id: string): void {
  delete doc.flowchart.instructions[id];
  doc.positions.delete(id);
  for (const inst of Object.values(doc.flowchart.instructions)) {
    if (isBranch(inst)) {
      if (inst.true_next === id) inst.true_next = null;
      if (inst.false_next === id) inst.false_next = null;
    } else if (inst.next === id) {
      inst.next = null;
    }
  }
}

export type EdgeRef =
  | { source: string; slot: "next" }
  | { source: string; slot: "true_next" }
  | { source: string; slot: "false_next" };

export function removeEdge(doc: EditorDocument, edge: EdgeRef): void {
  const inst = doc.flowchart.instructions[edge.source];
  if (inst === undefined) return;
  if (inst.kind === "block" && edge.slot === "next") inst.next = null;
  if (inst.kind === "branch" && edge.slot === "true_next") inst.true_next = null;
  if (inst.kind === "branch" && edge.slot === "false_next") inst.false_next = null;
}

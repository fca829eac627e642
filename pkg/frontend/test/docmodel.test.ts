import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import {
  addBlock,
  addBranch,
  canonicalJson,
  exportText,
  freshId,
  importDocument,
  newDocument,
  removeInstruction,
  semanticFlowchart,
} from "../src/docmodel";

const here = dirname(fileURLToPath(import.meta.url));
const euclidText = readFileSync(join(here, "..", "..", "flowcharts", "euclid.flow.json"), "utf8");

describe("import", () => {
  it("reads the bundled gcd flowchart", () => {
    const doc = importDocument(euclidText);
    expect(doc.flowchart.id).toBe("euclid");
    expect(doc.flowchart.entry).toBe("init");
    expect(Object.keys(doc.flowchart.instructions).sort()).toEqual([
      "body",
      "init",
      "loop",
      "report",
    ]);
    expect(doc.flowchart.instructions.loop.kind).toBe("branch");
  });

  it("auto-places every instruction when the file has no coordinates", () => {
    const doc = importDocument(euclidText);
    expect(doc.positions.size).toBe(4);
    const seen = new Set([...doc.positions.values()].map((p) => `${p.x},${p.y}`));
    expect(seen.size).toBe(4);
  });

  it("keeps stored coordinates and fills in only missing ones", () => {
    const parsed = JSON.parse(euclidText);
    parsed.metadata = {
      editor: JSON.stringify({ positions: { init: { x: 500, y: 700 } } }),
    };
    const doc = importDocument(JSON.stringify(parsed));
    expect(doc.positions.get("init")).toEqual({ x: 500, y: 700 });
    expect(doc.positions.size).toBe(4);
  });

  it("rejects documents that are not JSON objects", () => {
    expect(() => importDocument("[1, 2]")).toThrow(/object/);
    expect(() => importDocument("{nope")).toThrow(/JSON/);
  });
});

describe("semantic round-trip", () => {
  it("export differs from the imported file only in metadata coordinates", () => {
    const original = JSON.parse(euclidText);
    const doc = importDocument(euclidText);
    const exported = JSON.parse(exportText(doc));

    // the coordinate block is the only addition
    const strippedMetadata = { ...exported.metadata };
    expect(typeof strippedMetadata.editor).toBe("string");
    delete strippedMetadata.editor;

    expect({ ...exported, metadata: strippedMetadata }).toEqual(original);
  });

  it("strips coordinates from what goes to the service", () => {
    const doc = importDocument(exportText(importDocument(euclidText)));
    expect("editor" in doc.flowchart.metadata).toBe(true);
    const semantic = semanticFlowchart(doc);
    expect("editor" in semantic.metadata).toBe(false);
    expect(semantic.instructions).toEqual(doc.flowchart.instructions);
  });

  it("export then import preserves positions exactly", () => {
    const doc = importDocument(euclidText);
    doc.positions.set("loop", { x: 321.5, y: -40.25 });
    const again = importDocument(exportText(doc));
    expect(again.positions.get("loop")).toEqual({ x: 321.5, y: -40.25 });
  });

  it("metadata coordinate values are strings, as the service requires", () => {
    const exported = JSON.parse(exportText(importDocument(euclidText)));
    for (const value of Object.values(exported.metadata)) {
      expect(typeof value).toBe("string");
    }
  });
});

describe("canonical json", () => {
  it("sorts keys recursively and ends with a newline", () => {
    const text = canonicalJson({ b: { d: 1, c: 2 }, a: [{ z: 1, y: 2 }] });
    expect(text).toBe('{\n  "a": [\n    {\n      "y": 2,\n      "z": 1\n    }\n  ],\n  "b": {\n    "c": 2,\n    "d": 1\n  }\n}\n');
  });
});

describe("mutations", () => {
  it("creates fresh ids that never collide", () => {
    const doc = newDocument();
    expect(freshId(doc.flowchart, "block")).toBe("block2");
    const id = addBlock(doc, { x: 1, y: 2 });
    expect(id).toBe("block2");
    expect(freshId(doc.flowchart, "block")).toBe("block3");
    expect(addBranch(doc, { x: 0, y: 0 })).toBe("branch1");
  });

  it("deleting an instruction clears edges pointing at it", () => {
    const doc = importDocument(euclidText);
    removeInstruction(doc, "body");
    expect("body" in doc.flowchart.instructions).toBe(false);
    const loop = doc.flowchart.instructions.loop;
    expect(loop).toMatchObject({ kind: "branch", true_next: null, false_next: "report" });
    expect(doc.positions.has("body")).toBe(false);
  });
});

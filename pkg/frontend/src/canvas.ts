// SVG editing surface: blocks as rectangles, branches as diamonds,
// connections as labeled arrows. No layout engine; nodes sit where the
// user dropped them, and the canvas only pans and zooms the viewport.

import type { Point, EditorDocument } from "./docmodel";
import { successors } from "./docmodel";
import type { DiagnosticJson, InstructionJson } from "./types";
import { isBranch } from "./types";
import { badgeTitle, isErrorDiagnostic } from "./diagnostics";

export type Tool = "select" | "block" | "branch" | "connect";

export const NODE_W = 180;
export const BLOCK_H = 64;
export const BRANCH_H = 76;

export function nodeHeight(inst: InstructionJson): number {
  return isBranch(inst) ? BRANCH_H : BLOCK_H;
}

/** Positions are node centers; hit-test against the bounding box. */
export function hitTest(doc: EditorDocument, world: Point): string | null {
  // later instructions draw on top, so scan in reverse paint order
  const ids = Object.keys(doc.flowchart.instructions);
  for (let i = ids.length - 1; i >= 0; i--) {
    const id = ids[i];
    const center = doc.positions.get(id);
    if (center === undefined) continue;
    const h = nodeHeight(doc.flowchart.instructions[id]);
    if (
      Math.abs(world.x - center.x) <= NODE_W / 2 &&
      Math.abs(world.y - center.y) <= h / 2
    ) {
      return id;
    }
  }
  return null;
}

export interface CanvasCallbacks {
  onAddBlock(at: Point): void;
  onAddBranch(at: Point): void;
  onConnectDrop(sourceId: string, targetId: string): void;
  onSelect(id: string | null): void;
  onMoveEnd(id: string): void;
  onEditRequest(id: string): void;
}

interface DragNode {
  kind: "node";
  id: string;
  offset: Point;
  moved: boolean;
}

interface DragPan {
  kind: "pan";
  startClient: Point;
  startPan: Point;
}

interface DragConnect {
  kind: "connect";
  sourceId: string;
  cursor: Point;
}

type DragState = DragNode | DragPan | DragConnect | null;

const SVG_NS = "http://www.w3.org/2000/svg";

export class EditorCanvas {
  tool: Tool = "select";
  private pan: Point = { x: 0, y: 0 };
  private zoom = 1;
  private drag: DragState = null;
  private doc: EditorDocument | null = null;
  private badges = new Map<string, DiagnosticJson[]>();
  private selected: string | null = null;
  private refusal: { at: Point; reason: string; until: number } | null = null;

  constructor(
    private svg: SVGSVGElement,
    private callbacks: CanvasCallbacks,
  ) {
    svg.addEventListener("pointerdown", (e) => this.pointerDown(e));
    svg.addEventListener("pointermove", (e) => this.pointerMove(e));
    svg.addEventListener("pointerup", (e) => this.pointerUp(e));
    svg.addEventListener("wheel", (e) => this.wheel(e), { passive: false });
    svg.addEventListener("dblclick", (e) => {
      const id = this.doc !== null ? hitTest(this.doc, this.toWorld(e)) : null;
      if (id !== null) this.callbacks.onEditRequest(id);
    });
  }

  render(doc: EditorDocument, badges: Map<string, DiagnosticJson[]>, selected: string | null): void {
    this.doc = doc;
    this.badges = badges;
    this.selected = selected;
    this.redraw();
  }

  /** A rejected connection flashes its reason where the drop happened. */
  showRefusal(reason: string): void {
    const at = this.drag?.kind === "connect" ? this.drag.cursor : { x: 0, y: 0 };
    this.refusal = { at, reason, until: Date.now() + 2200 };
    this.redraw();
    setTimeout(() => {
      if (this.refusal !== null && Date.now() >= this.refusal.until) {
        this.refusal = null;
        this.redraw();
      }
    }, 2300);
  }

  toWorld(e: { clientX: number; clientY: number }): Point {
    const rect = this.svg.getBoundingClientRect();
    return {
      x: (e.clientX - rect.left - this.pan.x) / this.zoom,
      y: (e.clientY - rect.top - this.pan.y) / this.zoom,
    };
  }

  private pointerDown(e: PointerEvent): void {
    if (this.doc === null || e.button !== 0) return;
    const world = this.toWorld(e);
    const hit = hitTest(this.doc, world);
    this.svg.setPointerCapture(e.pointerId);
    if (this.tool === "block" && hit === null) {
      this.callbacks.onAddBlock(world);
      return;
    }
    if (this.tool === "branch" && hit === null) {
      this.callbacks.onAddBranch(world);
      return;
    }
    if (this.tool === "connect" && hit !== null) {
      this.drag = { kind: "connect", sourceId: hit, cursor: world };
      this.redraw();
      return;
    }
    if (hit !== null) {
      const center = this.doc.positions.get(hit)!;
      this.drag = {
        kind: "node",
        id: hit,
        offset: { x: world.x - center.x, y: world.y - center.y },
        moved: false,
      };
      this.callbacks.onSelect(hit);
      return;
    }
    this.drag = {
      kind: "pan",
      startClient: { x: e.clientX, y: e.clientY },
      startPan: { ...this.pan },
    };
    this.callbacks.onSelect(null);
  }

  private pointerMove(e: PointerEvent): void {
    if (this.drag === null || this.doc === null) return;
    if (this.drag.kind === "pan") {
      this.pan = {
        x: this.drag.startPan.x + (e.clientX - this.drag.startClient.x),
        y: this.drag.startPan.y + (e.clientY - this.drag.startClient.y),
      };
      this.redraw();
      return;
    }
    const world = this.toWorld(e);
    if (this.drag.kind === "node") {
      this.doc.positions.set(this.drag.id, {
        x: world.x - this.drag.offset.x,
        y: world.y - this.drag.offset.y,
      });
      this.drag.moved = true;
      this.redraw();
      return;
    }
    this.drag.cursor = world;
    this.redraw();
  }

  private pointerUp(e: PointerEvent): void {
    if (this.drag === null || this.doc === null) return;
    const drag = this.drag;
    this.drag = null;
    if (drag.kind === "connect") {
      const target = hitTest(this.doc, this.toWorld(e));
      if (target !== null) {
        this.callbacks.onConnectDrop(drag.sourceId, target);
      }
      this.redraw();
      return;
    }
    if (drag.kind === "node" && drag.moved) {
      this.callbacks.onMoveEnd(drag.id);
    }
  }

  private wheel(e: WheelEvent): void {
    e.preventDefault();
    const rect = this.svg.getBoundingClientRect();
    const cx = e.clientX - rect.left;
    const cy = e.clientY - rect.top;
    const factor = e.deltaY < 0 ? 1.1 : 1 / 1.1;
    const next = Math.min(4, Math.max(0.2, this.zoom * factor));
    // keep the point under the cursor fixed while zooming
    this.pan = {
      x: cx - ((cx - this.pan.x) / this.zoom) * next,
      y: cy - ((cy - this.pan.y) / this.zoom) * next,
    };
    this.zoom = next;
    this.redraw();
  }

  private redraw(): void {
    if (this.doc === null) return;
    while (this.svg.firstChild !== null) this.svg.removeChild(this.svg.firstChild);
    this.svg.appendChild(this.makeDefs());
    const world = el("g", {
      transform: `translate(${this.pan.x} ${this.pan.y}) scale(${this.zoom})`,
    });
    const edges = el("g", {});
    const nodes = el("g", {});
    for (const [id, inst] of Object.entries(this.doc.flowchart.instructions)) {
      this.drawEdges(edges, id, inst);
    }
    for (const [id, inst] of Object.entries(this.doc.flowchart.instructions)) {
      this.drawNode(nodes, id, inst);
    }
    world.appendChild(edges);
    world.appendChild(nodes);
    if (this.drag?.kind === "connect") {
      const from = this.doc.positions.get(this.drag.sourceId);
      if (from !== undefined) {
        world.appendChild(
          el("line", {
            x1: from.x,
            y1: from.y,
            x2: this.drag.cursor.x,
            y2: this.drag.cursor.y,
            class: "edge preview",
            "marker-end": "url(#arrow)",
          }),
        );
      }
    }
    if (this.refusal !== null) {
      const note = el("text", {
        x: this.refusal.at.x + 12,
        y: this.refusal.at.y - 8,
        class: "refusal",
      });
      note.textContent = `✕ ${this.refusal.reason}`;
      world.appendChild(note);
    }
    this.svg.appendChild(world);
  }

  private makeDefs(): SVGElement {
    const defs = el("defs", {});
    const marker = el("marker", {
      id: "arrow",
      viewBox: "0 0 10 10",
      refX: 9,
      refY: 5,
      markerWidth: 7,
      markerHeight: 7,
      orient: "auto-start-reverse",
    });
    marker.appendChild(el("path", { d: "M 0 0 L 10 5 L 0 10 z", class: "arrowhead" }));
    defs.appendChild(marker);
    return defs;
  }

  private drawEdges(parent: SVGElement, id: string, inst: InstructionJson): void {
    const doc = this.doc!;
    const from = doc.positions.get(id);
    if (from === undefined) return;
    const targets = successors(inst);
    const labels = isBranch(inst) ? ["TRUE", "FALSE"] : [null];
    targets.forEach((target, i) => {
      if (target === null) return;
      const to = doc.positions.get(target);
      if (to === undefined) return;
      const [a, b] = edgeEndpoints(from, nodeHeight(inst), to, nodeHeight(doc.flowchart.instructions[target]), target === id);
      parent.appendChild(
        el("line", {
          x1: a.x,
          y1: a.y,
          x2: b.x,
          y2: b.y,
          class: "edge",
          "marker-end": "url(#arrow)",
        }),
      );
      const label = labels[i];
      if (label !== null) {
        const text = el("text", {
          x: (a.x + b.x) / 2 + 6,
          y: (a.y + b.y) / 2 - 4,
          class: `edge-label ${label.toLowerCase()}`,
        });
        text.textContent = label;
        parent.appendChild(text);
      }
    });
  }

  private drawNode(parent: SVGElement, id: string, inst: InstructionJson): void {
    const doc = this.doc!;
    const center = doc.positions.get(id);
    if (center === undefined) return;
    const h = nodeHeight(inst);
    const group = el("g", { class: "node", "data-id": id });
    const selected = this.selected === id ? " selected" : "";
    if (isBranch(inst)) {
      const points = [
        `${center.x},${center.y - h / 2}`,
        `${center.x + NODE_W / 2},${center.y}`,
        `${center.x},${center.y + h / 2}`,
        `${center.x - NODE_W / 2},${center.y}`,
      ].join(" ");
      group.appendChild(el("polygon", { points, class: `branch-shape${selected}` }));
      const text = el("text", { x: center.x, y: center.y + 4, class: "node-text centered" });
      text.textContent = clip(inst.condition === "" ? "(no condition)" : inst.condition, 22);
      group.appendChild(text);
    } else {
      group.appendChild(
        el("rect", {
          x: center.x - NODE_W / 2,
          y: center.y - h / 2,
          width: NODE_W,
          height: h,
          rx: 6,
          class: `block-shape${selected}`,
        }),
      );
      const lines = inst.code.length > 0 ? inst.code : ["(empty block)"];
      lines.slice(0, 3).forEach((line, i) => {
        const text = el("text", {
          x: center.x - NODE_W / 2 + 10,
          y: center.y - h / 2 + 18 + i * 15,
          class: "node-text",
        });
        text.textContent = clip(i === 2 && lines.length > 3 ? "…" : line, 24);
        group.appendChild(text);
      });
    }
    if (doc.flowchart.entry === id) {
      group.appendChild(
        el("circle", {
          cx: center.x - NODE_W / 2,
          cy: center.y - h / 2,
          r: 7,
          class: "entry-marker",
        }),
      );
    }
    const diags = this.badges.get(id);
    if (diags !== undefined && diags.length > 0) {
      const isError = diags.some(isErrorDiagnostic);
      const badge = el("g", { class: `badge ${isError ? "error" : "warning"}` });
      badge.appendChild(
        el("circle", { cx: center.x + NODE_W / 2, cy: center.y - h / 2, r: 9 }),
      );
      const count = el("text", {
        x: center.x + NODE_W / 2,
        y: center.y - h / 2 + 4,
        class: "badge-count",
      });
      count.textContent = String(diags.length);
      badge.appendChild(count);
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = badgeTitle(diags);
      badge.appendChild(title);
      group.appendChild(badge);
    }
    parent.appendChild(group);
  }
}

/** Trim an edge line so the arrowhead lands on the target's border
 * instead of its center. A self-referential edge (should be refused
 * upstream, but files can contain them) gets a small offset loop. */
export function edgeEndpoints(
  from: Point,
  fromH: number,
  to: Point,
  toH: number,
  selfEdge: boolean,
): [Point, Point] {
  if (selfEdge) {
    return [
      { x: from.x + NODE_W / 2, y: from.y - fromH / 4 },
      { x: from.x + NODE_W / 2 + 26, y: from.y + fromH / 4 },
    ];
  }
  const dx = to.x - from.x;
  const dy = to.y - from.y;
  const dist = Math.hypot(dx, dy) || 1;
  const ux = dx / dist;
  const uy = dy / dist;
  const startTrim = borderDistance(ux, uy, fromH);
  const endTrim = borderDistance(ux, uy, toH);
  return [
    { x: from.x + ux * startTrim, y: from.y + uy * startTrim },
    { x: to.x - ux * endTrim, y: to.y - uy * endTrim },
  ];
}

function borderDistance(ux: number, uy: number, h: number): number {
  const alongX = Math.abs(ux) > 1e-9 ? NODE_W / 2 / Math.abs(ux) : Infinity;
  const alongY = Math.abs(uy) > 1e-9 ? h / 2 / Math.abs(uy) : Infinity;
  return Math.min(alongX, alongY);
}

function clip(s: string, n: number): string {
  return s.length <= n ? s : s.slice(0, n - 1) + "…";
}

function el(tag: string, attrs: Record<string, string | number>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

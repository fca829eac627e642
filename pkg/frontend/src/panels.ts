// Side panels: generated-code pane, run pane with the top-down scene
// view, diagnostics list, and the per-instruction inspector.

import type { CatalogJson, DiagnosticJson, RunBody } from "./types";
import type { EditorDocument } from "./docmodel";
import { isBranch } from "./types";
import { buildSceneView, shadeColor } from "./sceneview";
import { isErrorDiagnostic } from "./diagnostics";

const SVG_NS = "http://www.w3.org/2000/svg";

function clear(node: HTMLElement): void {
  while (node.firstChild !== null) node.removeChild(node.firstChild);
}

export class CodePane {
  private pre: HTMLPreElement;
  private note: HTMLElement;

  constructor(root: HTMLElement) {
    this.note = document.createElement("div");
    this.note.className = "pane-note";
    this.pre = document.createElement("pre");
    this.pre.className = "code-listing";
    root.appendChild(this.note);
    root.appendChild(this.pre);
  }

  /** Mirror of the service's compile output; exact bytes, no reformatting. */
  showCode(code: string): void {
    this.note.textContent = "";
    this.pre.textContent = code;
  }

  showNote(message: string): void {
    this.note.textContent = message;
    this.pre.textContent = "";
  }
}

export interface RunRequestHandler {
  (seed: number, stepLimit: number | undefined): void;
}

export class RunPane {
  private seedInput: HTMLInputElement;
  private stepInput: HTMLInputElement;
  private status: HTMLElement;
  private stdout: HTMLPreElement;
  private sceneHost: HTMLElement;

  constructor(root: HTMLElement, onRun: RunRequestHandler) {
    const controls = document.createElement("div");
    controls.className = "run-controls";

    const seedLabel = document.createElement("label");
    seedLabel.textContent = "seed ";
    this.seedInput = document.createElement("input");
    this.seedInput.type = "number";
    this.seedInput.value = "0";
    this.seedInput.className = "seed-field";
    seedLabel.appendChild(this.seedInput);

    const stepLabel = document.createElement("label");
    stepLabel.textContent = " step limit ";
    this.stepInput = document.createElement("input");
    this.stepInput.type = "number";
    this.stepInput.placeholder = "default";
    this.stepInput.className = "step-field";
    stepLabel.appendChild(this.stepInput);

    const button = document.createElement("button");
    button.textContent = "Run";
    button.className = "run-button";
    button.addEventListener("click", () => {
      const seed = Number.parseInt(this.seedInput.value, 10);
      const rawLimit = this.stepInput.value.trim();
      const limit = rawLimit === "" ? undefined : Number.parseInt(rawLimit, 10);
      onRun(Number.isFinite(seed) ? seed : 0, Number.isFinite(limit as number) ? limit : undefined);
    });

    controls.appendChild(seedLabel);
    controls.appendChild(stepLabel);
    controls.appendChild(button);

    this.status = document.createElement("div");
    this.status.className = "run-status";
    this.stdout = document.createElement("pre");
    this.stdout.className = "run-stdout";
    this.sceneHost = document.createElement("div");
    this.sceneHost.className = "scene-host";

    root.appendChild(controls);
    root.appendChild(this.status);
    root.appendChild(this.stdout);
    root.appendChild(this.sceneHost);
  }

  showResult(body: RunBody, catalog: CatalogJson | null): void {
    if (body.error === null) {
      const stats = body.stats;
      this.status.textContent =
        `finished: ${stats.steps_executed} steps, ` +
        `${stats.while_count} while, ${stats.if_count} if, ${stats.stmt_count} statements`;
      this.status.className = "run-status";
    } else if (body.error === "step_limit") {
      this.status.textContent = `stopped: step limit exceeded (partial output below)`;
      this.status.className = "run-status error";
    } else {
      this.status.textContent = `runtime error: ${body.detail ?? "unknown"}`;
      this.status.className = "run-status error";
    }
    this.stdout.textContent = body.stdout;
    this.renderScene(body, catalog);
  }

  showNote(message: string): void {
    this.status.textContent = message;
    this.status.className = "run-status error";
    this.stdout.textContent = "";
    clear(this.sceneHost);
  }

  private renderScene(body: RunBody, catalog: CatalogJson | null): void {
    clear(this.sceneHost);
    const view = buildSceneView(body.scene, catalog);
    if (view.districts.length === 0 && view.buildings.length === 0 && view.details.length === 0) {
      const empty = document.createElement("div");
      empty.className = "pane-note";
      empty.textContent = "scene is empty";
      this.sceneHost.appendChild(empty);
      return;
    }
    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", view.viewBox);
    svg.setAttribute("class", "scene-svg");
    for (const d of view.districts) {
      const rect = document.createElementNS(SVG_NS, "rect");
      rect.setAttribute("x", String(d.x));
      rect.setAttribute("y", String(d.y));
      rect.setAttribute("width", String(d.width));
      rect.setAttribute("height", String(d.height));
      rect.setAttribute("class", "district-rect");
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = `district ${d.label}`;
      rect.appendChild(title);
      svg.appendChild(rect);
    }
    for (const b of view.buildings) {
      const rect = document.createElementNS(SVG_NS, "rect");
      rect.setAttribute("x", String(b.x));
      rect.setAttribute("y", String(b.y));
      rect.setAttribute("width", String(b.width));
      rect.setAttribute("height", String(b.height));
      rect.setAttribute("fill", shadeColor(b.shade));
      rect.setAttribute("class", "building-rect");
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = `${b.id}: height ${b.worldHeight.toFixed(1)}`;
      rect.appendChild(title);
      svg.appendChild(rect);
    }
    for (const d of view.details) {
      const dot = document.createElementNS(SVG_NS, "circle");
      dot.setAttribute("cx", String(d.x));
      dot.setAttribute("cy", String(d.y));
      dot.setAttribute("r", String(d.radius));
      dot.setAttribute("class", "detail-icon");
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = `${d.name} (${d.id})`;
      dot.appendChild(title);
      svg.appendChild(dot);
    }
    this.sceneHost.appendChild(svg);
  }
}

export class DiagnosticsPanel {
  private list: HTMLElement;
  private summary: HTMLElement;

  constructor(
    root: HTMLElement,
    private onFocusInstruction: (id: string) => void,
  ) {
    this.summary = document.createElement("div");
    this.summary.className = "pane-note";
    this.list = document.createElement("ul");
    this.list.className = "diag-list";
    root.appendChild(this.summary);
    root.appendChild(this.list);
  }

  update(diagnostics: DiagnosticJson[]): void {
    clear(this.list);
    const errors = diagnostics.filter(isErrorDiagnostic).length;
    const warnings = diagnostics.length - errors;
    this.summary.textContent =
      diagnostics.length === 0
        ? "no diagnostics"
        : `${errors} error${errors === 1 ? "" : "s"}, ${warnings} warning${warnings === 1 ? "" : "s"}`;
    for (const diag of diagnostics) {
      const item = document.createElement("li");
      item.className = isErrorDiagnostic(diag) ? "diag error" : "diag warning";
      const rule = document.createElement("span");
      rule.className = "diag-rule";
      rule.textContent = diag.rule;
      item.appendChild(rule);
      item.appendChild(document.createTextNode(" " + diag.message));
      if (diag.instruction !== null) {
        const link = document.createElement("a");
        link.href = "#";
        link.textContent = ` @${diag.instruction}`;
        link.addEventListener("click", (e) => {
          e.preventDefault();
          this.onFocusInstruction(diag.instruction!);
        });
        item.appendChild(link);
      }
      this.list.appendChild(item);
    }
  }
}

export interface InspectorCallbacks {
  onCodeChange(id: string, lines: string[]): void;
  onConditionChange(id: string, condition: string): void;
  onSetEntry(id: string): void;
  onDelete(id: string): void;
}

export class InspectorPanel {
  constructor(
    private root: HTMLElement,
    private callbacks: InspectorCallbacks,
  ) {}

  show(doc: EditorDocument, id: string | null): void {
    clear(this.root);
    if (id === null || !(id in doc.flowchart.instructions)) {
      const note = document.createElement("div");
      note.className = "pane-note";
      note.textContent = "select an instruction to edit it";
      this.root.appendChild(note);
      return;
    }
    const inst = doc.flowchart.instructions[id];
    const heading = document.createElement("h3");
    heading.textContent = `${inst.kind} ${id}`;
    this.root.appendChild(heading);

    if (isBranch(inst)) {
      const label = document.createElement("label");
      label.textContent = "condition";
      const input = document.createElement("input");
      input.type = "text";
      input.value = inst.condition;
      input.className = "condition-field";
      input.addEventListener("input", () => this.callbacks.onConditionChange(id, input.value));
      label.appendChild(input);
      this.root.appendChild(label);
    } else {
      const label = document.createElement("label");
      label.textContent = "code (one statement per line)";
      const area = document.createElement("textarea");
      area.rows = 6;
      area.className = "code-field";
      area.value = inst.code.join("\n");
      area.addEventListener("input", () => {
        const lines = area.value.split("\n").filter((line) => line.trim() !== "");
        this.callbacks.onCodeChange(id, lines);
      });
      label.appendChild(area);
      this.root.appendChild(label);
    }

    const buttons = document.createElement("div");
    buttons.className = "inspector-buttons";
    const entryButton = document.createElement("button");
    entryButton.textContent = doc.flowchart.entry === id ? "entry ✓" : "set as entry";
    entryButton.disabled = doc.flowchart.entry === id;
    entryButton.addEventListener("click", () => this.callbacks.onSetEntry(id));
    const deleteButton = document.createElement("button");
    deleteButton.textContent = "delete";
    deleteButton.className = "danger";
    deleteButton.addEventListener("click", () => this.callbacks.onDelete(id));
    buttons.appendChild(entryButton);
    buttons.appendChild(deleteButton);
    this.root.appendChild(buttons);
  }
}

export class Banner {
  constructor(private root: HTMLElement) {
    root.hidden = true;
  }

  show(message: string): void {
    this.root.textContent = message;
    this.root.hidden = false;
  }

  hide(): void {
    this.root.hidden = true;
  }
}

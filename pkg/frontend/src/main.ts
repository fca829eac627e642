// Application shell: owns the document, routes edits through the undo
// stack, keeps validation and the code pane live, and talks to the
// service with latest-wins requests.

import type { CatalogJson, CompileBody, DiagnosticJson, DiagnosticsBody, RunBody } from "./types";
import type { EditorDocument, Point } from "./docmodel";
import {
  addBlock,
  addBranch,
  exportText,
  importDocument,
  ImportError,
  newDocument,
  removeInstruction,
  semanticFlowchart,
} from "./docmodel";
import { applyConnection, connectionDropDecision, type BranchLabel } from "./labeling";
import { splitDiagnostics } from "./diagnostics";
import { debounce, EndpointQueue } from "./netqueue";
import { makeApi } from "./api";
import { EditorCanvas, type Tool } from "./canvas";
import { Banner, CodePane, DiagnosticsPanel, InspectorPanel, RunPane } from "./panels";

const VALIDATE_DEBOUNCE_MS = 150;

interface Snapshot {
  flowchart: string;
  positions: [string, Point][];
}

function snapshot(doc: EditorDocument): Snapshot {
  return {
    flowchart: JSON.stringify(doc.flowchart),
    positions: [...doc.positions.entries()].map(([id, p]) => [id, { ...p }]),
  };
}

function restore(doc: EditorDocument, snap: Snapshot): void {
  doc.flowchart = JSON.parse(snap.flowchart);
  doc.positions = new Map(snap.positions.map(([id, p]) => [id, { ...p }]));
}

function main(): void {
  const $ = (id: string) => document.getElementById(id)!;

  const banner = new Banner($("banner"));
  const queue = new EndpointQueue();
  const urlField = $("server-url") as HTMLInputElement;
  urlField.value = localStorage.getItem("flowc-server-url") ?? "http://127.0.0.1:8787";
  urlField.addEventListener("change", () => {
    localStorage.setItem("flowc-server-url", urlField.value);
    catalog = null;
    void loadCatalog();
    scheduleChecks();
  });
  const api = () => makeApi(urlField.value, queue);

  let doc = newDocument();
  let selected: string | null = null;
  let catalog: CatalogJson | null = null;
  let lastDiagnostics: DiagnosticJson[] = [];
  const undoStack: Snapshot[] = [];

  const codePane = new CodePane($("code-pane"));
  const runPane = new RunPane($("run-pane"), (seed, stepLimit) => void runProgram(seed, stepLimit));
  const diagPanel = new DiagnosticsPanel($("diag-pane"), (id) => {
    selected = id;
    rerender();
  });
  const inspector = new InspectorPanel($("inspector"), {
    onCodeChange(id, lines) {
      mutate((d) => {
        const inst = d.flowchart.instructions[id];
        if (inst !== undefined && inst.kind === "block") inst.code = lines;
      }, false);
    },
    onConditionChange(id, condition) {
      mutate((d) => {
        const inst = d.flowchart.instructions[id];
        if (inst !== undefined && inst.kind === "branch") inst.condition = condition;
      }, false);
    },
    onSetEntry(id) {
      mutate((d) => {
        d.flowchart.entry = id;
      });
    },
    onDelete(id) {
      mutate((d) => removeInstruction(d, id));
      if (selected === id) selected = null;
      rerender();
    },
  });

  let pendingMoveSnapshot: Snapshot | null = null;
  const canvas = new EditorCanvas($("canvas") as unknown as SVGSVGElement, {
    onAddBlock(at) {
      mutate((d) => {
        selected = addBlock(d, at);
      });
      setTool("select");
    },
    onAddBranch(at) {
      mutate((d) => {
        selected = addBranch(d, at);
      });
      setTool("select");
    },
    onConnectDrop(sourceId, targetId) {
      void handleConnectDrop(sourceId, targetId);
    },
    onSelect(id) {
      selected = id;
      pendingMoveSnapshot = id !== null ? snapshot(doc) : null;
      rerender();
    },
    onMoveEnd() {
      // node positions changed during the drag; bank the pre-drag state
      if (pendingMoveSnapshot !== null) {
        pushUndo(pendingMoveSnapshot);
        pendingMoveSnapshot = null;
      }
    },
    onEditRequest(id) {
      selected = id;
      rerender();
    },
  });

  function pushUndo(snap: Snapshot): void {
    undoStack.push(snap);
    if (undoStack.length > 100) undoStack.shift();
  }

  /** Every semantic edit flows through here: snapshot for undo, apply,
   * redraw, re-check. Continuous edits (typing in the inspector) skip
   * per-keystroke undo snapshots. */
  function mutate(apply: (d: EditorDocument) => void, recordUndo = true): void {
    if (recordUndo) pushUndo(snapshot(doc));
    apply(doc);
    rerender();
    scheduleChecks();
  }

  function undo(): void {
    const snap = undoStack.pop();
    if (snap === undefined) return;
    restore(doc, snap);
    if (selected !== null && !(selected in doc.flowchart.instructions)) selected = null;
    rerender();
    scheduleChecks();
  }

  function rerender(): void {
    const split = splitDiagnostics(lastDiagnostics);
    canvas.render(doc, split.badges, selected);
    inspector.show(doc, selected);
    diagPanel.update(lastDiagnostics);
  }

  // --- service round-trips --------------------------------------------

  async function checkNow(): Promise<void> {
    const flowchart = semanticFlowchart(doc);
    const [validated, compiled] = await Promise.all([
      api().validate(flowchart),
      api().compile(flowchart),
    ]);
    if (validated.kind === "ok") {
      banner.hide();
      lastDiagnostics = (validated.body as DiagnosticsBody).diagnostics ?? [];
      rerender();
    } else if (validated.kind === "unreachable") {
      banner.show(`service unreachable (${validated.message}); editing continues offline`);
    }
    if (compiled.kind === "ok") {
      if (compiled.status === 200) {
        codePane.showCode((compiled.body as CompileBody).code);
      } else {
        codePane.showNote("document does not compile; see diagnostics");
      }
    } else if (compiled.kind === "unreachable") {
      codePane.showNote("service unreachable");
    }
  }

  const scheduleChecks = debounce(VALIDATE_DEBOUNCE_MS, () => void checkNow());

  async function runProgram(seed: number, stepLimit: number | undefined): Promise<void> {
    const result = await api().run(semanticFlowchart(doc), seed, stepLimit);
    if (result.kind === "unreachable") {
      banner.show(`service unreachable (${result.message})`);
      runPane.showNote("service unreachable");
      return;
    }
    if (result.kind === "superseded") return;
    banner.hide();
    if (result.status === 200) {
      runPane.showResult(result.body as RunBody, catalog);
      return;
    }
    const body = result.body as DiagnosticsBody | null;
    if (body !== null && Array.isArray(body.diagnostics)) {
      lastDiagnostics = body.diagnostics;
      rerender();
    }
    runPane.showNote("document does not run; see diagnostics");
    showTab("diag");
  }

  async function loadCatalog(): Promise<void> {
    const result = await api().catalog();
    if (result.kind === "ok" && result.status === 200) {
      catalog = result.body as CatalogJson;
    }
  }

  // --- connection drops -------------------------------------------------

  async function handleConnectDrop(sourceId: string, targetId: string): Promise<void> {
    const decision = connectionDropDecision(doc.flowchart, sourceId, targetId);
    if (decision.kind === "reject") {
      canvas.showRefusal(decision.reason);
      return;
    }
    if (decision.kind === "connect-block") {
      mutate((d) => applyConnection(d.flowchart, sourceId, targetId, null));
      return;
    }
    const labelDecision = decision.label;
    if (labelDecision.kind === "deduce") {
      mutate((d) => applyConnection(d.flowchart, sourceId, targetId, labelDecision.label));
      return;
    }
    if (labelDecision.kind === "prompt") {
      const choice = await promptBranchLabel();
      if (choice !== null) {
        mutate((d) => applyConnection(d.flowchart, sourceId, targetId, choice));
      }
    }
  }

  function promptBranchLabel(): Promise<BranchLabel | null> {
    return new Promise((resolve) => {
      const overlay = document.createElement("div");
      overlay.className = "label-overlay";
      const box = document.createElement("div");
      box.className = "label-box";
      const caption = document.createElement("div");
      caption.textContent = "Which arm is this connection?";
      box.appendChild(caption);
      const done = (value: BranchLabel | null) => {
        document.removeEventListener("keydown", onKey);
        overlay.remove();
        resolve(value);
      };
      for (const label of ["TRUE", "FALSE"] as BranchLabel[]) {
        const button = document.createElement("button");
        button.textContent = label;
        button.addEventListener("click", () => done(label));
        box.appendChild(button);
      }
      const onKey = (e: KeyboardEvent) => {
        if (e.key === "Escape") done(null);
      };
      document.addEventListener("keydown", onKey);
      overlay.addEventListener("click", (e) => {
        if (e.target === overlay) done(null);
      });
      overlay.appendChild(box);
      document.body.appendChild(overlay);
    });
  }

  // --- toolbar ------------------------------------------------------------

  function setTool(tool: Tool): void {
    canvas.tool = tool;
    for (const button of document.querySelectorAll<HTMLButtonElement>("[data-tool]")) {
      button.classList.toggle("active", button.dataset.tool === tool);
    }
  }

  for (const button of document.querySelectorAll<HTMLButtonElement>("[data-tool]")) {
    button.addEventListener("click", () => setTool(button.dataset.tool as Tool));
  }

  function showTab(name: string): void {
    for (const tab of document.querySelectorAll<HTMLElement>("[data-pane]")) {
      tab.hidden = tab.dataset.pane !== name;
    }
    for (const button of document.querySelectorAll<HTMLButtonElement>("[data-tab]")) {
      button.classList.toggle("active", button.dataset.tab === name);
    }
  }

  for (const button of document.querySelectorAll<HTMLButtonElement>("[data-tab]")) {
    button.addEventListener("click", () => showTab(button.dataset.tab!));
  }

  $("new-doc").addEventListener("click", () => {
    pushUndo(snapshot(doc));
    doc = newDocument();
    selected = null;
    lastDiagnostics = [];
    rerender();
    scheduleChecks();
  });

  const filePicker = $("file-picker") as HTMLInputElement;
  $("import-doc").addEventListener("click", () => filePicker.click());
  filePicker.addEventListener("change", () => {
    const file = filePicker.files?.[0];
    filePicker.value = "";
    if (file === undefined) return;
    void file.text().then((text) => {
      try {
        const imported = importDocument(text);
        pushUndo(snapshot(doc));
        doc = imported;
        selected = null;
        lastDiagnostics = [];
        rerender();
        scheduleChecks();
      } catch (err) {
        if (err instanceof ImportError) {
          banner.show(`import failed: ${err.message}`);
        } else {
          throw err;
        }
      }
    });
  });

  $("export-doc").addEventListener("click", () => {
    const blob = new Blob([exportText(doc)], { type: "application/json" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = `${doc.flowchart.id || "flowchart"}.flow.json`;
    link.click();
    URL.revokeObjectURL(link.href);
  });

  document.addEventListener("keydown", (e) => {
    if ((e.ctrlKey || e.metaKey) && e.key.toLowerCase() === "z") {
      e.preventDefault();
      undo();
      return;
    }
    const target = e.target as HTMLElement;
    const typing = target.tagName === "INPUT" || target.tagName === "TEXTAREA";
    if (!typing && (e.key === "Delete" || e.key === "Backspace") && selected !== null) {
      e.preventDefault();
      const id = selected;
      mutate((d) => removeInstruction(d, id));
      selected = null;
      rerender();
    }
  });

  // --- boot -----------------------------------------------------------

  setTool("select");
  showTab("code");
  rerender();
  void loadCatalog();
  scheduleChecks();
}

main();

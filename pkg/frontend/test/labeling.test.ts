import { describe, expect, it } from "vitest";
import type { FlowchartJson } from "../src/types";
import { applyConnection, branchLabelDecision, connectionDropDecision } from "../src/labeling";

function chart(): FlowchartJson {
  return {
    id: "t",
    entry: "a",
    instructions: {
      a: { kind: "block", code: ["x = 1"], next: null },
      b: { kind: "block", code: ["x = 2"], next: "a" },
      br: { kind: "branch", condition: "x < 3", true_next: null, false_next: null },
    },
    metadata: {},
  };
}

describe("branch labeling", () => {
  it("prompts with both options when the branch has no connections", () => {
    const d = branchLabelDecision(false, false);
    expect(d).toEqual({ kind: "prompt", options: ["TRUE", "FALSE"] });
  });

  it("deduces FALSE without a prompt when TRUE already exists", () => {
    const d = branchLabelDecision(true, false);
    expect(d).toEqual({ kind: "deduce", label: "FALSE" });
  });

  it("deduces TRUE when FALSE already exists", () => {
    const d = branchLabelDecision(false, true);
    expect(d).toEqual({ kind: "deduce", label: "TRUE" });
  });

  it("rejects a third connection", () => {
    const d = branchLabelDecision(true, true);
    expect(d.kind).toBe("reject");
  });
});

describe("connection drops", () => {
  it("refuses a self-connection at drop time", () => {
    const d = connectionDropDecision(chart(), "a", "a");
    expect(d.kind).toBe("reject");
    if (d.kind === "reject") expect(d.reason).toMatch(/itself/);
  });

  it("refuses a branch self-connection too", () => {
    expect(connectionDropDecision(chart(), "br", "br").kind).toBe("reject");
  });

  it("connects a block with a free outgoing edge", () => {
    const fc = chart();
    const d = connectionDropDecision(fc, "a", "b");
    expect(d.kind).toBe("connect-block");
    applyConnection(fc, "a", "b", null);
    expect(fc.instructions.a).toMatchObject({ next: "b" });
  });

  it("refuses a second edge out of a block", () => {
    const d = connectionDropDecision(chart(), "b", "br");
    expect(d.kind).toBe("reject");
    if (d.kind === "reject") expect(d.reason).toMatch(/already/);
  });

  it("walks a branch through prompt, deduce, reject", () => {
    const fc = chart();
    const first = connectionDropDecision(fc, "br", "a");
    expect(first).toMatchObject({ kind: "connect-branch", label: { kind: "prompt" } });
    applyConnection(fc, "br", "a", "TRUE");

    const second = connectionDropDecision(fc, "br", "b");
    expect(second).toMatchObject({
      kind: "connect-branch",
      label: { kind: "deduce", label: "FALSE" },
    });
    applyConnection(fc, "br", "b", "FALSE");
    expect(fc.instructions.br).toMatchObject({ true_next: "a", false_next: "b" });

    expect(connectionDropDecision(fc, "br", "a").kind).toBe("reject");
  });

  it("refuses drops involving unknown instructions", () => {
    expect(connectionDropDecision(chart(), "ghost", "a").kind).toBe("reject");
    expect(connectionDropDecision(chart(), "a", "ghost").kind).toBe("reject");
  });
});

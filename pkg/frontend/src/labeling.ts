// Connection rules, kept free of DOM concerns so they are testable.
//
// Branches have exactly two outgoing edges, TRUE and FALSE. The first
// connection drawn from a branch asks the user which one it is; the
// second takes the remaining label without a prompt; a third is
// refused. Blocks have a single unlabeled edge. Self-connections are
// never accepted: the constrained dialect has no legal single-node
// cycle, so the editor refuses them at drop time instead of letting
// the validator flag them a moment later.

import type { FlowchartJson } from "./types";
import { isBranch } from "./types";

export type BranchLabel = "TRUE" | "FALSE";

export type LabelDecision =
  | { kind: "prompt"; options: BranchLabel[] }
  | { kind: "deduce"; label: BranchLabel }
  | { kind: "reject"; reason: string };

export function branchLabelDecision(hasTrue: boolean, hasFalse: boolean): LabelDecision {
  if (hasTrue && hasFalse) {
    return { kind: "reject", reason: "branch already has both connections" };
  }
  if (hasTrue) return { kind: "deduce", label: "FALSE" };
  if (hasFalse) return { kind: "deduce", label: "TRUE" };
  return { kind: "prompt", options: ["TRUE", "FALSE"] };
}

export type DropDecision =
  | { kind: "connect-block" }
  | { kind: "connect-branch"; label: LabelDecision }
  | { kind: "reject"; reason: string };

export function connectionDropDecision(
  flowchart: FlowchartJson,
  sourceId: string,
  targetId: string,
): DropDecision {
  if (sourceId === targetId) {
    return { kind: "reject", reason: "an instruction cannot connect to itself" };
  }
  const source = flowchart.instructions[sourceId];
  if (source === undefined) {
    return { kind: "reject", reason: `no instruction '${sourceId}'` };
  }
  if (!(targetId in flowchart.instructions)) {
    return { kind: "reject", reason: `no instruction '${targetId}'` };
  }
  if (isBranch(source)) {
    const label = branchLabelDecision(source.true_next !== null, source.false_next !== null);
    if (label.kind === "reject") return { kind: "reject", reason: label.reason };
    return { kind: "connect-branch", label };
  }
  if (source.next !== null) {
    return { kind: "reject", reason: "block already has an outgoing connection" };
  }
  return { kind: "connect-block" };
}

/** Apply an accepted drop. For a branch whose decision was a prompt,
 * the caller passes the label the user picked. */
export function applyConnection(
  flowchart: FlowchartJson,
  sourceId: string,
  targetId: string,
  label: BranchLabel | null,
): void {
  const source = flowchart.instructions[sourceId];
  if (source === undefined) return;
  if (isBranch(source)) {
    if (label === "TRUE") source.true_next = targetId;
    else if (label === "FALSE") source.false_next = targetId;
  } else {
    source.next = targetId;
  }
}

// Sorting service diagnostics into canvas badges and panel entries.
//
// A diagnostic that names an instruction becomes a badge on that node;
// one without an instruction (document-level parse failures and the
// like) goes to the diagnostics panel. Warning rules are prefixed W_
// by the service; everything else is an error.

import type { DiagnosticJson } from "./types";

export function isErrorDiagnostic(diag: DiagnosticJson): boolean {
  return !diag.rule.startsWith("W_");
}

export interface SplitDiagnostics {
  /** instruction id -> its diagnostics, in service order */
  badges: Map<string, DiagnosticJson[]>;
  /** diagnostics with no instruction to pin them to */
  panel: DiagnosticJson[];
  errorCount: number;
  warningCount: number;
}

export function splitDiagnostics(diagnostics: DiagnosticJson[]): SplitDiagnostics {
  const badges = new Map<string, DiagnosticJson[]>();
  const panel: DiagnosticJson[] = [];
  let errorCount = 0;
  let warningCount = 0;
  for (const diag of diagnostics) {
    if (isErrorDiagnostic(diag)) errorCount += 1;
    else warningCount += 1;
    if (diag.instruction !== null) {
      const existing = badges.get(diag.instruction);
      if (existing === undefined) badges.set(diag.instruction, [diag]);
      else existing.push(diag);
    } else {
      panel.push(diag);
    }
  }
  return { badges, panel, errorCount, warningCount };
}

export function badgeTitle(diags: DiagnosticJson[]): string {
  return diags.map((d) => `${d.rule}: ${d.message}`).join("\n");
}

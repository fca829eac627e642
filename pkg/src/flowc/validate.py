"""Document validation: everything that can be said without running.

A document with no error-level diagnostics is guaranteed to structure
cleanly (the validator actually runs the structurer to find constraint
violations, so the two can never disagree). Warnings (W_ prefix) do
not block compilation.
"""

from __future__ import annotations

from .model import (
    C1_SELF_LOOP,
    DANGLING_REF,
    NO_ENTRY,
    W_UNREACHABLE,
    Block,
    Diagnostic,
    FlowchartDoc,
    has_errors,
    reachable_ids,
    successors,
)
from .structure import transform


def validate(doc: FlowchartDoc) -> list[Diagnostic]:
    """All diagnostics for a parsed document, errors before warnings."""
    diags: list[Diagnostic] = []

    # parse_flowchart already guarantees these on the documents it
    # returns, but hand-built ones come through here too
    if doc.entry not in doc.instructions:
        diags.append(Diagnostic(NO_ENTRY, None, f"entry {doc.entry!r} does not exist"))
    for inst in doc.instructions.values():
        for _, target in successors(doc, inst.id):
            if target not in doc.instructions:
                diags.append(Diagnostic(
                    DANGLING_REF, inst.id,
                    f"{inst.id!r} points at unknown instruction {target!r}",
                ))

    for inst in doc.instructions.values():
        for label, target in successors(doc, inst.id):
            if target == inst.id:
                what = "block" if isinstance(inst, Block) else f"branch ({label} connection)"
                diags.append(Diagnostic(
                    C1_SELF_LOOP, inst.id,
                    f"{what} {inst.id!r} connects to itself",
                ))

    if not has_errors(diags):
        result = transform(doc)
        if isinstance(result, Diagnostic):
            diags.append(result)

    if doc.entry in doc.instructions:
        reachable = reachable_ids(doc)
        for iid in doc.instructions:
            if iid not in reachable:
                diags.append(Diagnostic(
                    W_UNREACHABLE, iid,
                    f"instruction {iid!r} can never be reached from the entry",
                ))
    return diags

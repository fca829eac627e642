"""GOTO-style flowchart documents and their on-disk JSON format.

A flowchart is the plain graph the user draws: code blocks with one
outgoing connection and branches with a TRUE and a FALSE connection.
Connection targets are instruction ids; ``entry`` names the first
instruction. Documents are immutable once built and safe to share.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

FORMAT_SUFFIX = ".flow.json"

# Diagnostic rule codes. Rules with a W_ prefix are warnings; everything
# else is an error and blocks compilation.
C1_SELF_LOOP = "C1_SELF_LOOP"
C2_BAD_LOOP_TARGET = "C2_BAD_LOOP_TARGET"
C3_NO_JOIN = "C3_NO_JOIN"
DANGLING_REF = "DANGLING_REF"
NO_ENTRY = "NO_ENTRY"
PARSE_ERROR = "PARSE_ERROR"
W_UNREACHABLE = "W_UNREACHABLE"


@dataclass(frozen=True)
class Diagnostic:
    rule: str
    instruction: str | None
    message: str

    @property
    def is_error(self) -> bool:
        return not self.rule.startswith("W_")

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "instruction": self.instruction,
            "message": self.message,
        }


def has_errors(diagnostics) -> bool:
    return any(d.is_error for d in diagnostics)


@dataclass(frozen=True)
class Block:
    id: str
    code: tuple[str, ...]
    next: str | None = None


@dataclass(frozen=True)
class Branch:
    id: str
    condition: str
    true_next: str | None = None
    false_next: str | None = None


Instruction = Block | Branch


@dataclass(frozen=True)
class FlowchartDoc:
    id: str
    entry: str
    instructions: dict[str, Instruction]
    metadata: dict[str, str] = field(default_factory=dict)


def successors(doc: FlowchartDoc, instruction_id: str) -> list[tuple[str, str]]:
    """Outgoing edges of one instruction as (label, target) pairs.

    Labels are NEXT for blocks, TRUE/FALSE for branches. Connections
    that are not drawn (null targets) are omitted.
    """
    inst = doc.instructions.get(instruction_id)
    if inst is None:
        raise KeyError(f"no instruction with id {instruction_id!r}")
    out = []
    if isinstance(inst, Block):
        if inst.next is not None:
            out.append(("NEXT", inst.next))
    else:
        if inst.true_next is not None:
            out.append(("TRUE", inst.true_next))
        if inst.false_next is not None:
            out.append(("FALSE", inst.false_next))
    return out


def reachable_ids(doc: FlowchartDoc) -> set[str]:
    """Instruction ids reachable from the entry by drawn connections."""
    seen: set[str] = set()
    work = [doc.entry]
    while work:
        cur = work.pop()
        if cur in seen or cur not in doc.instructions:
            continue
        seen.add(cur)
        for _, target in successors(doc, cur):
            work.append(target)
    return seen


class _SchemaError(Exception):
    def __init__(self, message, instruction=None):
        super().__init__(message)
        self.message = message
        self.instruction = instruction


def _no_duplicate_keys(pairs):
    obj = {}
    for key, value in pairs:
        if key in obj:
            raise _SchemaError(f"duplicate key {key!r}")
        obj[key] = value
    return obj


def _build_instruction(iid, raw):
    if not isinstance(iid, str) or not iid:
        raise _SchemaError(f"instruction id must be a non-empty string, got {iid!r}")
    if not isinstance(raw, dict):
        raise _SchemaError(f"instruction {iid!r} must be an object", iid)
    kind = raw.get("kind")
    if kind == "block":
        code = raw.get("code")
        if not isinstance(code, list) or not code:
            raise _SchemaError(f"block {iid!r} needs a non-empty code list", iid)
        for line in code:
            if not isinstance(line, str) or not line:
                raise _SchemaError(f"block {iid!r} has a non-string or empty code line", iid)
        nxt = raw.get("next")
        if nxt is not None and not isinstance(nxt, str):
            raise _SchemaError(f"block {iid!r} has a non-string next target", iid)
        return Block(id=iid, code=tuple(code), next=nxt)
    if kind == "branch":
        cond = raw.get("condition")
        if not isinstance(cond, str) or not cond:
            raise _SchemaError(f"branch {iid!r} needs a condition string", iid)
        edges = {}
        for key in ("true_next", "false_next"):
            target = raw.get(key)
            if target is not None and not isinstance(target, str):
                raise _SchemaError(f"branch {iid!r} has a non-string {key} target", iid)
            edges[key] = target
        return Branch(id=iid, condition=cond, **edges)
    raise _SchemaError(f"instruction {iid!r} has unknown kind {kind!r}", iid)


def doc_from_json_obj(data) -> FlowchartDoc | list[Diagnostic]:
    """Build a document from already-decoded JSON.

    Returns the document, or a non-empty list of diagnostics. Never both:
    a document is only returned when it is structurally sound (ids
    resolve, entry exists). Language-level checks live in the validator.
    """
    diags: list[Diagnostic] = []
    if not isinstance(data, dict):
        return [Diagnostic(PARSE_ERROR, None, "top level must be a JSON object")]

    doc_id = data.get("id", "")
    if not isinstance(doc_id, str):
        return [Diagnostic(PARSE_ERROR, None, "document id must be a string")]

    raw_instructions = data.get("instructions")
    if not isinstance(raw_instructions, dict):
        return [Diagnostic(PARSE_ERROR, None, "missing or invalid instructions map")]

    instructions: dict[str, Instruction] = {}
    for iid, raw in raw_instructions.items():
        try:
            instructions[iid] = _build_instruction(iid, raw)
        except _SchemaError as exc:
            diags.append(Diagnostic(PARSE_ERROR, exc.instruction, exc.message))
    if diags:
        return diags

    metadata = data.get("metadata", {})
    if not isinstance(metadata, dict):
        return [Diagnostic(PARSE_ERROR, None, "metadata must be an object")]
    for key, value in metadata.items():
        if not isinstance(key, str) or not isinstance(value, str):
            return [Diagnostic(PARSE_ERROR, None, "metadata must map strings to strings")]

    entry = data.get("entry")
    if entry is None:
        diags.append(Diagnostic(NO_ENTRY, None, "document has no entry instruction"))
    elif not isinstance(entry, str):
        return [Diagnostic(PARSE_ERROR, None, "entry must be an instruction id string")]
    elif entry not in instructions:
        diags.append(Diagnostic(DANGLING_REF, entry, f"entry points at unknown instruction {entry!r}"))

    for inst in instructions.values():
        targets = []
        if isinstance(inst, Block):
            targets.append(inst.next)
        else:
            targets.extend((inst.true_next, inst.false_next))
        for target in targets:
            if target is not None and target not in instructions:
                diags.append(
                    Diagnostic(DANGLING_REF, inst.id, f"{inst.id!r} points at unknown instruction {target!r}")
                )
    if diags:
        return diags
    return FlowchartDoc(id=doc_id, entry=entry, instructions=instructions, metadata=dict(metadata))


def parse_flowchart(text: str) -> FlowchartDoc | list[Diagnostic]:
    """Parse flowchart JSON text into a document (or diagnostics)."""
    try:
        data = json.loads(text, object_pairs_hook=_no_duplicate_keys)
    except _SchemaError as exc:
        return [Diagnostic(PARSE_ERROR, None, exc.message)]
    except json.JSONDecodeError as exc:
        return [Diagnostic(PARSE_ERROR, None, f"invalid JSON: {exc.msg} (line {exc.lineno} column {exc.colno})")]
    return doc_from_json_obj(data)


def doc_to_json_obj(doc: FlowchartDoc) -> dict:
    instructions = {}
    for iid, inst in doc.instructions.items():
        if isinstance(inst, Block):
            instructions[iid] = {"kind": "block", "code": list(inst.code), "next": inst.next}
        else:
            instructions[iid] = {
                "kind": "branch",
                "condition": inst.condition,
                "true_next": inst.true_next,
                "false_next": inst.false_next,
            }
    return {
        "id": doc.id,
        "entry": doc.entry,
        "instructions": instructions,
        "metadata": dict(doc.metadata),
    }


def serialize_flowchart(doc: FlowchartDoc) -> str:
    """Canonical JSON for a document: sorted keys, 2-space indent.

    parse_flowchart(serialize_flowchart(doc)) reproduces the document
    exactly; tests rely on that round trip.
    """
    return json.dumps(doc_to_json_obj(doc), sort_keys=True, indent=2, ensure_ascii=True) + "\n"

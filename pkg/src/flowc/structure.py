"""Turning a constrained GOTO graph into a WHILE/IF tree.

The walk starts at the entry and consumes instructions depth-first.
Reaching an already-consumed instruction ends the current chain and
reports where it stopped; branch classification then decides what that
meeting point means:

* the FALSE chain loops back to the branch itself -> a negated While
  (the drawn condition is the exit condition), execution continues on
  the TRUE side;
* the TRUE chain loops back to the branch itself -> a plain While,
  execution continues on the FALSE side;
* the TRUE chain stops at an instruction the FALSE chain walked
  through -> an If/else joining there; the FALSE chain keeps only the
  part before the join, the rest is handed back;
* both chains stop at the same enclosing point (e.g. both flow back to
  an outer loop head) -> an If whose join is resolved further out;
* a TRUE chain that ends while the FALSE connection was never drawn ->
  an If with an empty else arm, and the program ends after it.

Everything else is a constraint violation: chains meeting nowhere get
C3_NO_JOIN, a chain that stops at structured code no enclosing
construct claims gets C2_BAD_LOOP_TARGET, and direct self-connections
get C1_SELF_LOOP before the walk even starts.

Trial chains are consumed into an append-only log so a failed guess
(e.g. the FALSE chain walked before the TRUE chain turned out to be
the loop body) can be rolled back by index range. The whole walk runs
on an explicit frame stack, so nesting depth is bounded by memory, not
by the interpreter's recursion limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .minilang import Expr, ExprStmt, ParseError, Stmt, parse_expression, parse_statement, tokenize
from .model import (
    C1_SELF_LOOP,
    C2_BAD_LOOP_TARGET,
    C3_NO_JOIN,
    PARSE_ERROR,
    Block,
    Diagnostic,
    FlowchartDoc,
    successors,
)


@dataclass
class StmtNode:
    text: str
    stmt: Stmt
    origin: str


@dataclass
class Seq:
    items: list = field(default_factory=list)


@dataclass
class While:
    cond_text: str
    cond: Expr
    negated: bool
    body: Seq
    origin: str


@dataclass
class If:
    cond_text: str
    cond: Expr
    then: Seq
    else_: Seq
    origin: str


@dataclass
class WhileProgram:
    body: Seq


_END = object()  # a chain ran off the end of the program


class _Abort(Exception):
    def __init__(self, diagnostic):
        self.diagnostic = diagnostic


class _WalkFrame:
    __slots__ = ("cur", "items", "spine")

    def __init__(self, cur):
        self.cur = cur
        self.items = []
        # (instruction id, index into items, index into the consumption
        # log) for every instruction this chain walked through; used to
        # split the chain at a join point.
        self.spine = []


class _BranchFrame:
    __slots__ = ("inst", "cond", "phase", "mark_f", "f_items", "f_exit", "f_spine", "mark_t")

    def __init__(self, inst, cond, mark_f):
        self.inst = inst
        self.cond = cond
        self.phase = "false"
        self.mark_f = mark_f
        self.f_items = None
        self.f_exit = None
        self.f_spine = None
        self.mark_t = None


def _parse_line(text, origin):
    try:
        return parse_statement(text)
    except ParseError as exc:
        raise _Abort(Diagnostic(PARSE_ERROR, origin, f"cannot parse {text!r}: {exc}")) from exc


def _parse_cond(text, origin):
    try:
        return parse_expression(text)
    except ParseError as exc:
        raise _Abort(Diagnostic(PARSE_ERROR, origin, f"cannot parse condition {text!r}: {exc}")) from exc


class _Structurer:
    def __init__(self, doc):
        self.doc = doc
        self.consumed = set()
        self.log = []

    def consume(self, iid):
        self.consumed.add(iid)
        self.log.append(iid)

    def rollback(self, start, end):
        for iid in self.log[start:end]:
            self.consumed.discard(iid)
        del self.log[start:end]

    def run(self):
        stack = [_WalkFrame(self.doc.entry)]
        ret = None       # result of the walk frame that just popped
        pending = None   # (node, continuation) handed to the walk frame on top
        while stack:
            top = stack[-1]
            if isinstance(top, _WalkFrame):
                if pending is not None:
                    node, cont = pending
                    pending = None
                    top.items.append(node)
                    if cont[0] == "goto":
                        top.cur = cont[1]
                    else:
                        stack.pop()
                        ret = (top.items, _END if cont[0] == "end" else cont[1], top.spine)
                        continue
                outcome = self._step(top, stack)
                if outcome is not None:
                    ret = outcome
            else:
                items, exit_at, spine = ret
                ret = None
                advance = self._branch_phase(top, stack, items, exit_at, spine)
                if advance is not None:
                    pending = advance
        return ret

    def _step(self, frame, stack):
        """Walk a chain until it ends, meets consumed code, or needs a
        branch classified. Returns the finished chain, or None after
        pushing classification frames."""
        while True:
            cur = frame.cur
            if cur is None:
                stack.pop()
                return (frame.items, _END, frame.spine)
            if cur in self.consumed:
                stack.pop()
                return (frame.items, cur, frame.spine)
            inst = self.doc.instructions[cur]
            self.consume(cur)
            frame.spine.append((cur, len(frame.items), len(self.log) - 1))
            if isinstance(inst, Block):
                for line in inst.code:
                    if not tokenize(line):
                        continue  # comment or blank line
                    stmt = _parse_line(line, cur)
                    frame.items.append(StmtNode(text=line, stmt=stmt, origin=cur))
                frame.cur = inst.next
                continue
            cond = _parse_cond(inst.condition, cur)
            if inst.true_next is None:
                raise _Abort(Diagnostic(
                    C3_NO_JOIN, cur,
                    f"branch {cur!r} has no TRUE connection, so its arms cannot join",
                ))
            if inst.true_next == inst.false_next:
                # both arms lead to the same instruction; keep the
                # condition evaluation, skip the empty If
                frame.items.append(StmtNode(text=inst.condition, stmt=ExprStmt(cond), origin=cur))
                frame.cur = inst.true_next
                continue
            bf = _BranchFrame(inst, cond, len(self.log))
            stack.append(bf)
            stack.append(_WalkFrame(inst.false_next))
            return None

    def _branch_phase(self, bf, stack, items, exit_at, spine):
        """Feed one finished chain walk into a branch frame.

        Returns the (node, continuation) to hand to the parent walk, or
        None when the TRUE chain still has to be walked.
        """
        inst = bf.inst
        if bf.phase == "false":
            if exit_at == inst.id:
                # FALSE chain came back to the branch: loop with the
                # drawn condition as exit condition
                node = While(inst.condition, bf.cond, True, Seq(items), inst.id)
                stack.pop()
                return (node, ("goto", inst.true_next))
            bf.f_items = items
            bf.f_exit = exit_at
            bf.f_spine = spine
            bf.mark_t = len(self.log)
            bf.phase = "true"
            stack.append(_WalkFrame(inst.true_next))
            return None

        stack.pop()
        if exit_at == inst.id:
            # TRUE chain loops back: the FALSE trial was a wrong guess
            self.rollback(bf.mark_f, bf.mark_t)
            node = While(inst.condition, bf.cond, False, Seq(items), inst.id)
            if inst.false_next is None:
                return (node, ("end",))
            return (node, ("goto", inst.false_next))
        if exit_at is not _END:
            for fid, item_index, log_index in bf.f_spine:
                if fid == exit_at:
                    # TRUE chain rejoined the FALSE chain: everything
                    # from the join on belongs to the code after the If
                    self.rollback(log_index, bf.mark_t)
                    node = If(inst.condition, bf.cond, Seq(items), Seq(bf.f_items[:item_index]), inst.id)
                    return (node, ("goto", exit_at))
        if exit_at == bf.f_exit:
            if exit_at is _END:
                if inst.false_next is None:
                    # no FALSE connection drawn: the program simply ends
                    # when the condition is false
                    node = If(inst.condition, bf.cond, Seq(items), Seq([]), inst.id)
                    return (node, ("end",))
                raise _Abort(Diagnostic(
                    C3_NO_JOIN, inst.id,
                    f"the arms of branch {inst.id!r} both end without joining",
                ))
            # both arms stop at the same enclosing instruction; the
            # construct that owns it will claim the exit
            node = If(inst.condition, bf.cond, Seq(items), Seq(bf.f_items), inst.id)
            return (node, ("at", exit_at))
        raise _Abort(Diagnostic(
            C3_NO_JOIN, inst.id,
            f"the arms of branch {inst.id!r} never join",
        ))


def transform(doc: FlowchartDoc) -> WhileProgram | Diagnostic:
    """Structure a flowchart into a WHILE/IF tree.

    Returns the tree, or the first diagnostic that rules it out.
    """
    for inst in doc.instructions.values():
        for _, target in successors(doc, inst.id):
            if target == inst.id:
                return Diagnostic(
                    C1_SELF_LOOP, inst.id,
                    f"instruction {inst.id!r} connects to itself",
                )
    s = _Structurer(doc)
    try:
        items, exit_at, _ = s.run()
    except _Abort as abort:
        return abort.diagnostic
    if exit_at is not _END:
        return Diagnostic(
            C2_BAD_LOOP_TARGET, exit_at,
            f"control flows back into structured code at {exit_at!r} "
            "but no enclosing loop starts there",
        )
    return WhileProgram(Seq(items))


def fold_stats(program: WhileProgram) -> dict:
    """Counts and nesting depth of a structured program."""
    while_count = 0
    if_count = 0
    stmt_count = 0
    max_depth = 0
    stack = [(item, 1) for item in reversed(program.body.items)]
    while stack:
        node, depth = stack.pop()
        if depth > max_depth:
            max_depth = depth
        if isinstance(node, StmtNode):
            stmt_count += 1
        elif isinstance(node, While):
            while_count += 1
            stack.extend((child, depth + 1) for child in reversed(node.body.items))
        else:
            if_count += 1
            stack.extend((child, depth + 1) for child in reversed(node.then.items))
            stack.extend((child, depth + 1) for child in reversed(node.else_.items))
    return {
        "while_count": while_count,
        "if_count": if_count,
        "stmt_count": stmt_count,
        "max_depth": max_depth,
    }

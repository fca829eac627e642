"""Python source emission for structured programs.

Statement lines are reproduced verbatim from the flowchart blocks, so
compiled output keeps whatever spacing the author typed. Only control
headers (while/if/else) are synthesized.
"""

from __future__ import annotations

from .structure import If, StmtNode, While, WhileProgram


def emit_python(program: WhileProgram, indent_width: int = 4, annotate: bool = False) -> str:
    """Emit readable Python-syntax source for a structured program.

    With annotate=True every emitted statement and header line carries
    an ``# origin: <instruction id>`` trailer.
    """
    pad = " " * indent_width
    lines: list[str] = []

    def put(depth, text, origin=None):
        if annotate and origin is not None:
            lines.append(f"{pad * depth}{text}  # origin: {origin}")
        else:
            lines.append(f"{pad * depth}{text}")

    # ops pop in source order; a node's children are pushed right after
    # its header so they come out before whatever follows the node
    work: list = [("seq", program.body.items, 0)]
    while work:
        op = work.pop()
        kind = op[0]
        if kind == "seq":
            _, items, depth = op
            for node in reversed(items):
                work.append(("node", node, depth))
        elif kind == "line":
            put(op[2], op[1])
        else:
            _, node, depth = op
            if isinstance(node, StmtNode):
                put(depth, node.text, node.origin)
            elif isinstance(node, While):
                cond = node.cond_text
                header = f"while not ({cond}):" if node.negated else f"while {cond}:"
                put(depth, header, node.origin)
                if node.body.items:
                    work.append(("seq", node.body.items, depth + 1))
                else:
                    work.append(("line", "pass", depth + 1))
            else:
                put(depth, f"if {node.cond_text}:", node.origin)
                if node.else_.items:
                    work.append(("seq", node.else_.items, depth + 1))
                    work.append(("line", "else:", depth))
                if node.then.items:
                    work.append(("seq", node.then.items, depth + 1))
                else:
                    work.append(("line", "pass", depth + 1))
    if not lines:
        return ""
    return "\n".join(lines) + "\n"

"""The statement language written inside flowchart blocks.

A strict subset of Python syntax: assignments (including ``+=``),
expression statements, ``print`` with comma-separated arguments, and
``from <module> import *``. Every number is a double. Conditions must
evaluate to booleans; there is no truthiness.

Grammar, roughly::

    statement  := import | print | assign | expr
    import     := "from" NAME "import" "*" | "import" NAME
    print      := "print" [expr ("," expr)*]
    assign     := lvalue "=" expr | lvalue "+=" expr
    expr       := or
    or         := and ("or" and)*
    and        := unot ("and" unot)*
    unot       := "not" unot | comparison
    comparison := additive [("=="|"!="|"<"|"<="|">"|">=") additive]
    additive   := multiplicative (("+"|"-") multiplicative)*
    multiplicative := unary (("*"|"/"|"%") unary)*
    unary      := "-" unary | postfix
    postfix    := atom ("." NAME | "(" args ")" | "[" expr "]")*
    atom       := NUMBER | STRING | NAME | "True" | "False" | "(" expr ")"

``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_KEYWORDS = {"and", "or", "not", "True", "False", "print", "from", "import"}
_TWO_CHAR_OPS = ("==", "!=", "<=", ">=", "+=")
_ONE_CHAR_OPS = set("+-*/%<>=(),.[]")
# Nesting cap for expressions. Each guarded level costs around ten
# interpreter stack frames during descent, so the cap must stay well
# below Python's default recursion limit to fail with a ParseError
# instead of a RecursionError.
_MAX_DEPTH = 64


class ParseError(Exception):
    def __init__(self, message, col):
        super().__init__(f"{message} (column {col})")
        self.message = message
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, NUMBER, STRING, OP
    value: str
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in " \t":
            i += 1
            continue
        if ch == "#":
            break
        col = i + 1
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            tokens.append(Token("NUMBER", text[i:j], col))
            i = j
            continue
        if ch == '"' or ch == "'":
            quote = ch
            j = i + 1
            parts = []
            while True:
                if j >= n:
                    raise ParseError("unterminated string", col)
                c = text[j]
                if c == "\\":
                    if j + 1 >= n:
                        raise ParseError("unterminated string escape", j + 1)
                    esc = text[j + 1]
                    mapped = {"n": "\n", "t": "\t", "\\": "\\", '"': '"', "'": "'"}.get(esc)
                    if mapped is None:
                        raise ParseError(f"unknown string escape \\{esc}", j + 1)
                    parts.append(mapped)
                    j += 2
                    continue
                if c == quote:
                    break
                parts.append(c)
                j += 1
            tokens.append(Token("STRING", "".join(parts), col))
            i = j + 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("NAME", text[i:j], col))
            i = j
            continue
        pair = text[i : i + 2]
        if pair in _TWO_CHAR_OPS:
            tokens.append(Token("OP", pair, col))
            i += 2
            continue
        if ch in _ONE_CHAR_OPS:
            tokens.append(Token("OP", ch, col))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", col)
    return tokens


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Number:
    value: float


@dataclass(frozen=True)
class Str:
    value: str


@dataclass(frozen=True)
class Bool:
    value: bool


@dataclass(frozen=True)
class Ident:
    name: str


@dataclass(frozen=True)
class Attr:
    base: "Expr"
    name: str


@dataclass(frozen=True)
class Index:
    base: "Expr"
    index: "Expr"


@dataclass(frozen=True)
class Call:
    callee: "Expr"
    args: tuple


@dataclass(frozen=True)
class Unary:
    op: str  # "-" or "not"
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Number | Str | Bool | Ident | Attr | Index | Call | Unary | Binary


@dataclass(frozen=True)
class Assign:
    target: Expr
    expr: Expr


@dataclass(frozen=True)
class ExprStmt:
    expr: Expr


@dataclass(frozen=True)
class Print:
    args: tuple


@dataclass(frozen=True)
class Import:
    module: str


Stmt = Assign | ExprStmt | Print | Import


class _Parser:
    def __init__(self, tokens, length):
        self.tokens = tokens
        self.i = 0
        self.end_col = length + 1
        self.depth = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.end_col)
        self.i += 1
        return tok

    def at_op(self, *values):
        tok = self.peek()
        return tok is not None and tok.kind == "OP" and tok.value in values

    def at_name(self, value):
        tok = self.peek()
        return tok is not None and tok.kind == "NAME" and tok.value == value

    def expect_op(self, value):
        tok = self.next()
        if tok.kind != "OP" or tok.value != value:
            raise ParseError(f"expected {value!r}, got {tok.value!r}", tok.col)
        return tok

    def expect_name(self):
        tok = self.next()
        if tok.kind != "NAME" or tok.value in _KEYWORDS:
            raise ParseError(f"expected a name, got {tok.value!r}", tok.col)
        return tok

    def expect_done(self):
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"unexpected trailing input {tok.value!r}", tok.col)

    def _enter(self, col):
        self.depth += 1
        if self.depth > _MAX_DEPTH:
            raise ParseError("expression nests too deeply", col)

    def _leave(self):
        self.depth -= 1

    # expression levels -----------------------------------------------------

    def expr(self):
        return self.or_expr()

    def or_expr(self):
        left = self.and_expr()
        while self.at_name("or"):
            self.next()
            left = Binary("or", left, self.and_expr())
        return left

    def and_expr(self):
        left = self.not_expr()
        while self.at_name("and"):
            self.next()
            left = Binary("and", left, self.not_expr())
        return left

    def not_expr(self):
        if self.at_name("not"):
            tok = self.next()
            self._enter(tok.col)
            operand = self.not_expr()
            self._leave()
            return Unary("not", operand)
        return self.comparison()

    def comparison(self):
        left = self.additive()
        if self.at_op("==", "!=", "<", "<=", ">", ">="):
            op = self.next()
            right = self.additive()
            if self.at_op("==", "!=", "<", "<=", ">", ">="):
                raise ParseError("comparisons cannot be chained", self.peek().col)
            return Binary(op.value, left, right)
        return left

    def additive(self):
        left = self.multiplicative()
        while self.at_op("+", "-"):
            op = self.next()
            left = Binary(op.value, left, self.multiplicative())
        return left

    def multiplicative(self):
        left = self.unary()
        while self.at_op("*", "/", "%"):
            op = self.next()
            left = Binary(op.value, left, self.unary())
        return left

    def unary(self):
        if self.at_op("-"):
            tok = self.next()
            self._enter(tok.col)
            operand = self.unary()
            self._leave()
            return Unary("-", operand)
        return self.postfix()

    def postfix(self):
        node = self.atom()
        while True:
            if self.at_op("."):
                self.next()
                name = self.expect_name()
                node = Attr(node, name.value)
            elif self.at_op("("):
                col = self.next().col
                self._enter(col)
                args = []
                if not self.at_op(")"):
                    args.append(self.expr())
                    while self.at_op(","):
                        self.next()
                        args.append(self.expr())
                self.expect_op(")")
                self._leave()
                node = Call(node, tuple(args))
            elif self.at_op("["):
                col = self.next().col
                self._enter(col)
                index = self.expr()
                self.expect_op("]")
                self._leave()
                node = Index(node, index)
            else:
                return node

    def atom(self):
        tok = self.next()
        if tok.kind == "NUMBER":
            return Number(float(tok.value))
        if tok.kind == "STRING":
            return Str(tok.value)
        if tok.kind == "NAME":
            if tok.value == "True":
                return Bool(True)
            if tok.value == "False":
                return Bool(False)
            if tok.value in _KEYWORDS:
                raise ParseError(f"{tok.value!r} cannot start an expression", tok.col)
            return Ident(tok.value)
        if tok.kind == "OP" and tok.value == "(":
            self._enter(tok.col)
            inner = self.expr()
            self.expect_op(")")
            self._leave()
            return inner
        raise ParseError(f"unexpected token {tok.value!r}", tok.col)


def _is_lvalue(expr):
    return isinstance(expr, (Ident, Attr, Index))


def parse_statement(text: str) -> Stmt:
    tokens = tokenize(text)
    if not tokens:
        raise ParseError("empty statement", 1)
    p = _Parser(tokens, len(text))
    if p.at_name("from"):
        p.next()
        module = p.expect_name()
        tok = p.next()
        if tok.kind != "NAME" or tok.value != "import":
            raise ParseError("expected 'import'", tok.col)
        p.expect_op("*")
        p.expect_done()
        return Import(module.value)
    if p.at_name("import"):
        p.next()
        module = p.expect_name()
        p.expect_done()
        return Import(module.value)
    if p.at_name("print"):
        p.next()
        args = []
        if p.peek() is not None:
            args.append(p.expr())
            while p.at_op(","):
                p.next()
                args.append(p.expr())
        p.expect_done()
        return Print(tuple(args))
    expr = p.expr()
    if p.at_op("="):
        tok = p.next()
        if not _is_lvalue(expr):
            raise ParseError("cannot assign to this expression", tok.col)
        value = p.expr()
        p.expect_done()
        return Assign(expr, value)
    if p.at_op("+="):
        tok = p.next()
        if not _is_lvalue(expr):
            raise ParseError("cannot assign to this expression", tok.col)
        value = p.expr()
        p.expect_done()
        # sugar: a += x is exactly a = a + x
        return Assign(expr, Binary("+", expr, value))
    p.expect_done()
    return ExprStmt(expr)


def parse_expression(text: str) -> Expr:
    tokens = tokenize(text)
    if not tokens:
        raise ParseError("empty expression", 1)
    p = _Parser(tokens, len(text))
    expr = p.expr()
    p.expect_done()
    return expr


# ---------------------------------------------------------------------------
# Pretty printing

_PREC = {
    "or": 1,
    "and": 2,
    "not": 3,
    "==": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5,
    "*": 6, "/": 6, "%": 6,
    "neg": 7,
}
_POSTFIX_PREC = 8
_ATOM_PREC = 9


def _escape_string(s):
    out = []
    for ch in s:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        else:
            out.append(ch)
    return '"' + "".join(out) + '"'


def format_number(v: float) -> str:
    if v != v or v in (math.inf, -math.inf):
        return repr(v)
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _prec_of(node):
    if isinstance(node, Binary):
        return _PREC[node.op]
    if isinstance(node, Unary):
        return _PREC["not"] if node.op == "not" else _PREC["neg"]
    if isinstance(node, (Attr, Call, Index)):
        return _POSTFIX_PREC
    return _ATOM_PREC


def to_source(node) -> str:
    """Statement or expression back to source text.

    parse(to_source(ast)) == ast for every well-formed tree; the
    printed form uses minimal parentheses.
    """
    if isinstance(node, Assign):
        return f"{to_source(node.target)} = {to_source(node.expr)}"
    if isinstance(node, ExprStmt):
        return to_source(node.expr)
    if isinstance(node, Print):
        if not node.args:
            return "print"
        return "print " + ", ".join(to_source(a) for a in node.args)
    if isinstance(node, Import):
        return f"from {node.module} import *"
    return _expr_source(node)


def _wrap(node, min_prec):
    text = _expr_source(node)
    if _prec_of(node) < min_prec:
        return f"({text})"
    return text


def _expr_source(node):
    if isinstance(node, Number):
        return format_number(node.value)
    if isinstance(node, Str):
        return _escape_string(node.value)
    if isinstance(node, Bool):
        return "True" if node.value else "False"
    if isinstance(node, Ident):
        return node.name
    if isinstance(node, Attr):
        return f"{_wrap(node.base, _POSTFIX_PREC)}.{node.name}"
    if isinstance(node, Index):
        return f"{_wrap(node.base, _POSTFIX_PREC)}[{_expr_source(node.index)}]"
    if isinstance(node, Call):
        args = ", ".join(_expr_source(a) for a in node.args)
        return f"{_wrap(node.callee, _POSTFIX_PREC)}({args})"
    if isinstance(node, Unary):
        if node.op == "not":
            return f"not {_wrap(node.operand, _PREC['not'])}"
        return f"-{_wrap(node.operand, _PREC['neg'])}"
    if isinstance(node, Binary):
        prec = _PREC[node.op]
        left = _wrap(node.left, prec)
        # all binary operators are left-associative
        right = _wrap(node.right, prec + 1)
        return f"{left} {node.op} {right}"
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# Values and evaluation

class EvalError(Exception):
    pass


class ApiObject:
    """Base for host objects exposed to scripts (layouts, generators...).

    Subclasses implement get_attr, which returns plain values or
    ApiFunction method handles.
    """

    kind = "object"

    def get_attr(self, name: str):
        raise EvalError(f"{self.describe()} has no attribute {name!r}")

    def describe(self) -> str:
        return f"<{self.kind}>"


class ApiFunction:
    """A callable exposed to scripts; fn takes the evaluated arg list."""

    def __init__(self, name, fn):
        self.name = name
        self.fn = fn

    def invoke(self, args):
        return self.fn(args)

    def describe(self):
        return f"<function {self.name}>"


class Environment:
    """Name bindings for one run.

    Lookup order: script variables, then import-gated builtins (only
    after ``from procedural import *`` has executed), then plain
    builtins. Assignment always writes a script variable.
    """

    def __init__(self, builtins=None, gated=None):
        self.vars: dict = {}
        self.builtins = builtins or {}
        self.gated = gated or {}
        self.imported = False

    def lookup(self, name):
        if name in self.vars:
            return self.vars[name]
        if name in self.gated:
            if self.imported:
                return self.gated[name]
            raise EvalError(f"unknown name {name!r} (missing 'from procedural import *'?)")
        if name in self.builtins:
            return self.builtins[name]
        raise EvalError(f"unknown name {name!r}")

    def assign(self, name, value):
        self.vars[name] = value


def _type_name(v):
    if type(v) is bool:
        return "bool"
    if type(v) is float:
        return "number"
    if type(v) is str:
        return "string"
    if type(v) is list:
        return "list"
    if v is None:
        return "null"
    if isinstance(v, ApiFunction):
        return "function"
    if isinstance(v, ApiObject):
        return v.kind
    return type(v).__name__


def require_number(v, what):
    if type(v) is not float:
        raise EvalError(f"{what} must be a number, got {_type_name(v)}")
    return v


def require_bool(v, what):
    if type(v) is not bool:
        raise EvalError(f"{what} must be a boolean, got {_type_name(v)}")
    return v


def format_value(v) -> str:
    """Render a value the way print shows it."""
    if type(v) is bool:
        return "True" if v else "False"
    if type(v) is float:
        return format_number(v)
    if type(v) is str:
        return v
    if type(v) is list:
        return "[" + ", ".join(format_value(item) for item in v) + "]"
    if v is None:
        return "None"
    if isinstance(v, (ApiObject, ApiFunction)):
        return v.describe()
    return repr(v)


def _eval_binary(op, left, right):
    if op == "+":
        if type(left) is float and type(right) is float:
            return left + right
        if type(left) is str and type(right) is str:
            return left + right
        raise EvalError(f"cannot add {_type_name(left)} and {_type_name(right)}")
    if op in ("-", "*", "/", "%"):
        l = require_number(left, f"left operand of {op!r}")
        r = require_number(right, f"right operand of {op!r}")
        if op == "-":
            return l - r
        if op == "*":
            return l * r
        if op == "/":
            if r == 0.0:
                raise EvalError("division by zero")
            return l / r
        if r == 0.0:
            raise EvalError("modulo by zero")
        return l % r
    if op in ("==", "!="):
        if type(left) is not type(right):
            raise EvalError(f"cannot compare {_type_name(left)} with {_type_name(right)}")
        result = left == right
        return result if op == "==" else not result
    if op in ("<", "<=", ">", ">="):
        both_numbers = type(left) is float and type(right) is float
        both_strings = type(left) is str and type(right) is str
        if not (both_numbers or both_strings):
            raise EvalError(f"cannot order {_type_name(left)} and {_type_name(right)}")
        if op == "<":
            return left < right
        if op == "<=":
            return left <= right
        if op == ">":
            return left > right
        return left >= right
    raise EvalError(f"unknown operator {op!r}")


def eval_expression(expr: Expr, env: Environment):
    if isinstance(expr, Number):
        return expr.value
    if isinstance(expr, Str):
        return expr.value
    if isinstance(expr, Bool):
        return expr.value
    if isinstance(expr, Ident):
        return env.lookup(expr.name)
    if isinstance(expr, Attr):
        base = eval_expression(expr.base, env)
        if isinstance(base, ApiObject):
            return base.get_attr(expr.name)
        raise EvalError(f"{_type_name(base)} value has no attributes")
    if isinstance(expr, Index):
        base = eval_expression(expr.base, env)
        if type(base) is not list:
            raise EvalError(f"cannot index into {_type_name(base)}")
        idx = require_number(eval_expression(expr.index, env), "index")
        if idx != int(idx):
            raise EvalError("index must be a whole number")
        i = int(idx)
        if i < 0 or i >= len(base):
            raise EvalError(f"index {i} out of range for list of length {len(base)}")
        return base[i]
    if isinstance(expr, Call):
        callee = eval_expression(expr.callee, env)
        if not isinstance(callee, ApiFunction):
            raise EvalError(f"{_type_name(callee)} value is not callable")
        args = [eval_expression(a, env) for a in expr.args]
        return callee.invoke(args)
    if isinstance(expr, Unary):
        if expr.op == "not":
            return not require_bool(eval_expression(expr.operand, env), "operand of 'not'")
        return -require_number(eval_expression(expr.operand, env), "operand of unary '-'")
    if isinstance(expr, Binary):
        if expr.op == "and":
            left = require_bool(eval_expression(expr.left, env), "left operand of 'and'")
            if not left:
                return False
            return require_bool(eval_expression(expr.right, env), "right operand of 'and'")
        if expr.op == "or":
            left = require_bool(eval_expression(expr.left, env), "left operand of 'or'")
            if left:
                return True
            return require_bool(eval_expression(expr.right, env), "right operand of 'or'")
        left = eval_expression(expr.left, env)
        right = eval_expression(expr.right, env)
        return _eval_binary(expr.op, left, right)
    raise TypeError(f"not an expression node: {expr!r}")

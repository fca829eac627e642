"""Interpreters for flowchart programs.

Two execution routes share one runtime: run() walks the structured
WHILE/IF tree, run_goto() walks the raw graph instruction by
instruction. Both count a step for every executed statement and every
condition evaluation, so a program lands on the same side of the step
limit no matter which route runs it. The graph route exists to
cross-check the structurer; products use the tree route.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import minilang, procedural
from .minilang import (
    ApiFunction,
    ApiObject,
    Assign,
    Environment,
    EvalError,
    ExprStmt,
    Ident,
    Import,
    Print,
    eval_expression,
    format_value,
    require_bool,
    require_number,
)
from .model import Block, FlowchartDoc
from .structure import If, StmtNode, While, WhileProgram

DEFAULT_STEP_LIMIT = 1_000_000


@dataclass
class RunResult:
    stdout: str
    scene: procedural.Scene
    steps_executed: int
    env_final: dict


class RunError(Exception):
    """A script-level error, attributed to the instruction running."""

    def __init__(self, message, origin, partial: RunResult):
        super().__init__(f"{message} (instruction {origin!r})" if origin else message)
        self.message = message
        self.origin = origin
        self.partial = partial


class StepLimitExceeded(Exception):
    """The program did not finish within the step limit."""

    def __init__(self, partial: RunResult):
        super().__init__(f"step limit of {partial.steps_executed} exceeded")
        self.partial = partial


class _Runtime:
    def __init__(self, seed, step_limit, catalog=None):
        self.scene = procedural.Scene(catalog)
        self.rng = procedural.Randomizer(seed)
        self.out: list[str] = []
        self.steps = 0
        self.step_limit = step_limit
        self.env = Environment(
            builtins=_plain_builtins(),
            gated=_procedural_builtins(self),
        )

    def result(self) -> RunResult:
        return RunResult(
            stdout="".join(self.out),
            scene=self.scene,
            steps_executed=self.steps,
            env_final=dict(self.env.vars),
        )

    def tick(self):
        if self.steps >= self.step_limit:
            raise StepLimitExceeded(self.result())
        self.steps += 1

    def eval(self, expr, origin):
        try:
            return eval_expression(expr, self.env)
        except EvalError as exc:
            raise RunError(str(exc), origin, self.result()) from exc

    def eval_condition(self, expr, origin):
        self.tick()
        value = self.eval(expr, origin)
        if type(value) is not bool:
            raise RunError("condition must evaluate to a boolean", origin, self.result())
        return value

    def exec_stmt(self, stmt, origin):
        self.tick()
        if isinstance(stmt, Assign):
            if not isinstance(stmt.target, Ident):
                raise RunError("only plain names can be assigned to", origin, self.result())
            self.env.assign(stmt.target.name, self.eval(stmt.expr, origin))
        elif isinstance(stmt, Print):
            values = [self.eval(arg, origin) for arg in stmt.args]
            self.out.append(" ".join(format_value(v) for v in values) + "\n")
        elif isinstance(stmt, Import):
            if stmt.module != "procedural":
                raise RunError(f"unknown module {stmt.module!r}", origin, self.result())
            self.env.imported = True
        elif isinstance(stmt, ExprStmt):
            self.eval(stmt.expr, origin)
        else:
            raise RunError(f"cannot execute {type(stmt).__name__}", origin, self.result())


def run(program: WhileProgram, seed: int = 0,
        step_limit: int = DEFAULT_STEP_LIMIT, catalog=None) -> RunResult:
    """Execute a structured program against a fresh scene."""
    rt = _Runtime(seed, step_limit, catalog)
    # frames: ["seq", items, index] or ["while", node]; a while frame
    # re-evaluates its condition every time it surfaces
    frames: list = [["seq", program.body.items, 0]]
    while frames:
        frame = frames[-1]
        if frame[0] == "seq":
            _, items, index = frame
            if index >= len(items):
                frames.pop()
                continue
            frame[2] += 1
            node = items[index]
            if isinstance(node, StmtNode):
                rt.exec_stmt(node.stmt, node.origin)
            elif isinstance(node, While):
                frames.append(["while", node])
            elif isinstance(node, If):
                taken = rt.eval_condition(node.cond, node.origin)
                arm = node.then if taken else node.else_
                frames.append(["seq", arm.items, 0])
        else:
            node = frame[1]
            value = rt.eval_condition(node.cond, node.origin)
            enter = (not value) if node.negated else value
            if enter:
                frames.append(["seq", node.body.items, 0])
            else:
                frames.pop()
    return rt.result()


def run_goto(doc: FlowchartDoc, seed: int = 0,
             step_limit: int = DEFAULT_STEP_LIMIT, catalog=None) -> RunResult:
    """Execute the raw graph directly, without structuring it first.

    Control simply follows connections; a missing connection halts the
    program. This is the reference behavior the structurer must
    preserve.
    """
    rt = _Runtime(seed, step_limit, catalog)
    block_cache: dict[str, list] = {}
    cond_cache: dict[str, object] = {}
    pc = doc.entry
    while pc is not None:
        inst = doc.instructions.get(pc)
        if inst is None:
            raise RunError(f"control reached unknown instruction {pc!r}", pc, rt.result())
        if isinstance(inst, Block):
            stmts = block_cache.get(pc)
            if stmts is None:
                stmts = []
                for line in inst.code:
                    if not minilang.tokenize(line):
                        continue
                    try:
                        stmts.append(minilang.parse_statement(line))
                    except minilang.ParseError as exc:
                        raise RunError(f"cannot parse {line!r}: {exc}", pc, rt.result()) from exc
                block_cache[pc] = stmts
            for stmt in stmts:
                rt.exec_stmt(stmt, pc)
            pc = inst.next
        else:
            cond = cond_cache.get(pc)
            if cond is None:
                try:
                    cond = minilang.parse_expression(inst.condition)
                except minilang.ParseError as exc:
                    raise RunError(f"cannot parse condition {inst.condition!r}: {exc}", pc, rt.result()) from exc
                cond_cache[pc] = cond
            value = rt.eval_condition(cond, pc)
            pc = inst.true_next if value else inst.false_next
    return rt.result()


# ---------------------------------------------------------------------------
# Script-facing API objects

class _VertexHandle(ApiObject):
    kind = "vertex"

    def __init__(self, vertex):
        self.vertex = vertex

    def get_attr(self, name):
        if name == "x":
            return self.vertex.x
        if name == "y":
            return self.vertex.y
        return super().get_attr(name)

    def describe(self):
        return f"<vertex ({format_value(self.vertex.x)}, {format_value(self.vertex.y)})>"


class _DistrictHandle(ApiObject):
    kind = "district"

    def __init__(self, district, layout):
        self.district = district
        self.layout = layout

    def get_attr(self, name):
        if name == "boundaryVerteces":
            return [_VertexHandle(v) for v in self.district.boundary]
        if name == "distance_from_center":
            return ApiFunction("distance_from_center", self._distance)
        return super().get_attr(name)

    def _distance(self, args):
        _expect_args("distance_from_center", args, 0, 0)
        return procedural.district_distance_from_center(self.layout, self.district)

    def describe(self):
        i, j = self.district.index
        return f"<district ({i}, {j})>"


class _LayoutHandle(ApiObject):
    kind = "layout"

    def __init__(self, rt, num_districts, diameter):
        self.rt = rt
        self.num_districts = num_districts
        self.diameter = diameter
        self.handles = None

    def get_attr(self, name):
        if name == "generate":
            return ApiFunction("generate", self._generate)
        if name == "get_district_list":
            return ApiFunction("get_district_list", self._district_list)
        return super().get_attr(name)

    def _generate(self, args):
        _expect_args("generate", args, 0, 0)
        layout = _api_call(lambda: procedural.manhattan_generate(
            self.num_districts, self.diameter, self.rt.rng))
        self.rt.scene.record_layout(layout)
        self.handles = [_DistrictHandle(d, layout) for d in layout.districts]
        return None

    def _district_list(self, args):
        _expect_args("get_district_list", args, 0, 0)
        if self.handles is None:
            raise EvalError("layout.generate() has not been called yet")
        return list(self.handles)

    def describe(self):
        return "<layout>"


class _RandomizerHandle(ApiObject):
    kind = "randomizer"

    def __init__(self, rt):
        self.rt = rt

    def get_attr(self, name):
        methods = {
            "interval": self._interval,
            "discreteInterval": self._discrete,
            "around": self._around,
            "flipCoin": self._flip,
        }
        if name in methods:
            return ApiFunction(name, methods[name])
        return super().get_attr(name)

    def _interval(self, args):
        _expect_args("interval", args, 2, 2)
        a = require_number(args[0], "interval() lower bound")
        b = require_number(args[1], "interval() upper bound")
        return _api_call(lambda: self.rt.rng.interval(a, b))

    def _discrete(self, args):
        _expect_args("discreteInterval", args, 2, 2)
        a = require_number(args[0], "discreteInterval() lower bound")
        b = require_number(args[1], "discreteInterval() upper bound")
        return _api_call(lambda: self.rt.rng.discrete_interval(a, b))

    def _around(self, args):
        _expect_args("around", args, 1, 1)
        x = require_number(args[0], "around() argument")
        return _api_call(lambda: self.rt.rng.around(x))

    def _flip(self, args):
        _expect_args("flipCoin", args, 0, 0)
        return self.rt.rng.flip_coin()

    def describe(self):
        return "<randomizer>"


class _NodeHandle(ApiObject):
    kind = "node"

    def __init__(self, node):
        self.node = node

    def get_attr(self, name):
        if name == "id":
            return self.node.id
        return super().get_attr(name)

    def describe(self):
        return f"<node {self.node.id}>"


class _PremadeGenHandle(ApiObject):
    kind = "premade building generator"

    def __init__(self, rt):
        self.rt = rt

    def get_attr(self, name):
        if name == "generate":
            return ApiFunction("generate", self._generate)
        return super().get_attr(name)

    def _generate(self, args):
        x, y, height, width = _building_args("generate", args)
        node = _api_call(lambda: procedural.premade_building_generate(
            self.rt.scene, self.rt.rng, x, y, height, width))
        return _NodeHandle(node)

    def describe(self):
        return "<premade building generator>"


class _ProceduralGenHandle(ApiObject):
    kind = "procedural building generator"

    def __init__(self, rt):
        self.rt = rt

    def get_attr(self, name):
        if name == "generate":
            return ApiFunction("generate", self._generate)
        return super().get_attr(name)

    def _generate(self, args):
        x, y, height, width = _building_args("generate", args)
        node = _api_call(lambda: procedural.procedural_building_generate(
            self.rt.scene, self.rt.rng, x, y, height, width))
        return _NodeHandle(node)

    def describe(self):
        return "<procedural building generator>"


class _DetailsGenHandle(ApiObject):
    kind = "details generator"

    def __init__(self, rt):
        self.rt = rt

    def get_attr(self, name):
        if name == "place":
            return ApiFunction("place", self._place)
        return super().get_attr(name)

    def _place(self, args):
        _expect_args("place", args, 3, 3)
        name = args[0]
        if type(name) is not str:
            raise EvalError("place() needs a prefab name string first")
        x = require_number(args[1], "place() x")
        y = require_number(args[2], "place() y")
        node = _api_call(lambda: procedural.details_place(self.rt.scene, name, x, y))
        return _NodeHandle(node)

    def describe(self):
        return "<details generator>"


def _expect_args(name, args, low, high):
    if not low <= len(args) <= high:
        if low == high:
            raise EvalError(f"{name}() takes {low} argument(s), got {len(args)}")
        raise EvalError(f"{name}() takes {low} to {high} arguments, got {len(args)}")


def _building_args(name, args):
    _expect_args(name, args, 2, 4)
    x = require_number(args[0], f"{name}() x")
    y = require_number(args[1], f"{name}() y")
    height = require_number(args[2], f"{name}() height") if len(args) > 2 else None
    width = require_number(args[3], f"{name}() width") if len(args) > 3 else None
    return x, y, height, width


def _api_call(fn):
    """Map library argument errors onto script-level errors."""
    try:
        return fn()
    except (ValueError, LookupError) as exc:
        raise EvalError(str(exc)) from exc


def _plain_builtins():
    def _len(args):
        _expect_args("len", args, 1, 1)
        value = args[0]
        if type(value) is list or type(value) is str:
            return float(len(value))
        raise EvalError("len() needs a list or a string")

    return {"len": ApiFunction("len", _len)}


def _procedural_builtins(rt: _Runtime):
    def make_layout(args):
        _expect_args("ManhattanLayout", args, 0, 2)
        num = require_number(args[0], "district count") if len(args) > 0 else 9.0
        if num != int(num):
            raise EvalError("district count must be a whole number")
        diameter = require_number(args[1], "district diameter") if len(args) > 1 else 2000.0
        return _LayoutHandle(rt, int(num), diameter)

    def make_randomizer(args):
        _expect_args("Randomizer", args, 0, 1)
        scatter = require_number(args[0], "scatter") if args else 0.1
        _api_call(lambda: rt.rng.set_scatter(scatter))
        return _RandomizerHandle(rt)

    def make_premade(args):
        _expect_args("PremadeBuildingGenerator", args, 0, 0)
        return _PremadeGenHandle(rt)

    def make_procedural(args):
        _expect_args("ProceduralBuildingGenerator", args, 0, 0)
        return _ProceduralGenHandle(rt)

    def make_details(args):
        _expect_args("DetailsGenerator", args, 0, 0)
        return _DetailsGenHandle(rt)

    return {
        "ManhattanLayout": ApiFunction("ManhattanLayout", make_layout),
        "Randomizer": ApiFunction("Randomizer", make_randomizer),
        "PremadeBuildingGenerator": ApiFunction("PremadeBuildingGenerator", make_premade),
        "ProceduralBuildingGenerator": ApiFunction("ProceduralBuildingGenerator", make_procedural),
        "DetailsGenerator": ApiFunction("DetailsGenerator", make_details),
    }

"""flowc: flowchart programs as a compilation target and runtime.

Validate constrained GOTO-style flowcharts, structure them into
WHILE/IF trees, emit readable Python-syntax source, and run them
against a deterministic procedural-city library.
"""

from .codegen import emit_python
from .interp import RunError, RunResult, StepLimitExceeded, run, run_goto
from .model import (
    Block,
    Branch,
    Diagnostic,
    FlowchartDoc,
    has_errors,
    parse_flowchart,
    serialize_flowchart,
    successors,
)
from .procedural import Randomizer, Scene, scene_export_obj, scene_serialize
from .structure import fold_stats, transform
from .validate import validate

__version__ = "0.1.0"

__all__ = [
    "Block",
    "Branch",
    "Diagnostic",
    "FlowchartDoc",
    "Randomizer",
    "RunError",
    "RunResult",
    "Scene",
    "StepLimitExceeded",
    "emit_python",
    "fold_stats",
    "has_errors",
    "parse_flowchart",
    "run",
    "run_goto",
    "scene_export_obj",
    "scene_serialize",
    "serialize_flowchart",
    "successors",
    "transform",
    "validate",
    "__version__",
]

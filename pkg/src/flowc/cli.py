"""Command line front end.

Thin by design: every subcommand parses arguments, calls the same core
functions the HTTP service uses, and maps outcomes to exit codes:

    0  success (validate: no error-level diagnostics)
    1  the document failed validation
    2  input/output problems (unreadable file, unwritable output)
    3  the program exceeded its step limit
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .codegen import emit_python
from .interp import DEFAULT_STEP_LIMIT, RunError, StepLimitExceeded, run
from .model import FORMAT_SUFFIX, Diagnostic, has_errors, parse_flowchart
from .procedural import scene_export_obj, scene_serialize
from .structure import transform
from .validate import validate


def _print_diagnostics(diags):
    for d in diags:
        print(json.dumps(d.to_json(), sort_keys=True), file=sys.stderr)


def _load_doc(path_text):
    """Returns (doc, exit_code); doc is None when exiting early."""
    try:
        text = Path(path_text).read_text("utf-8")
    except OSError as exc:
        print(f"flowc: cannot read {path_text}: {exc.strerror or exc}", file=sys.stderr)
        return None, 2
    result = parse_flowchart(text)
    if isinstance(result, list):
        _print_diagnostics(result)
        return None, 1
    return result, 0


def _checked_doc(path_text):
    doc, code = _load_doc(path_text)
    if doc is None:
        return None, code
    diags = validate(doc)
    _print_diagnostics(diags)
    if has_errors(diags):
        return None, 1
    return doc, 0


def _default_out_path(in_path: Path) -> Path:
    name = in_path.name
    if name.endswith(FORMAT_SUFFIX):
        stem = name[: -len(FORMAT_SUFFIX)]
    else:
        stem = in_path.stem
    return in_path.with_name(stem + ".py")


def _write_text(path: Path, text: str) -> int:
    try:
        path.write_text(text, "utf-8")
    except OSError as exc:
        print(f"flowc: cannot write {path}: {exc.strerror or exc}", file=sys.stderr)
        return 2
    return 0


def cmd_validate(args) -> int:
    doc, code = _load_doc(args.flowchart)
    if doc is None:
        return code
    diags = validate(doc)
    _print_diagnostics(diags)
    return 1 if has_errors(diags) else 0


def cmd_compile(args) -> int:
    doc, code = _checked_doc(args.flowchart)
    if doc is None:
        return code
    program = transform(doc)
    if isinstance(program, Diagnostic):  # unreachable after validate; belt and braces
        _print_diagnostics([program])
        return 1
    source = emit_python(program, annotate=args.annotate)
    if args.out is not None:
        out_path = Path(args.out)
    elif args.scene:
        out_path = Path("build_scene.py")
    else:
        out_path = _default_out_path(Path(args.flowchart))
    code = _write_text(out_path, source)
    if code == 0:
        print(f"wrote {out_path}")
    return code


def cmd_run(args) -> int:
    doc, code = _checked_doc(args.flowchart)
    if doc is None:
        return code
    program = transform(doc)
    if isinstance(program, Diagnostic):
        _print_diagnostics([program])
        return 1
    try:
        result = run(program, seed=args.seed, step_limit=args.step_limit)
    except StepLimitExceeded as exc:
        sys.stdout.write(exc.partial.stdout)
        print(f"flowc: step limit of {args.step_limit} exceeded", file=sys.stderr)
        return 3
    except RunError as exc:
        sys.stdout.write(exc.partial.stdout)
        print(f"flowc: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(result.stdout)
    exit_code = 0
    if args.scene_out is not None:
        exit_code = _write_text(Path(args.scene_out), scene_serialize(result.scene) + "\n") or exit_code
    if args.obj_out is not None:
        exit_code = _write_text(Path(args.obj_out), scene_export_obj(result.scene)) or exit_code
    return exit_code


def cmd_serve(args) -> int:
    import uvicorn

    from .server import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flowc",
        description="Validate, compile and run flowchart programs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a flowchart document")
    p.add_argument("flowchart", help=f"path to a {FORMAT_SUFFIX} document")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("compile", help="emit Python-syntax source for a flowchart")
    p.add_argument("flowchart")
    p.add_argument("--out", help="output path (default: input name with .py)")
    p.add_argument("--scene", action="store_true",
                   help="write to build_scene.py in the working directory")
    p.add_argument("--annotate", action="store_true",
                   help="append '# origin: <id>' trailers to emitted lines")
    p.set_defaults(fn=cmd_compile)

    p = sub.add_parser("run", help="execute a flowchart")
    p.add_argument("flowchart")
    p.add_argument("--seed", type=int, default=0, help="randomizer seed (default 0)")
    p.add_argument("--step-limit", type=int, default=DEFAULT_STEP_LIMIT)
    p.add_argument("--scene-out", help="write the scene JSON here")
    p.add_argument("--obj-out", help="write a Wavefront OBJ export here")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8787)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())

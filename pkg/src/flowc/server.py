"""HTTP service exposing the toolkit to editors.

Four endpoints, all JSON:

    POST /api/validate   flowchart document -> diagnostics
    POST /api/compile    flowchart document -> emitted source
    POST /api/run        {flowchart, seed, step_limit} -> stdout + scene
    GET  /api/catalog    the prefab catalog manifest

Compilation here and in the CLI go through the same emitter, so the
code strings are byte-identical.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .codegen import emit_python
from .interp import DEFAULT_STEP_LIMIT, RunError, StepLimitExceeded, run
from .model import PARSE_ERROR, Diagnostic, doc_from_json_obj, has_errors
from .procedural import catalog_manifest, scene_serialize
from .structure import fold_stats, transform
from .validate import validate

MAX_BODY_BYTES = 1 << 20  # 1 MiB
MAX_STEP_LIMIT = 10_000_000

app = FastAPI(title="flowc", version="0.1.0")
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["*"],
    allow_headers=["*"],
)


class DiagnosticModel(BaseModel):
    rule: str
    instruction: str | None
    message: str


class DiagnosticsResponse(BaseModel):
    diagnostics: list[DiagnosticModel]


class CompileResponse(BaseModel):
    code: str


class RunStats(BaseModel):
    steps_executed: int
    while_count: int
    if_count: int
    stmt_count: int
    max_depth: int


class RunResponse(BaseModel):
    stdout: str
    scene: dict
    stats: RunStats
    error: str | None = None


def _diag_payload(diags) -> dict:
    return {"diagnostics": [d.to_json() for d in diags]}


def _diag_response(diags, status) -> JSONResponse:
    return JSONResponse(_diag_payload(diags), status_code=status)


async def _read_json(request: Request):
    """Returns (data, error_response)."""
    body = await request.body()
    if len(body) > MAX_BODY_BYTES:
        return None, JSONResponse(
            {"detail": f"request body exceeds {MAX_BODY_BYTES} bytes"},
            status_code=413,
        )
    try:
        return json.loads(body), None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        diag = Diagnostic(PARSE_ERROR, None, f"invalid JSON: {exc}")
        return None, _diag_response([diag], 400)


def _parse_doc(data):
    """Returns (doc, diagnostics)."""
    result = doc_from_json_obj(data)
    if isinstance(result, list):
        return None, result
    return result, None


@app.post("/api/validate")
async def api_validate(request: Request):
    data, error = await _read_json(request)
    if error is not None:
        return error
    doc, parse_diags = _parse_doc(data)
    if doc is None:
        if any(d.rule == PARSE_ERROR for d in parse_diags):
            return _diag_response(parse_diags, 400)
        return _diag_response(parse_diags, 200)
    return _diag_payload(validate(doc))


@app.post("/api/compile")
async def api_compile(request: Request):
    data, error = await _read_json(request)
    if error is not None:
        return error
    doc, parse_diags = _parse_doc(data)
    if doc is None:
        status = 400 if any(d.rule == PARSE_ERROR for d in parse_diags) else 422
        return _diag_response(parse_diags, status)
    diags = validate(doc)
    if has_errors(diags):
        return _diag_response(diags, 422)
    program = transform(doc)
    if isinstance(program, Diagnostic):
        return _diag_response([program], 422)
    return {"code": emit_python(program)}


@app.post("/api/run")
async def api_run(request: Request):
    data, error = await _read_json(request)
    if error is not None:
        return error
    if not isinstance(data, dict) or "flowchart" not in data:
        diag = Diagnostic(PARSE_ERROR, None, "body must be {flowchart, seed?, step_limit?}")
        return _diag_response([diag], 400)
    seed = data.get("seed", 0)
    step_limit = data.get("step_limit", DEFAULT_STEP_LIMIT)
    if not isinstance(seed, int) or isinstance(seed, bool):
        return JSONResponse({"detail": "seed must be an integer"}, status_code=422)
    if not isinstance(step_limit, int) or isinstance(step_limit, bool) or step_limit < 1:
        return JSONResponse({"detail": "step_limit must be a positive integer"}, status_code=422)
    step_limit = min(step_limit, MAX_STEP_LIMIT)

    doc, parse_diags = _parse_doc(data["flowchart"])
    if doc is None:
        status = 400 if any(d.rule == PARSE_ERROR for d in parse_diags) else 422
        return _diag_response(parse_diags, status)
    diags = validate(doc)
    if has_errors(diags):
        return _diag_response(diags, 422)
    program = transform(doc)
    if isinstance(program, Diagnostic):
        return _diag_response([program], 422)

    stats = fold_stats(program)

    def payload(result, error_kind=None):
        return RunResponse(
            stdout=result.stdout,
            scene=json.loads(scene_serialize(result.scene)),
            stats=RunStats(steps_executed=result.steps_executed, **stats),
            error=error_kind,
        )

    try:
        result = run(program, seed=seed, step_limit=step_limit)
    except StepLimitExceeded as exc:
        return payload(exc.partial, "step_limit")
    except RunError as exc:
        body = payload(exc.partial, "runtime_error").model_dump()
        body["detail"] = str(exc)
        return JSONResponse(body, status_code=200)
    return payload(result)


@app.get("/api/catalog")
def api_catalog():
    return catalog_manifest()

// Typed faces over the service endpoints. Every response that carries
// a JSON body is surfaced, whatever the status: the service reports
// validation problems as diagnostics bodies on 200, 400 and 422 alike,
// and those diagnostics are the product, not a transport failure.

import type {
  CatalogJson,
  CompileBody,
  DiagnosticsBody,
  FlowchartJson,
  RunBody,
} from "./types";
import type { EndpointQueue, PostResult } from "./netqueue";

export type ApiResult<T> =
  | { kind: "ok"; status: number; body: T }
  | { kind: "superseded" }
  | { kind: "unreachable"; message: string };

function shape<T>(result: PostResult): ApiResult<T> {
  if (result.kind === "ok") return { kind: "ok", status: result.status, body: result.body as T };
  return result;
}

export interface Api {
  validate(flowchart: FlowchartJson): Promise<ApiResult<DiagnosticsBody>>;
  compile(flowchart: FlowchartJson): Promise<ApiResult<CompileBody | DiagnosticsBody>>;
  run(
    flowchart: FlowchartJson,
    seed: number,
    stepLimit?: number,
  ): Promise<ApiResult<RunBody | DiagnosticsBody>>;
  catalog(): Promise<ApiResult<CatalogJson>>;
}

export function makeApi(baseUrl: string, queue: EndpointQueue): Api {
  const url = (path: string) => baseUrl.replace(/\/$/, "") + path;
  return {
    // validate and compile take the document itself as the body;
    // only run wraps it to make room for seed and step_limit.
    async validate(flowchart) {
      return shape(await queue.post(url("/api/validate"), flowchart));
    },
    async compile(flowchart) {
      return shape(await queue.post(url("/api/compile"), flowchart));
    },
    async run(flowchart, seed, stepLimit) {
      const payload: Record<string, unknown> = { flowchart, seed };
      if (stepLimit !== undefined) payload.step_limit = stepLimit;
      return shape(await queue.post(url("/api/run"), payload));
    },
    async catalog() {
      return shape(await queue.get(url("/api/catalog")));
    },
  };
}

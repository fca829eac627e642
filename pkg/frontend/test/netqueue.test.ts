import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { debounce, EndpointQueue } from "../src/netqueue";
import { splitDiagnostics } from "../src/diagnostics";

describe("debounce", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });
  afterEach(() => {
    vi.useRealTimers();
  });

  it("collapses a burst into one trailing call with the last arguments", () => {
    const calls: number[] = [];
    const fire = debounce(150, (n: number) => calls.push(n));
    fire(1);
    vi.advanceTimersByTime(100);
    fire(2);
    vi.advanceTimersByTime(100);
    fire(3);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(150);
    expect(calls).toEqual([3]);
  });

  it("cancel drops the pending call", () => {
    const calls: number[] = [];
    const fire = debounce(150, (n: number) => calls.push(n));
    fire(1);
    fire.cancel();
    vi.advanceTimersByTime(500);
    expect(calls).toEqual([]);
  });

  it("flush runs the pending call immediately", () => {
    const calls: number[] = [];
    const fire = debounce(150, (n: number) => calls.push(n));
    fire(7);
    fire.flush();
    expect(calls).toEqual([7]);
    fire.flush(); // nothing pending; must not fire again
    expect(calls).toEqual([7]);
  });
});

type Responder = (payload: unknown, signal: AbortSignal) => Promise<Response>;

function fakeFetch(responder: Responder): typeof fetch {
  return ((_url: string, init?: RequestInit) => {
    const payload = init?.body !== undefined ? JSON.parse(init.body as string) : null;
    return responder(payload, init!.signal!);
  }) as unknown as typeof fetch;
}

function jsonResponse(status: number, body: unknown): Response {
  return {
    status,
    json: () => Promise.resolve(body),
  } as unknown as Response;
}

describe("latest-wins endpoint queue", () => {
  it("returns the response for a single post", async () => {
    const queue = new EndpointQueue(
      fakeFetch((payload) => Promise.resolve(jsonResponse(200, { echo: payload }))),
    );
    const result = await queue.post("/api/validate", { n: 1 });
    expect(result).toEqual({ kind: "ok", status: 200, body: { echo: { n: 1 } } });
  });

  it("supersedes an older in-flight request when a newer one arrives", async () => {
    const gates = new Map<number, () => void>();
    const queue = new EndpointQueue(
      fakeFetch((payload, signal) => {
        const n = (payload as { n: number }).n;
        return new Promise<Response>((resolve, reject) => {
          gates.set(n, () => resolve(jsonResponse(200, { n })));
          signal.addEventListener("abort", () => reject(new DOMException("aborted", "AbortError")));
        });
      }),
    );
    const first = queue.post("/api/validate", { n: 1 });
    const second = queue.post("/api/validate", { n: 2 });
    gates.get(2)!();
    expect(await second).toEqual({ kind: "ok", status: 200, body: { n: 2 } });
    expect(await first).toEqual({ kind: "superseded" });
  });

  it("keeps different endpoints independent", async () => {
    const seen: string[] = [];
    const queue = new EndpointQueue(
      ((url: string) => {
        seen.push(url);
        return Promise.resolve(jsonResponse(200, {}));
      }) as unknown as typeof fetch,
    );
    await Promise.all([queue.post("/api/validate", {}), queue.post("/api/compile", {})]);
    expect(seen.sort()).toEqual(["/api/compile", "/api/validate"]);
  });

  it("reports a dead server as unreachable, not as an exception", async () => {
    const queue = new EndpointQueue(
      fakeFetch(() => Promise.reject(new TypeError("fetch failed"))),
    );
    const result = await queue.post("/api/validate", {});
    expect(result).toMatchObject({ kind: "unreachable", message: "fetch failed" });
  });

  it("passes error statuses through as ok results with the body intact", async () => {
    const body = {
      diagnostics: [{ rule: "PARSE_ERROR", instruction: "a", message: "bad" }],
    };
    const queue = new EndpointQueue(fakeFetch(() => Promise.resolve(jsonResponse(400, body))));
    const result = await queue.post("/api/validate", {});
    expect(result).toEqual({ kind: "ok", status: 400, body });
  });
});

describe("diagnostics splitting", () => {
  it("pins instruction-bound diagnostics as badges and the rest to the panel", () => {
    const split = splitDiagnostics([
      { rule: "C1_SELF_LOOP", instruction: "a", message: "loops to itself" },
      { rule: "C3_NO_JOIN", instruction: "a", message: "arms do not rejoin" },
      { rule: "PARSE_ERROR", instruction: null, message: "invalid JSON" },
      { rule: "W_UNREACHABLE", instruction: "b", message: "never reached" },
    ]);
    expect(split.badges.get("a")).toHaveLength(2);
    expect(split.badges.get("b")).toHaveLength(1);
    expect(split.panel).toHaveLength(1);
    expect(split.panel[0].rule).toBe("PARSE_ERROR");
    expect(split.errorCount).toBe(3);
    expect(split.warningCount).toBe(1);
  });

  it("accounts for every error-level diagnostic exactly once", () => {
    const diagnostics = [
      { rule: "C2_BAD_LOOP_TARGET", instruction: "x", message: "m1" },
      { rule: "DANGLING_REF", instruction: null, message: "m2" },
      { rule: "C1_SELF_LOOP", instruction: "y", message: "m3" },
    ];
    const split = splitDiagnostics(diagnostics);
    let badged = 0;
    for (const list of split.badges.values()) badged += list.length;
    expect(badged + split.panel.length).toBe(diagnostics.length);
  });
});

// Request plumbing for live validation: debounce plus latest-wins.
//
// The editor fires a request on every pause in typing. Only the newest
// response per endpoint may win; anything superseded is aborted so a
// slow validate can never overwrite the result of a newer one.

export interface Debounced<A extends unknown[]> {
  (...args: A): void;
  cancel(): void;
  flush(): void;
}

export function debounce<A extends unknown[]>(ms: number, fn: (...args: A) => void): Debounced<A> {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let pending: A | null = null;
  const wrapped = (...args: A) => {
    pending = args;
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = null;
      const args2 = pending!;
      pending = null;
      fn(...args2);
    }, ms);
  };
  wrapped.cancel = () => {
    if (timer !== null) clearTimeout(timer);
    timer = null;
    pending = null;
  };
  wrapped.flush = () => {
    if (timer === null) return;
    clearTimeout(timer);
    timer = null;
    const args = pending!;
    pending = null;
    fn(...args);
  };
  return wrapped;
}

export type PostResult =
  | { kind: "ok"; status: number; body: unknown }
  | { kind: "superseded" }
  | { kind: "unreachable"; message: string };

/** One in-flight request per endpoint; a newer post aborts the older. */
export class EndpointQueue {
  private inFlight = new Map<string, AbortController>();

  constructor(private fetchImpl: typeof fetch = fetch) {}

  async post(url: string, payload: unknown): Promise<PostResult> {
    const previous = this.inFlight.get(url);
    if (previous !== undefined) previous.abort();
    const controller = new AbortController();
    this.inFlight.set(url, controller);
    try {
      const response = await this.fetchImpl(url, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(payload),
        signal: controller.signal,
      });
      const body = await response.json().catch(() => null);
      if (controller.signal.aborted) return { kind: "superseded" };
      return { kind: "ok", status: response.status, body };
    } catch (err) {
      if (controller.signal.aborted) return { kind: "superseded" };
      return { kind: "unreachable", message: (err as Error).message };
    } finally {
      if (this.inFlight.get(url) === controller) this.inFlight.delete(url);
    }
  }

  async get(url: string): Promise<PostResult> {
    try {
      const response = await this.fetchImpl(url, { method: "GET" });
      const body = await response.json().catch(() => null);
      return { kind: "ok", status: response.status, body };
    } catch (err) {
      return { kind: "unreachable", message: (err as Error).message };
    }
  }
}

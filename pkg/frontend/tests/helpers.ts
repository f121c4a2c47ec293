/** Test doubles: a recording fetch with a route table, and a fake SSE source. */

import { ApiClient, FetchLike } from "../src/api.js";
import type { EventSourceLike } from "../src/stream.js";
import type { LifecycleResponse, SensorEvent, Severity } from "../src/types.js";

export interface RecordedRequest {
  url: string;
  method: string;
  body: Record<string, unknown> | null;
}

export class FakeApi {
  requests: RecordedRequest[] = [];
  private routes = new Map<string, (req: RecordedRequest) => { status: number; body: unknown }>();
  offline = false;

  route(method: string, path: string, handler: (req: RecordedRequest) => { status: number; body: unknown }): void {
    this.routes.set(`${method} ${path}`, handler);
  }

  routeJson(method: string, path: string, body: unknown, status = 200): void {
    this.route(method, path, () => ({ status, body }));
  }

  fetch: FetchLike = async (url, init) => {
    if (this.offline) throw new TypeError("network down");
    const method = init?.method ?? "GET";
    const path = url.replace(/^https?:\/\/[^/]+/, "").split("?")[0] ?? url;
    const request: RecordedRequest = {
      url,
      method,
      body: init?.body ? (JSON.parse(String(init.body)) as Record<string, unknown>) : null,
    };
    this.requests.push(request);
    const handler = this.routes.get(`${method} ${path}`);
    if (!handler) {
      return new Response(JSON.stringify({ detail: `no route ${method} ${path}` }), {
        status: 404,
        headers: { "content-type": "application/json" },
      });
    }
    const { status, body } = handler(request);
    return new Response(JSON.stringify(body), {
      status,
      headers: { "content-type": "application/json" },
    });
  };

  mutations(): RecordedRequest[] {
    return this.requests.filter((r) => r.method !== "GET");
  }
}

export function clientFor(fake: FakeApi, identity: string | null): ApiClient {
  return new ApiClient("http://joc.test", () => identity, fake.fetch);
}

export class FakeEventSource implements EventSourceLike {
  static instances: FakeEventSource[] = [];
  listeners = new Map<string, Array<(event: MessageEvent) => void>>();
  onerror: ((this: unknown, ev: unknown) => unknown) | null = null;
  onopen: ((this: unknown, ev: unknown) => unknown) | null = null;
  closed = false;

  constructor(public url: string) {
    FakeEventSource.instances.push(this);
  }

  addEventListener(type: string, listener: (event: MessageEvent) => void): void {
    const existing = this.listeners.get(type) ?? [];
    existing.push(listener);
    this.listeners.set(type, existing);
  }

  close(): void {
    this.closed = true;
  }

  open(): void {
    this.onopen?.call(null, {});
  }

  emit(id: number, event: SensorEvent): void {
    const message = new MessageEvent("sensor-event", {
      data: JSON.stringify(event),
      lastEventId: String(id),
    });
    for (const listener of this.listeners.get("sensor-event") ?? []) {
      listener(message);
    }
  }

  fail(): void {
    this.onerror?.call(null, {});
  }
}

let counter = 0;

export function makeEvent(overrides: Partial<SensorEvent> = {}): SensorEvent {
  counter += 1;
  const severity: Severity = overrides.severity ?? "warning";
  return {
    event_id: overrides.event_id ?? `EV${String(counter).padStart(6, "0")}`,
    aor_id: overrides.aor_id ?? "office",
    sensor_id: overrides.sensor_id ?? "sensor-office",
    kind: overrides.kind ?? "volume-anomaly",
    ts: overrides.ts ?? 1767571200000 + counter * 1000,
    severity,
    detail: overrides.detail ?? {},
    evidence_ref: overrides.evidence_ref ?? [0, 0],
  };
}

export const LIFECYCLE: LifecycleResponse = {
  states: ["draft", "submitted", "acknowledged", "in-analysis", "escalated", "resolved", "closed"],
  transitions: [
    { from: "draft", action: "submit", to: "submitted" },
    { from: "submitted", action: "acknowledge", to: "acknowledged" },
    { from: "acknowledged", action: "start-analysis", to: "in-analysis" },
    { from: "in-analysis", action: "escalate", to: "escalated" },
    { from: "in-analysis", action: "resolve", to: "resolved" },
    { from: "escalated", action: "resume-analysis", to: "in-analysis" },
    { from: "escalated", action: "resolve", to: "resolved" },
    { from: "resolved", action: "close", to: "closed" },
    { from: "closed", action: "reopen", to: "in-analysis" },
  ],
};

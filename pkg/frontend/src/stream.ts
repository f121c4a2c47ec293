/** Live alert stream over server-sent events.
 *
 * The server stamps each alert with a global sequence number in the SSE id
 * field; tracking it across reconnects lets the client show exactly which
 * alerts it missed while disconnected instead of a vague "reconnected" note.
 */

import type { SensorEvent } from "./types.js";

export interface EventSourceLike {
  addEventListener(type: string, listener: (event: MessageEvent) => void): void;
  close(): void;
  onerror: ((this: unknown, ev: unknown) => unknown) | null;
  onopen: ((this: unknown, ev: unknown) => unknown) | null;
}

export type EventSourceFactory = (url: string) => EventSourceLike;

export interface StreamHandlers {
  onEvent(event: SensorEvent, sequence: number): void;
  onGap(missed: [number, number]): void;
  onStatus(connected: boolean): void;
}

export class AlertStream {
  lastSequence = 0;
  private source: EventSourceLike | null = null;
  private stopped = false;

  constructor(
    private url: string,
    private handlers: StreamHandlers,
    private factory: EventSourceFactory = (u) =>
      new EventSource(u) as unknown as EventSourceLike,
    private reconnectDelayMs = 1000,
  ) {}

  start(): void {
    this.stopped = false;
    this.connect();
  }

  stop(): void {
    this.stopped = true;
    this.source?.close();
    this.source = null;
  }

  private connect(): void {
    const source = this.factory(this.url);
    this.source = source;
    source.onopen = () => this.handlers.onStatus(true);
    source.addEventListener("sensor-event", (message) => {
      this.receive(message.lastEventId, String(message.data));
    });
    source.onerror = () => {
      this.handlers.onStatus(false);
      source.close();
      if (!this.stopped) {
        setTimeout(() => this.connect(), this.reconnectDelayMs);
      }
    };
  }

  /** Exposed for tests: feed one (id, data) pair as the browser would. */
  receive(lastEventId: string, data: string): void {
    const sequence = Number.parseInt(lastEventId, 10);
    if (!Number.isFinite(sequence)) return;
    if (this.lastSequence > 0 && sequence > this.lastSequence + 1) {
      this.handlers.onGap([this.lastSequence + 1, sequence - 1]);
    }
    if (sequence > this.lastSequence) {
      this.lastSequence = sequence;
    }
    this.handlers.onEvent(JSON.parse(data) as SensorEvent, sequence);
  }
}

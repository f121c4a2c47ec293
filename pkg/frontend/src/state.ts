/** Client view state.
 *
 * Holds only what the UI needs between renders: the analyst identity, the
 * live feed buffer, unacknowledged critical alerts, and stream health.
 * Critical alerts live here, not in any view, so the banner survives
 * navigation until the analyst explicitly acknowledges each alert.
 */

import type { SensorEvent } from "./types.js";

export interface CriticalAlert {
  event: SensorEvent;
  sequence: number;
  acknowledged: boolean;
}

const FEED_LIMIT = 500;

export class ViewState {
  analystId: string | null = null;
  selectedAor: string | null = null;
  feed: SensorEvent[] = [];
  criticalAlerts: CriticalAlert[] = [];
  gaps: Array<[number, number]> = [];
  connected = false;

  private listeners: Array<() => void> = [];

  subscribe(listener: () => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  setIdentity(analystId: string): void {
    this.analystId = analystId.trim() || null;
    this.notify();
  }

  setConnected(connected: boolean): void {
    this.connected = connected;
    this.notify();
  }

  pushEvent(event: SensorEvent, sequence: number): void {
    this.feed.push(event);
    if (this.feed.length > FEED_LIMIT) {
      this.feed.splice(0, this.feed.length - FEED_LIMIT);
    }
    if (event.severity === "critical") {
      this.criticalAlerts.push({ event, sequence, acknowledged: false });
    }
    this.notify();
  }

  recordGap(missed: [number, number]): void {
    this.gaps.push(missed);
    this.notify();
  }

  acknowledge(eventId: string): void {
    for (const alert of this.criticalAlerts) {
      if (alert.event.event_id === eventId) alert.acknowledged = true;
    }
    this.notify();
  }

  pendingCritical(): CriticalAlert[] {
    return this.criticalAlerts.filter((a) => !a.acknowledged);
  }

  feedFor(aorId: string | null): SensorEvent[] {
    if (!aorId) return [...this.feed];
    return this.feed.filter((e) => e.aor_id === aorId);
  }
}

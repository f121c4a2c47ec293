/** Live event feed with severity highlighting and the critical banner.
 *
 * The banner renders from ViewState.pendingCritical(), so it reappears on
 * every view until each critical alert is explicitly acknowledged. */

import { ViewState } from "../state.js";

export function renderCriticalBanner(container: HTMLElement, state: ViewState): void {
  const existing = container.querySelector('[data-testid="critical-banner"]');
  existing?.remove();
  const pending = state.pendingCritical();
  if (pending.length === 0) return;

  const banner = document.createElement("div");
  banner.dataset.testid = "critical-banner";
  banner.className = "critical-banner";

  for (const alert of pending) {
    const row = document.createElement("div");
    row.className = "critical-row";
    row.dataset.eventId = alert.event.event_id;

    const label = document.createElement("span");
    label.textContent =
      `CRITICAL ${alert.event.kind} in ${alert.event.aor_id} ` +
      `at ${new Date(alert.event.ts).toISOString()}`;
    row.appendChild(label);

    const ack = document.createElement("button");
    ack.dataset.testid = "ack-button";
    ack.textContent = "Acknowledge";
    ack.addEventListener("click", () => state.acknowledge(alert.event.event_id));
    row.appendChild(ack);

    banner.appendChild(row);
  }
  container.prepend(banner);
}

export function renderFeed(container: HTMLElement, state: ViewState): void {
  container.replaceChildren();

  const status = document.createElement("div");
  status.dataset.testid = "stream-status";
  status.className = state.connected ? "stream-ok" : "stream-down";
  status.textContent = state.connected ? "stream connected" : "stream disconnected, retrying";
  container.appendChild(status);

  for (const gap of state.gaps) {
    const note = document.createElement("div");
    note.dataset.testid = "gap-indicator";
    note.className = "gap-indicator";
    note.textContent =
      gap[0] === gap[1]
        ? `missed alert ${gap[0]} while disconnected`
        : `missed alerts ${gap[0]}..${gap[1]} while disconnected`;
    container.appendChild(note);
  }

  const list = document.createElement("ul");
  list.className = "feed-list";
  const events = state.feedFor(state.selectedAor);
  for (const event of events.slice().reverse()) {
    const item = document.createElement("li");
    item.dataset.testid = "feed-event";
    item.className = `feed-event severity-${event.severity}`;
    item.textContent =
      `${new Date(event.ts).toISOString()}  [${event.severity.toUpperCase()}] ` +
      `${event.aor_id} ${event.kind}`;
    list.appendChild(item);
  }
  if (events.length === 0) {
    const idle = document.createElement("li");
    idle.dataset.testid = "feed-idle";
    idle.textContent = "feed idle";
    list.appendChild(idle);
  }
  container.appendChild(list);
}

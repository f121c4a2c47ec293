/** AoR overview: one panel per registered AoR with its monitoring mode,
 * last event time, and open ticket count. API down -> offline banner,
 * last known panels stay, mutations are disabled elsewhere. */

import { ApiClient, ApiUnavailableError } from "../api.js";
import type { AoR, SensorEvent, Ticket } from "../types.js";

export interface OverviewData {
  aors: AoR[];
  lastEvent: Record<string, number>;
  openTickets: Record<string, number>;
}

const CLOSED_STATES = new Set(["closed", "resolved"]);

export async function fetchOverview(api: ApiClient): Promise<OverviewData> {
  const aors = await api.listAors();
  const events = await api.listEvents({ limit: 1000 });
  const tickets = await api.listTickets();
  const lastEvent: Record<string, number> = {};
  for (const event of events as SensorEvent[]) {
    const prev = lastEvent[event.aor_id] ?? 0;
    if (event.ts > prev) lastEvent[event.aor_id] = event.ts;
  }
  const openTickets: Record<string, number> = {};
  for (const ticket of tickets as Ticket[]) {
    if (!CLOSED_STATES.has(ticket.state)) {
      openTickets[ticket.aor_id] = (openTickets[ticket.aor_id] ?? 0) + 1;
    }
  }
  return { aors, lastEvent, openTickets };
}

export function renderOverview(container: HTMLElement, data: OverviewData): void {
  container.replaceChildren();
  if (data.aors.length === 0) {
    const empty = document.createElement("p");
    empty.dataset.testid = "overview-empty";
    empty.className = "empty-state";
    empty.textContent =
      "No AoRs registered yet. Register one from the command line: omr aor register --id <aor>";
    container.appendChild(empty);
    return;
  }
  const grid = document.createElement("div");
  grid.className = "aor-grid";
  for (const aor of data.aors) {
    const panel = document.createElement("section");
    panel.className = "aor-panel";
    panel.dataset.testid = "aor-panel";
    panel.dataset.aor = aor.aor_id;

    const heading = document.createElement("h3");
    heading.textContent = aor.label || aor.aor_id;
    panel.appendChild(heading);

    const badge = document.createElement("span");
    badge.dataset.testid = "mode-badge";
    if (aor.mode.kind === "real-time") {
      badge.className = "mode-badge mode-real-time";
      badge.textContent = "REAL-TIME";
    } else {
      badge.className = "mode-badge mode-batch";
      badge.textContent = `BATCH ${aor.mode.interval_hours ?? 24}h`;
    }
    panel.appendChild(badge);

    const last = document.createElement("p");
    const ts = data.lastEvent[aor.aor_id];
    last.className = "aor-meta";
    last.textContent = ts ? `last event ${new Date(ts).toISOString()}` : "no events observed";
    panel.appendChild(last);

    const tickets = document.createElement("p");
    tickets.className = "aor-meta";
    tickets.dataset.testid = "open-tickets";
    tickets.textContent = `${data.openTickets[aor.aor_id] ?? 0} open tickets`;
    panel.appendChild(tickets);

    grid.appendChild(panel);
  }
  container.appendChild(grid);
}

export function renderOfflineBanner(container: HTMLElement, message: string): void {
  const banner = document.createElement("div");
  banner.dataset.testid = "offline-banner";
  banner.className = "offline-banner";
  banner.textContent = `OFFLINE: ${message} — showing last known state, actions disabled`;
  container.prepend(banner);
}

export async function loadOverview(api: ApiClient, container: HTMLElement): Promise<void> {
  try {
    renderOverview(container, await fetchOverview(api));
  } catch (err) {
    if (err instanceof ApiUnavailableError) {
      renderOfflineBanner(container, err.message);
      return;
    }
    throw err;
  }
}

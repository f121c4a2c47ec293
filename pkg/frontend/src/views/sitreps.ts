/** SITREP browser: pick an AoR and a UTC day, render the daily report. */

import { ApiClient, ApiRejectionError } from "../api.js";
import type { Sitrep } from "../types.js";

export function renderSitrep(container: HTMLElement, report: Sitrep): void {
  const existing = container.querySelector('[data-testid="sitrep-body"]');
  existing?.remove();

  const body = document.createElement("div");
  body.dataset.testid = "sitrep-body";

  const heading = document.createElement("h3");
  heading.textContent = `SITREP ${report.aor_id} ${report.report_date}`;
  body.appendChild(heading);

  const total = document.createElement("p");
  total.dataset.testid = "sitrep-total";
  total.textContent = `EVENTS: ${report.total_events}`;
  body.appendChild(total);

  const kinds = document.createElement("ul");
  for (const [kind, count] of Object.entries(report.counts_by_kind).sort()) {
    const item = document.createElement("li");
    item.textContent = `${kind}: ${count}`;
    kinds.appendChild(item);
  }
  body.appendChild(kinds);

  const tickets = document.createElement("p");
  tickets.textContent =
    `tickets opened: ${report.ticket_refs_opened.join(", ") || "(none)"}; ` +
    `advanced: ${report.ticket_refs_advanced.join(", ") || "(none)"}`;
  body.appendChild(tickets);

  const narrative = document.createElement("p");
  narrative.className = "sitrep-narrative";
  narrative.textContent = report.narrative;
  body.appendChild(narrative);

  container.appendChild(body);
}

export function renderSitrepBrowser(container: HTMLElement, api: ApiClient, aorIds: string[]): void {
  container.replaceChildren();

  const form = document.createElement("form");
  const select = document.createElement("select");
  select.dataset.testid = "sitrep-aor";
  for (const aorId of aorIds) {
    const option = document.createElement("option");
    option.value = aorId;
    option.textContent = aorId;
    select.appendChild(option);
  }
  form.appendChild(select);

  const date = document.createElement("input");
  date.dataset.testid = "sitrep-date";
  date.placeholder = "YYYY-MM-DD";
  form.appendChild(date);

  const fetchButton = document.createElement("button");
  fetchButton.type = "submit";
  fetchButton.textContent = "Fetch";
  form.appendChild(fetchButton);

  const feedback = document.createElement("p");
  feedback.dataset.testid = "sitrep-feedback";

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    feedback.textContent = "";
    void api
      .getSitrep(select.value, date.value)
      .then((report) => renderSitrep(container, report))
      .catch((err) => {
        if (err instanceof ApiRejectionError) {
          feedback.textContent = err.detail;
        } else {
          feedback.textContent = String(err);
        }
      });
  });

  container.appendChild(form);
  container.appendChild(feedback);
}

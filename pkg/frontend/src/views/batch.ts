/** Batch review workflow: event walkthrough, per-event disposition notes,
 * then paired sign-off. The UI blocks self-pairing with an explanation and
 * surfaces any API rejection verbatim; the server remains the authority. */

import { ApiClient, ApiRejectionError } from "../api.js";
import { ViewState } from "../state.js";
import type { ReviewBatch, SensorEvent } from "../types.js";

export interface BatchReviewDeps {
  api: ApiClient;
  state: ViewState;
  /** Called after any server action so the caller can re-render from a fresh fetch. */
  onChanged: (batch: ReviewBatch) => void;
}

export function signaturesInclude(batch: ReviewBatch, analystId: string | null): boolean {
  if (!analystId) return false;
  return batch.signatures.some(([who]) => who === analystId);
}

export function renderBatchReview(
  container: HTMLElement,
  batch: ReviewBatch,
  events: SensorEvent[],
  deps: BatchReviewDeps,
): void {
  container.replaceChildren();
  const { api, state, onChanged } = deps;

  const heading = document.createElement("h3");
  heading.textContent =
    `${batch.batch_id} (${batch.state}) — ` +
    `${new Date(batch.window_start).toISOString()} .. ${new Date(batch.window_end).toISOString()}`;
  container.appendChild(heading);

  const walkthrough = document.createElement("ol");
  walkthrough.dataset.testid = "batch-walkthrough";
  for (const event of events) {
    const item = document.createElement("li");
    item.className = `severity-${event.severity}`;
    const label = document.createElement("span");
    label.textContent = `${event.event_id} ${event.kind} [${event.severity}]`;
    item.appendChild(label);
    const note = document.createElement("input");
    note.dataset.testid = `disposition-${event.event_id}`;
    note.placeholder = "disposition note";
    item.appendChild(note);
    walkthrough.appendChild(item);
  }
  if (events.length === 0) {
    const empty = document.createElement("p");
    empty.dataset.testid = "batch-empty";
    empty.textContent = "No events in this window. Sign-off is still required.";
    container.appendChild(empty);
  } else {
    container.appendChild(walkthrough);
  }

  const signatures = document.createElement("p");
  signatures.dataset.testid = "signatures";
  signatures.textContent =
    batch.signatures.length === 0
      ? "no signatures yet"
      : "signed: " + batch.signatures.map(([who]) => who).join(", ");
  container.appendChild(signatures);

  const feedback = document.createElement("p");
  feedback.dataset.testid = "batch-feedback";
  container.appendChild(feedback);

  const button = document.createElement("button");
  button.dataset.testid = "sign-off-button";
  button.textContent = `Sign off as ${state.analystId ?? "(no identity)"}`;

  const selfPaired = signaturesInclude(batch, state.analystId);
  if (batch.state === "signed-off") {
    button.disabled = true;
    feedback.textContent = "batch fully signed off";
  } else if (selfPaired) {
    button.disabled = true;
    feedback.textContent =
      "you have already signed this batch; review works in pairs, " +
      "a second analyst must countersign";
  } else if (!state.analystId) {
    button.disabled = true;
    feedback.textContent = "set your analyst identity to sign off";
  }

  button.addEventListener("click", async () => {
    try {
      await api.signOffBatch(batch.batch_id);
      // server authority: always re-render from a fresh fetch, never from
      // the local guess of what the state became
      onChanged(await api.getBatch(batch.batch_id));
    } catch (err) {
      if (err instanceof ApiRejectionError) {
        feedback.textContent = err.detail;
        return;
      }
      throw err;
    }
  });
  container.appendChild(button);
}

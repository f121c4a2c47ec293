/** Kanban ticket board: one column per lifecycle state, drag to transition.
 *
 * A drop is attempted only when the lifecycle table (fetched from the server)
 * maps (current state -> target column) to an action; otherwise the card
 * snaps back and the tooltip lists what would be legal. After a successful
 * transition the board re-renders from a fresh API fetch. */

import { ApiClient, ApiRejectionError } from "../api.js";
import { LifecycleTable } from "../lifecycle.js";
import type { Ticket } from "../types.js";

export interface BoardDeps {
  api: ApiClient;
  lifecycle: LifecycleTable;
  onChanged: (tickets: Ticket[]) => void;
}

export interface DropOutcome {
  accepted: boolean;
  action: string | null;
  reason: string;
}

/** Pure drop rule, exercised directly by tests and by the DOM handlers. */
export function evaluateDrop(
  lifecycle: LifecycleTable,
  ticket: Ticket,
  targetState: string,
): DropOutcome {
  if (ticket.state === targetState) {
    return { accepted: false, action: null, reason: "already in this state" };
  }
  const action = lifecycle.actionFor(ticket.state, targetState);
  if (action === null) {
    const legal = lifecycle
      .legalTargets(ticket.state)
      .map((t) => `${t.to} (${t.action})`)
      .join(", ");
    return {
      accepted: false,
      action: null,
      reason: `illegal move from ${ticket.state}; legal: ${legal || "(none)"}`,
    };
  }
  return { accepted: true, action, reason: "" };
}

export async function performDrop(
  deps: BoardDeps,
  ticket: Ticket,
  targetState: string,
  note = "",
): Promise<DropOutcome> {
  const outcome = evaluateDrop(deps.lifecycle, ticket, targetState);
  if (!outcome.accepted || outcome.action === null) {
    return outcome;
  }
  try {
    await deps.api.transitionTicket(ticket.ticket_id, outcome.action, note);
  } catch (err) {
    if (err instanceof ApiRejectionError) {
      return { accepted: false, action: outcome.action, reason: err.detail };
    }
    throw err;
  }
  deps.onChanged(await deps.api.listTickets());
  return outcome;
}

export function renderBoard(
  container: HTMLElement,
  tickets: Ticket[],
  deps: BoardDeps,
): void {
  container.replaceChildren();
  const feedback = document.createElement("p");
  feedback.dataset.testid = "board-feedback";
  container.appendChild(feedback);

  const board = document.createElement("div");
  board.className = "board";
  const byId = new Map(tickets.map((t) => [t.ticket_id, t]));

  for (const state of deps.lifecycle.states) {
    if (state === "draft") continue; // drafts are not persisted tickets
    const column = document.createElement("div");
    column.className = "board-column";
    column.dataset.testid = "board-column";
    column.dataset.state = state;

    const heading = document.createElement("h4");
    heading.textContent = state;
    column.appendChild(heading);

    column.addEventListener("dragover", (event) => event.preventDefault());
    column.addEventListener("drop", (event) => {
      event.preventDefault();
      const ticketId = (event as DragEvent).dataTransfer?.getData("text/ticket-id");
      const ticket = ticketId ? byId.get(ticketId) : undefined;
      if (!ticket) return;
      void performDrop(deps, ticket, state).then((outcome) => {
        if (!outcome.accepted) {
          feedback.textContent = outcome.reason; // card snaps back: board unchanged
        }
      });
    });

    for (const ticket of tickets.filter((t) => t.state === state)) {
      const card = document.createElement("div");
      card.className = "ticket-card";
      card.dataset.testid = "ticket-card";
      card.dataset.ticketId = ticket.ticket_id;
      card.draggable = true;
      card.textContent = `${ticket.ticket_id} ${ticket.event_type} (${ticket.aor_id})`;
      card.title = deps.lifecycle
        .legalTargets(ticket.state)
        .map((t) => `${t.action} -> ${t.to}`)
        .join("\n");
      card.addEventListener("dragstart", (event) => {
        (event as DragEvent).dataTransfer?.setData("text/ticket-id", ticket.ticket_id);
      });
      column.appendChild(card);
    }
    board.appendChild(column);
  }
  container.appendChild(board);
}

import { describe, expect, it } from "vitest";

import { LifecycleTable } from "../src/lifecycle.js";
import { evaluateDrop, performDrop, renderBoard } from "../src/views/board.js";
import type { Ticket } from "../src/types.js";
import { FakeApi, LIFECYCLE, clientFor } from "./helpers.js";

function ticket(state: string, id = "T-000001"): Ticket {
  return {
    ticket_id: id,
    start_time_of_event: 1767571200000,
    event_type: "novel-control",
    supporting_evidence: [],
    aor_id: "generation-1",
    detecting_sensor: "sensor-generation-1",
    state,
    source_event_id: null,
    created_ms: 1767571200000,
    history: [["submitted", "alice", 1767571200000, "created"]],
  };
}

const table = new LifecycleTable(LIFECYCLE);

describe("drop evaluation", () => {
  it("accepts DFA-legal moves with the mapped action", () => {
    const outcome = evaluateDrop(table, ticket("submitted"), "acknowledged");
    expect(outcome).toEqual({ accepted: true, action: "acknowledge", reason: "" });
  });

  it("rejects illegal moves and lists the legal targets", () => {
    const outcome = evaluateDrop(table, ticket("draft"), "escalated");
    expect(outcome.accepted).toBe(false);
    expect(outcome.reason).toContain("illegal move from draft");
    expect(outcome.reason).toContain("submitted (submit)");
  });

  it("treats a same-column drop as a no-op", () => {
    expect(evaluateDrop(table, ticket("submitted"), "submitted").accepted).toBe(false);
  });
});

describe("performDrop against the API", () => {
  it("posts the transition then refreshes from the server", async () => {
    const fake = new FakeApi();
    fake.routeJson("POST", "/tickets/T-000001/transition", ticket("acknowledged"));
    fake.routeJson("GET", "/tickets", { tickets: [ticket("acknowledged")] });
    let refreshed: Ticket[] | null = null;
    const outcome = await performDrop(
      { api: clientFor(fake, "alice"), lifecycle: table, onChanged: (t) => (refreshed = t) },
      ticket("submitted"),
      "acknowledged",
    );
    expect(outcome.accepted).toBe(true);
    expect(fake.mutations()[0]?.body?.action).toBe("acknowledge");
    expect(refreshed![0]!.state).toBe("acknowledged"); // server authority
  });

  it("illegal drop never reaches the wire", async () => {
    const fake = new FakeApi();
    const outcome = await performDrop(
      { api: clientFor(fake, "alice"), lifecycle: table, onChanged: () => {} },
      ticket("draft"),
      "escalated",
    );
    expect(outcome.accepted).toBe(false);
    expect(fake.requests.length).toBe(0);
  });

  it("server rejection is returned as the snap-back reason", async () => {
    const fake = new FakeApi();
    fake.routeJson(
      "POST",
      "/tickets/T-000001/transition",
      { detail: "action 'acknowledge' is illegal from state 'closed'" },
      409,
    );
    const outcome = await performDrop(
      { api: clientFor(fake, "alice"), lifecycle: table, onChanged: () => {} },
      ticket("submitted"),
      "acknowledged",
    );
    expect(outcome.accepted).toBe(false);
    expect(outcome.reason).toContain("illegal from state 'closed'");
  });
});

describe("board rendering", () => {
  it("renders one column per persisted lifecycle state and places cards", () => {
    const container = document.createElement("div");
    const tickets = [ticket("submitted"), ticket("in-analysis", "T-000002")];
    renderBoard(container, tickets, {
      api: clientFor(new FakeApi(), "alice"),
      lifecycle: table,
      onChanged: () => {},
    });
    const columns = container.querySelectorAll('[data-testid="board-column"]');
    expect(columns.length).toBe(LIFECYCLE.states.length - 1); // draft excluded
    const submittedColumn = container.querySelector('[data-state="submitted"]');
    expect(submittedColumn?.querySelectorAll('[data-testid="ticket-card"]').length).toBe(1);
    const card = container.querySelector<HTMLElement>('[data-ticket-id="T-000001"]');
    expect(card?.title).toContain("acknowledge -> acknowledged");
  });
});

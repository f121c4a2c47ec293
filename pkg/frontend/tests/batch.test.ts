import { describe, expect, it } from "vitest";

import { ViewState } from "../src/state.js";
import { renderBatchReview, signaturesInclude } from "../src/views/batch.js";
import type { ReviewBatch } from "../src/types.js";
import { FakeApi, clientFor, makeEvent } from "./helpers.js";

function batch(overrides: Partial<ReviewBatch> = {}): ReviewBatch {
  return {
    batch_id: "batch-office-000001",
    aor_id: "office",
    window_start: 1767571200000,
    window_end: 1767657600000,
    event_ids: [],
    state: "under-review",
    signatures: [],
    ...overrides,
  };
}

function renderWith(
  b: ReviewBatch,
  analyst: string | null,
  fake = new FakeApi(),
): { container: HTMLDivElement; state: ViewState } {
  const container = document.createElement("div");
  const state = new ViewState();
  if (analyst) state.setIdentity(analyst);
  renderBatchReview(container, b, [], {
    api: clientFor(fake, analyst),
    state,
    onChanged: () => {},
  });
  return { container, state };
}

describe("batch review", () => {
  it("blocks self-pairing with an explanation", () => {
    const { container } = renderWith(batch({ signatures: [["alice", 1]] }), "alice");
    const button = container.querySelector<HTMLButtonElement>('[data-testid="sign-off-button"]');
    expect(button?.disabled).toBe(true);
    const feedback = container.querySelector('[data-testid="batch-feedback"]');
    expect(feedback?.textContent).toContain("pairs");
    expect(signaturesInclude(batch({ signatures: [["alice", 1]] }), "alice")).toBe(true);
  });

  it("a second distinct analyst can sign", () => {
    const { container } = renderWith(batch({ signatures: [["alice", 1]] }), "bob");
    const button = container.querySelector<HTMLButtonElement>('[data-testid="sign-off-button"]');
    expect(button?.disabled).toBe(false);
  });

  it("empty batch skips the walkthrough but still offers sign-off", () => {
    const { container } = renderWith(batch(), "bob");
    expect(container.querySelector('[data-testid="batch-empty"]')).not.toBeNull();
    expect(container.querySelector('[data-testid="sign-off-button"]')).not.toBeNull();
  });

  it("sign-off posts to the API and re-renders from a fresh fetch", async () => {
    const fake = new FakeApi();
    const signed = batch({ signatures: [["alice", 1], ["bob", 2]], state: "signed-off" });
    fake.routeJson("POST", "/batches/batch-office-000001/sign-off", signed);
    fake.routeJson("GET", "/batches/batch-office-000001", signed);

    const container = document.createElement("div");
    const state = new ViewState();
    state.setIdentity("bob");
    let refreshed: ReviewBatch | null = null;
    renderBatchReview(container, batch({ signatures: [["alice", 1]] }), [], {
      api: clientFor(fake, "bob"),
      state,
      onChanged: (fresh) => (refreshed = fresh),
    });
    container.querySelector<HTMLButtonElement>('[data-testid="sign-off-button"]')!.click();
    await new Promise((resolve) => setTimeout(resolve, 0));

    expect(fake.mutations().length).toBe(1);
    expect(refreshed!.state).toBe("signed-off");
  });

  it("API rejection text is surfaced verbatim", async () => {
    const fake = new FakeApi();
    fake.routeJson(
      "POST",
      "/batches/batch-office-000001/sign-off",
      { detail: "batch batch-office-000001 is still open; close the window before sign-off" },
      409,
    );
    const container = document.createElement("div");
    const state = new ViewState();
    state.setIdentity("bob");
    renderBatchReview(container, batch({ state: "under-review" }), [], {
      api: clientFor(fake, "bob"),
      state,
      onChanged: () => {},
    });
    container.querySelector<HTMLButtonElement>('[data-testid="sign-off-button"]')!.click();
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(
      container.querySelector('[data-testid="batch-feedback"]')?.textContent,
    ).toContain("still open");
  });

  it("walkthrough lists a disposition note input per event", () => {
    const container = document.createElement("div");
    const state = new ViewState();
    state.setIdentity("bob");
    const events = [makeEvent(), makeEvent({ severity: "critical", kind: "novel-control" })];
    renderBatchReview(
      container,
      batch({ event_ids: events.map((e) => e.event_id) }),
      events,
      { api: clientFor(new FakeApi(), "bob"), state, onChanged: () => {} },
    );
    const items = container.querySelectorAll('[data-testid="batch-walkthrough"] li');
    expect(items.length).toBe(2);
    for (const event of events) {
      expect(
        container.querySelector(`[data-testid="disposition-${event.event_id}"]`),
      ).not.toBeNull();
    }
  });
});

/** Dashboard shell: identity gate, tab navigation, stream wiring.
 *
 * The critical banner is rendered into a fixed region outside the tab
 * content, so navigating between views never hides an unacknowledged alert.
 */

import { ApiClient } from "./api.js";
import { LifecycleTable } from "./lifecycle.js";
import { ViewState } from "./state.js";
import { AlertStream } from "./stream.js";
import { renderBatchReview } from "./views/batch.js";
import { renderBoard } from "./views/board.js";
import { renderCriticalBanner, renderFeed } from "./views/feed.js";
import { loadOverview } from "./views/overview.js";
import { renderSitrepBrowser } from "./views/sitreps.js";

const TABS = ["overview", "feed", "batches", "board", "sitreps"] as const;
type Tab = (typeof TABS)[number];

export class Dashboard {
  readonly state = new ViewState();
  readonly api: ApiClient;
  private stream: AlertStream | null = null;
  private activeTab: Tab = "overview";
  private lifecycle: LifecycleTable | null = null;

  constructor(private root: HTMLElement, private baseUrl: string = "") {
    this.api = new ApiClient(baseUrl, () => this.state.analystId);
    this.state.subscribe(() => this.renderChrome());
  }

  start(): void {
    this.renderShell();
    this.stream = new AlertStream(`${this.baseUrl}/events/stream`, {
      onEvent: (event, sequence) => this.state.pushEvent(event, sequence),
      onGap: (missed) => this.state.recordGap(missed),
      onStatus: (connected) => this.state.setConnected(connected),
    });
    this.stream.start();
    void this.showTab("overview");
  }

  private renderShell(): void {
    this.root.replaceChildren();

    const bannerHost = document.createElement("div");
    bannerHost.id = "banner-host";
    this.root.appendChild(bannerHost);

    const identity = document.createElement("form");
    identity.id = "identity-form";
    const input = document.createElement("input");
    input.placeholder = "analyst name";
    input.dataset.testid = "identity-input";
    const set = document.createElement("button");
    set.type = "submit";
    set.textContent = "Set identity";
    identity.append(input, set);
    identity.addEventListener("submit", (event) => {
      event.preventDefault();
      this.state.setIdentity(input.value);
    });
    this.root.appendChild(identity);

    const nav = document.createElement("nav");
    for (const tab of TABS) {
      const button = document.createElement("button");
      button.textContent = tab;
      button.dataset.tab = tab;
      button.addEventListener("click", () => void this.showTab(tab));
      nav.appendChild(button);
    }
    this.root.appendChild(nav);

    const content = document.createElement("main");
    content.id = "tab-content";
    this.root.appendChild(content);
  }

  private renderChrome(): void {
    const bannerHost = this.root.querySelector<HTMLElement>("#banner-host");
    if (bannerHost) renderCriticalBanner(bannerHost, this.state);
    if (this.activeTab === "feed") {
      const content = this.root.querySelector<HTMLElement>("#tab-content");
      if (content) renderFeed(content, this.state);
    }
  }

  async showTab(tab: Tab): Promise<void> {
    this.activeTab = tab;
    const content = this.root.querySelector<HTMLElement>("#tab-content");
    if (!content) return;
    content.replaceChildren();

    if (tab === "overview") {
      await loadOverview(this.api, content);
      return;
    }
    if (tab === "feed") {
      renderFeed(content, this.state);
      return;
    }
    if (tab === "batches") {
      const batches = await this.api.listBatches();
      const reviewable = batches.filter((b) => b.state !== "open");
      const target = reviewable[reviewable.length - 1];
      if (!target) {
        content.textContent = "no batches awaiting review";
        return;
      }
      const events = await this.api.listEvents({ aor: target.aor_id, limit: 500 });
      const relevant = events.filter((e) => target.event_ids.includes(e.event_id));
      renderBatchReview(content, target, relevant, {
        api: this.api,
        state: this.state,
        onChanged: (fresh) =>
          renderBatchReview(content, fresh, relevant, {
            api: this.api,
            state: this.state,
            onChanged: () => void this.showTab("batches"),
          }),
      });
      return;
    }
    if (tab === "board") {
      if (!this.lifecycle) {
        this.lifecycle = new LifecycleTable(await this.api.lifecycle());
      }
      const lifecycle = this.lifecycle;
      const tickets = await this.api.listTickets();
      renderBoard(content, tickets, {
        api: this.api,
        lifecycle,
        onChanged: (fresh) =>
          renderBoard(content, fresh, {
            api: this.api,
            lifecycle,
            onChanged: () => void this.showTab("board"),
          }),
      });
      return;
    }
    const aors = await this.api.listAors();
    renderSitrepBrowser(content, this.api, aors.map((a) => a.aor_id));
  }
}

export function mount(selector = "#app", baseUrl = ""): Dashboard {
  const root = document.querySelector<HTMLElement>(selector);
  if (!root) throw new Error(`no mount point ${selector}`);
  const dashboard = new Dashboard(root, baseUrl);
  dashboard.start();
  return dashboard;
}

/** Management-API client.
 *
 * Every mutating request goes through `mutate`, which refuses to fire without
 * an analyst identity and stamps analyst_id into the body. The UI therefore
 * cannot produce an anonymous mutation even by accident.
 */

import type {
  AoR,
  LifecycleResponse,
  ReviewBatch,
  SensorEvent,
  Sitrep,
  Ticket,
} from "./types.js";

export class ApiUnavailableError extends Error {
  constructor(cause: string) {
    super(`management API unreachable: ${cause}`);
  }
}

export class ApiRejectionError extends Error {
  constructor(public status: number, public detail: string) {
    super(detail);
  }
}

export class IdentityRequiredError extends Error {
  constructor() {
    super("set your analyst identity before performing any mutating action");
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private identity: () => string | null,
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.url(path), init);
    } catch (err) {
      throw new ApiUnavailableError(String(err));
    }
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        /* non-JSON error body; keep statusText */
      }
      throw new ApiRejectionError(response.status, detail);
    }
    return response.json();
  }

  async get(path: string): Promise<unknown> {
    return this.request(path);
  }

  /** All mutations funnel through here: identity required, analyst_id stamped. */
  private async mutate(path: string, body: Record<string, unknown>): Promise<unknown> {
    const analyst = this.identity();
    if (!analyst || !analyst.trim()) {
      throw new IdentityRequiredError();
    }
    return this.request(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ ...body, analyst_id: analyst }),
    });
  }

  async listAors(): Promise<AoR[]> {
    const data = (await this.get("/aors")) as { aors: AoR[] };
    return data.aors;
  }

  async listEvents(params: Record<string, string | number> = {}): Promise<SensorEvent[]> {
    const query = new URLSearchParams(
      Object.fromEntries(Object.entries(params).map(([k, v]) => [k, String(v)])),
    ).toString();
    const data = (await this.get(`/events${query ? "?" + query : ""}`)) as {
      events: SensorEvent[];
    };
    return data.events;
  }

  async listBatches(aor?: string): Promise<ReviewBatch[]> {
    const data = (await this.get(`/batches${aor ? "?aor=" + aor : ""}`)) as {
      batches: ReviewBatch[];
    };
    return data.batches;
  }

  async getBatch(batchId: string): Promise<ReviewBatch> {
    return (await this.get(`/batches/${batchId}`)) as ReviewBatch;
  }

  async signOffBatch(batchId: string): Promise<ReviewBatch> {
    return (await this.mutate(`/batches/${batchId}/sign-off`, {})) as ReviewBatch;
  }

  async lifecycle(): Promise<LifecycleResponse> {
    return (await this.get("/lifecycle")) as LifecycleResponse;
  }

  async listTickets(): Promise<Ticket[]> {
    const data = (await this.get("/tickets")) as { tickets: Ticket[] };
    return data.tickets;
  }

  async createTicket(
    fields: Record<string, unknown>,
    sourceEventId?: string,
    note = "",
  ): Promise<Ticket> {
    const body: Record<string, unknown> = { fields, note };
    if (sourceEventId) body.source_event_id = sourceEventId;
    return (await this.mutate("/tickets", body)) as Ticket;
  }

  async transitionTicket(ticketId: string, action: string, note = ""): Promise<Ticket> {
    return (await this.mutate(`/tickets/${ticketId}/transition`, {
      action,
      note,
    })) as Ticket;
  }

  async getTicket(ticketId: string): Promise<Ticket> {
    return (await this.get(`/tickets/${ticketId}`)) as Ticket;
  }

  async getSitrep(aorId: string, date: string): Promise<Sitrep> {
    return (await this.get(`/sitreps/${aorId}/${date}`)) as Sitrep;
  }

  async recordCompliance(body: Record<string, unknown>): Promise<unknown> {
    return this.mutate("/compliance", body);
  }
}

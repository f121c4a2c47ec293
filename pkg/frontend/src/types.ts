/** DTOs mirroring the management API JSON. Nothing here is fabricated
 * client-side; every shape corresponds to a server response. */

export interface MonitoringMode {
  kind: "real-time" | "batch";
  interval_hours?: number;
  review_hours?: number;
}

export interface AoR {
  aor_id: string;
  site_id: string;
  label: string;
  mode: MonitoringMode;
  region_tag: string;
  assigned_analysts: string[];
}

export type Severity = "info" | "warning" | "critical";

export interface SensorEvent {
  event_id: string;
  aor_id: string;
  sensor_id: string;
  kind: string;
  ts: number;
  severity: Severity;
  detail: Record<string, unknown>;
  evidence_ref: [number, number];
}

export interface ReviewBatch {
  batch_id: string;
  aor_id: string;
  window_start: number;
  window_end: number;
  event_ids: string[];
  state: "open" | "under-review" | "signed-off";
  signatures: Array<[string, number]>;
}

export interface Ticket {
  ticket_id: string;
  start_time_of_event: number;
  event_type: string;
  supporting_evidence: unknown[];
  aor_id: string;
  detecting_sensor: string;
  state: string;
  source_event_id: string | null;
  created_ms: number;
  history: Array<[string, string, number, string]>;
}

export interface Sitrep {
  aor_id: string;
  report_date: string;
  total_events: number;
  counts_by_kind: Record<string, number>;
  counts_by_severity: Record<string, number>;
  ticket_refs_opened: string[];
  ticket_refs_advanced: string[];
  compliance_summaries: Array<Record<string, unknown>>;
  narrative: string;
  submitted_by: string;
  submitted_at: number;
}

export interface LifecycleTransition {
  from: string;
  action: string;
  to: string;
}

export interface LifecycleResponse {
  states: string[];
  transitions: LifecycleTransition[];
}

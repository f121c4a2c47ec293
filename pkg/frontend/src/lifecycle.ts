/** Ticket lifecycle helper built from the server's /lifecycle response.
 * The DFA is never hardcoded client-side; a config change on the server
 * reshapes the board on next load. */

import type { LifecycleResponse, LifecycleTransition } from "./types.js";

export class LifecycleTable {
  readonly states: string[];
  private byPair = new Map<string, LifecycleTransition>();

  constructor(response: LifecycleResponse) {
    this.states = [...response.states];
    for (const transition of response.transitions) {
      this.byPair.set(`${transition.from}->${transition.to}`, transition);
    }
  }

  /** Action that moves a ticket from one state to another, or null. */
  actionFor(from: string, to: string): string | null {
    return this.byPair.get(`${from}->${to}`)?.action ?? null;
  }

  isLegalDrop(from: string, to: string): boolean {
    return this.actionFor(from, to) !== null;
  }

  legalTargets(from: string): Array<{ action: string; to: string }> {
    const targets: Array<{ action: string; to: string }> = [];
    for (const transition of this.byPair.values()) {
      if (transition.from === from) {
        targets.push({ action: transition.action, to: transition.to });
      }
    }
    return targets.sort((a, b) => a.to.localeCompare(b.to));
  }
}

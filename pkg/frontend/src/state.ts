/** View state: a thin store over API responses, nothing computed client-side
 * beyond grouping. The optimistic flag marks rows whose mutation is still in
 * flight so a 409 can roll them back to the server's truth. */

import type { Candidate, CandidateStatus, StatusSummary } from "./api.js";

export interface ViewState {
  summary: StatusSummary | null;
  candidates: Map<string, Candidate>;
  optimistic: Map<string, CandidateStatus>;
  selectedId: string | null;
  lastEventId: number;
}

export type Listener = (state: ViewState) => void;

export class Store {
  private state: ViewState = {
    summary: null,
    candidates: new Map(),
    optimistic: new Map(),
    selectedId: null,
    lastEventId: 0,
  };
  private listeners: Listener[] = [];

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  get snapshot(): ViewState {
    return this.state;
  }

  setSummary(summary: StatusSummary): void {
    this.state.summary = summary;
    this.emit();
  }

  replaceCandidates(items: Candidate[]): void {
    this.state.candidates = new Map(items.map((c) => [c.pending_id, c]));
    this.emit();
  }

  upsert(candidate: Candidate): void {
    this.state.candidates.set(candidate.pending_id, candidate);
    this.state.optimistic.delete(candidate.pending_id);
    this.emit();
  }

  /** Predictively move a row; returns the status to restore on rollback. */
  markOptimistic(pendingId: string, status: CandidateStatus): void {
    this.state.optimistic.set(pendingId, status);
    this.emit();
  }

  rollback(pendingId: string): void {
    this.state.optimistic.delete(pendingId);
    this.emit();
  }

  select(pendingId: string | null): void {
    this.state.selectedId = pendingId;
    this.emit();
  }

  setLastEventId(eventId: number): void {
    this.state.lastEventId = eventId;
  }

  /** Effective status of a row: optimistic prediction first, else server's. */
  statusOf(candidate: Candidate): CandidateStatus {
    return this.state.optimistic.get(candidate.pending_id) ?? candidate.status;
  }

  grouped(): Map<CandidateStatus, Candidate[]> {
    const groups = new Map<CandidateStatus, Candidate[]>();
    for (const candidate of this.state.candidates.values()) {
      const status = this.statusOf(candidate);
      const bucket = groups.get(status) ?? [];
      bucket.push(candidate);
      groups.set(status, bucket);
    }
    return groups;
  }
}

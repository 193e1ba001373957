/** Candidate queue: status tabs, rows with confidence badges, detail panel. */

import type { Candidate, CandidateStatus } from "./api.js";
import { ALL_STATUSES } from "./api.js";
import type { Store } from "./state.js";

export interface QueueCallbacks {
  onApprove: (pendingId: string) => void;
  onReject: (pendingId: string) => void;
  onSelect: (pendingId: string) => void;
}

const STATUS_LABELS: Record<CandidateStatus, string> = {
  awaiting_approval: "Awaiting approval",
  awaiting_classification: "Unclassified",
  approved: "Approved",
  posted: "Posted",
  rejected: "Rejected",
  discarded: "Discarded",
};

export function confidenceBadge(confidence: number | null): HTMLElement {
  const badge = document.createElement("span");
  badge.className = "badge";
  if (confidence === null) {
    badge.textContent = "–";
    badge.classList.add("badge-unknown");
  } else {
    badge.textContent = `${Math.round(confidence * 100)}%`;
    badge.classList.add(confidence >= 0.75 ? "badge-high" : "badge-mid");
  }
  return badge;
}

function row(candidate: Candidate, status: CandidateStatus,
             callbacks: QueueCallbacks, pendingMutation: boolean): HTMLElement {
  const tr = document.createElement("tr");
  tr.dataset.pendingId = candidate.pending_id;
  tr.dataset.status = status;
  if (pendingMutation) tr.classList.add("optimistic");

  const idCell = document.createElement("td");
  idCell.textContent = candidate.pending_id;
  const textCell = document.createElement("td");
  textCell.className = "tweet-text";
  textCell.textContent = candidate.candidate.text;
  const keywordCell = document.createElement("td");
  keywordCell.textContent = candidate.matched_keywords.join(", ");
  const confidenceCell = document.createElement("td");
  confidenceCell.appendChild(confidenceBadge(candidate.confidence));

  const actionCell = document.createElement("td");
  if (status === "awaiting_approval" && !pendingMutation) {
    const approve = document.createElement("button");
    approve.textContent = "Approve";
    approve.className = "btn-approve";
    approve.addEventListener("click", (ev) => {
      ev.stopPropagation();
      callbacks.onApprove(candidate.pending_id);
    });
    const reject = document.createElement("button");
    reject.textContent = "Reject";
    reject.className = "btn-reject";
    reject.addEventListener("click", (ev) => {
      ev.stopPropagation();
      callbacks.onReject(candidate.pending_id);
    });
    actionCell.append(approve, reject);
  }

  tr.append(idCell, textCell, keywordCell, confidenceCell, actionCell);
  tr.addEventListener("click", () => callbacks.onSelect(candidate.pending_id));
  return tr;
}

export function renderQueue(container: HTMLElement, store: Store,
                            callbacks: QueueCallbacks): void {
  container.textContent = "";
  const groups = store.grouped();

  if (store.snapshot.candidates.size === 0) {
    const empty = document.createElement("div");
    empty.className = "empty-state";
    empty.textContent =
      "No candidates yet. Switch the scanner on and keyword matches will appear here.";
    container.appendChild(empty);
    return;
  }

  for (const status of ALL_STATUSES) {
    const members = groups.get(status) ?? [];
    if (members.length === 0) continue;
    const section = document.createElement("section");
    section.className = "status-group";
    section.dataset.status = status;

    const heading = document.createElement("h3");
    heading.textContent = `${STATUS_LABELS[status]} (${members.length})`;
    section.appendChild(heading);

    const table = document.createElement("table");
    table.className = "queue-table";
    const head = document.createElement("tr");
    for (const label of ["id", "text", "keywords", "confidence", ""]) {
      const th = document.createElement("th");
      th.textContent = label;
      head.appendChild(th);
    }
    table.appendChild(head);
    for (const candidate of members) {
      table.appendChild(row(candidate, status, callbacks,
                            store.snapshot.optimistic.has(candidate.pending_id)));
    }
    section.appendChild(table);
    container.appendChild(section);
  }
}

export function renderDetail(container: HTMLElement, candidate: Candidate | null,
                             binPath: Array<{ abbreviation: string; threshold: number;
                                              went_left: boolean }> | null): void {
  container.textContent = "";
  if (!candidate) {
    container.classList.add("hidden");
    return;
  }
  container.classList.remove("hidden");

  const title = document.createElement("h3");
  title.textContent = `Candidate ${candidate.pending_id}`;
  const text = document.createElement("blockquote");
  text.textContent = candidate.candidate.text;
  const meta = document.createElement("p");
  const pct = candidate.confidence === null
    ? "unclassified"
    : `${Math.round(candidate.confidence * 100)}% confidence`;
  meta.textContent =
    `${pct} · keywords: ${candidate.matched_keywords.join(", ") || "none"}`;
  container.append(title, text, meta);

  if (candidate.proposed_message) {
    const proposal = document.createElement("p");
    proposal.className = "proposal";
    proposal.textContent =
      `Proposed reply (bin ${candidate.bin_id}): ${candidate.proposed_message.text}`;
    container.appendChild(proposal);
  }
  if (binPath && binPath.length) {
    const path = document.createElement("p");
    path.className = "bin-path";
    path.textContent = "Decision path: " + binPath
      .map((s) => `${s.abbreviation} ${s.went_left ? "<=" : ">"} ${s.threshold}`)
      .join("  →  ");
    container.appendChild(path);
  }
}

/** Approve/reject flows: confirm, optimistic move, rollback on conflict. */

import { ApiClient, ApiRequestError } from "./api.js";
import type { Store } from "./state.js";
import { toast } from "./toast.js";

export type ConfirmFn = (message: string) => Promise<boolean>;

export const browserConfirm: ConfirmFn = (message) =>
  Promise.resolve(window.confirm(message));

async function refetch(api: ApiClient, store: Store): Promise<void> {
  try {
    const page = await api.candidates(undefined, 500);
    store.replaceCandidates(page.items);
  } catch {
    /* next poll will retry */
  }
}

export interface FlowOptions {
  confirm?: ConfirmFn;
  onRetry?: (pendingId: string) => void;
}

export async function approveFlow(api: ApiClient, store: Store,
                                  pendingId: string,
                                  options: FlowOptions = {}): Promise<boolean> {
  const candidate = store.snapshot.candidates.get(pendingId);
  if (!candidate) return false;
  const confirm = options.confirm ?? browserConfirm;
  const ok = await confirm(
    `Post the proposed reply to ${candidate.candidate.author_handle ?? "the author"}?`,
  );
  if (!ok) return false;

  store.markOptimistic(pendingId, "posted");
  try {
    const updated = await api.approve(pendingId);
    store.upsert(updated);
    toast(`Posted intervention for ${pendingId}`);
    return true;
  } catch (error) {
    store.rollback(pendingId);
    if (error instanceof ApiRequestError && error.status === 409) {
      toast(`Could not approve ${pendingId}: ${error.message}`, "error");
      await refetch(api, store);
      return false;
    }
    // network or server failure: keep the row, offer a retry
    const note = toast(`Approve failed for ${pendingId}. `, "error", 8000);
    const retry = document.createElement("button");
    retry.textContent = "Retry";
    retry.addEventListener("click", () => {
      note.remove();
      (options.onRetry ?? (() => approveFlow(api, store, pendingId, options)))(
        pendingId,
      );
    });
    note.appendChild(retry);
    return false;
  }
}

export async function rejectFlow(api: ApiClient, store: Store,
                                 pendingId: string,
                                 options: FlowOptions = {}): Promise<boolean> {
  const confirm = options.confirm ?? browserConfirm;
  if (!(await confirm(`Reject candidate ${pendingId}?`))) return false;
  store.markOptimistic(pendingId, "rejected");
  try {
    const updated = await api.reject(pendingId);
    store.upsert(updated);
    return true;
  } catch (error) {
    store.rollback(pendingId);
    if (error instanceof ApiRequestError && error.status === 409) {
      toast(`Could not reject ${pendingId}: ${error.message}`, "error");
      await refetch(api, store);
    } else {
      toast(`Reject failed for ${pendingId}`, "error");
    }
    return false;
  }
}

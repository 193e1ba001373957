/** Console entry point: wiring, scanner toggle, polling, tab switching.
 *
 * The page keeps no state across reloads except the API base URL
 * (localStorage); everything else is refetched.
 */

import { ApiClient } from "./api.js";
import { approveFlow, rejectFlow } from "./approve.js";
import { renderDetail, renderQueue } from "./queue.js";
import { Store } from "./state.js";
import { toast } from "./toast.js";
import { renderBinMessages, renderTree } from "./tree.js";

const BASE_URL_KEY = "peernudge.baseUrl";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

export function startConsole(): void {
  const baseUrl = localStorage.getItem(BASE_URL_KEY) ?? "";
  const api = new ApiClient(baseUrl);
  const store = new Store();

  const queueRoot = el<HTMLDivElement>("queue");
  const detailRoot = el<HTMLDivElement>("detail");
  const treeRoot = el<HTMLDivElement>("tree");
  const binRoot = el<HTMLDivElement>("bin-messages");
  const scannerButton = el<HTMLButtonElement>("scanner-toggle");
  const statusLine = el<HTMLSpanElement>("status-line");
  const baseUrlInput = el<HTMLInputElement>("base-url");

  baseUrlInput.value = baseUrl;
  baseUrlInput.addEventListener("change", () => {
    localStorage.setItem(BASE_URL_KEY, baseUrlInput.value.trim());
    location.reload();
  });

  const callbacks = {
    onApprove: (id: string) => void approveFlow(api, store, id),
    onReject: (id: string) => void rejectFlow(api, store, id),
    onSelect: (id: string) => {
      store.select(id);
      void showDetail(id);
    },
  };

  store.subscribe(() => renderQueue(queueRoot, store, callbacks));

  async function showDetail(id: string): Promise<void> {
    const candidate = store.snapshot.candidates.get(id) ?? null;
    let binPath = null;
    if (candidate && candidate.bin_id !== null) {
      try {
        binPath = (await api.intervention(id)).bin_path;
      } catch {
        binPath = null; // discarded or raced; the detail still renders
      }
    }
    renderDetail(detailRoot, candidate, binPath);
  }

  async function refreshSummary(): Promise<void> {
    const summary = await api.status();
    store.setSummary(summary);
    scannerButton.textContent = summary.scanner_enabled
      ? "Scanner: ON"
      : "Scanner: OFF";
    scannerButton.classList.toggle("on", summary.scanner_enabled);
    statusLine.textContent =
      `model ${summary.model_loaded ? "loaded" : "missing"} · ` +
      `${summary.counts.awaiting_approval} awaiting · ` +
      `${summary.counts.posted} posted · up ${Math.round(summary.uptime_secs)}s`;
  }

  async function refreshCandidates(): Promise<void> {
    const page = await api.candidates(undefined, 500);
    store.replaceCandidates(page.items);
  }

  scannerButton.addEventListener("click", async () => {
    const current = store.snapshot.summary?.scanner_enabled ?? false;
    try {
      await api.setScanner(!current);
      await refreshSummary();
    } catch {
      toast("Could not toggle the scanner", "error");
    }
  });

  async function loadTree(): Promise<void> {
    try {
      const model = await api.modelTree();
      renderTree(treeRoot, model, (binId) =>
        renderBinMessages(binRoot, model, binId));
    } catch {
      treeRoot.textContent = "No group model loaded.";
    }
  }

  for (const button of document.querySelectorAll<HTMLButtonElement>("[data-tab]")) {
    button.addEventListener("click", () => {
      for (const panel of document.querySelectorAll<HTMLElement>(".tab-panel")) {
        panel.classList.toggle("hidden", panel.id !== button.dataset.tab);
      }
      for (const other of document.querySelectorAll("[data-tab]")) {
        other.classList.toggle("active", other === button);
      }
    });
  }

  // long-poll loop: any new audit event triggers a refetch, so rows appear
  // without a manual reload
  async function watchUpdates(): Promise<void> {
    for (;;) {
      try {
        const payload = await api.updates(store.snapshot.lastEventId, 20);
        store.setLastEventId(payload.latest_event_id);
        if (payload.events.length > 0) {
          await Promise.all([refreshCandidates(), refreshSummary()]);
        }
      } catch {
        await new Promise((resolve) => setTimeout(resolve, 2000));
      }
    }
  }

  void (async () => {
    try {
      await Promise.all([refreshSummary(), refreshCandidates(), loadTree()]);
    } catch {
      toast("Cannot reach the service; check the base URL", "error", 10000);
    }
    void watchUpdates();
  })();
}

if (typeof document !== "undefined" && document.getElementById("queue")) {
  startConsole();
}

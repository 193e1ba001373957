import { beforeEach, describe, expect, it, vi } from "vitest";

import { confidenceBadge, renderDetail, renderQueue } from "../src/queue.js";
import { Store } from "../src/state.js";
import { candidate } from "./mockApi.js";

const callbacks = {
  onApprove: vi.fn(),
  onReject: vi.fn(),
  onSelect: vi.fn(),
};

let root: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "<div id='root'></div>";
  root = document.getElementById("root")!;
  vi.clearAllMocks();
});

describe("renderQueue", () => {
  it("shows an empty-state panel when there are no candidates", () => {
    renderQueue(root, new Store(), callbacks);
    expect(root.querySelector(".empty-state")).not.toBeNull();
    expect(root.querySelectorAll("tr[data-pending-id]").length).toBe(0);
  });

  it("renders one row per awaiting candidate with a confidence badge", () => {
    const store = new Store();
    store.replaceCandidates([
      candidate("a", "awaiting_approval", 0.91),
      candidate("b", "awaiting_approval", 0.86),
      candidate("c", "awaiting_approval", 0.55),
    ]);
    renderQueue(root, store, callbacks);
    const rows = root.querySelectorAll("tr[data-pending-id]");
    expect(rows.length).toBe(3);
    const badges = [...root.querySelectorAll(".badge")].map((b) => b.textContent);
    expect(badges).toEqual(["91%", "86%", "55%"]);
  });

  it("groups rows by status", () => {
    const store = new Store();
    store.replaceCandidates([
      candidate("a", "awaiting_approval"),
      candidate("b", "posted"),
      candidate("c", "rejected"),
    ]);
    renderQueue(root, store, callbacks);
    const sections = [...root.querySelectorAll(".status-group")].map(
      (s) => (s as HTMLElement).dataset.status,
    );
    expect(sections).toEqual(["awaiting_approval", "posted", "rejected"]);
  });

  it("only awaiting rows get action buttons", () => {
    const store = new Store();
    store.replaceCandidates([
      candidate("a", "awaiting_approval"),
      candidate("b", "posted"),
    ]);
    renderQueue(root, store, callbacks);
    expect(root.querySelectorAll(".btn-approve").length).toBe(1);
    root.querySelector<HTMLButtonElement>(".btn-approve")!.click();
    expect(callbacks.onApprove).toHaveBeenCalledWith("a");
  });

  it("row click selects the candidate", () => {
    const store = new Store();
    store.replaceCandidates([candidate("a", "awaiting_approval")]);
    renderQueue(root, store, callbacks);
    root.querySelector<HTMLElement>("tr[data-pending-id]")!.click();
    expect(callbacks.onSelect).toHaveBeenCalledWith("a");
  });

  it("a long-poll driven refetch adds new rows without a reload", () => {
    const store = new Store();
    store.subscribe(() => renderQueue(root, store, callbacks));
    store.replaceCandidates([candidate("a", "awaiting_approval")]);
    expect(root.querySelectorAll("tr[data-pending-id]").length).toBe(1);
    store.replaceCandidates([
      candidate("a", "awaiting_approval"),
      candidate("fresh", "awaiting_approval"),
    ]);
    expect(root.querySelectorAll("tr[data-pending-id]").length).toBe(2);
  });
});

describe("confidenceBadge", () => {
  it("formats the probability as a percentage", () => {
    expect(confidenceBadge(0.952).textContent).toBe("95%");
    expect(confidenceBadge(null).textContent).toBe("–");
  });
});

describe("renderDetail", () => {
  it("shows proposal and decision path", () => {
    const detail = document.createElement("aside");
    renderDetail(detail, candidate("a", "awaiting_approval", 0.8), [
      { abbreviation: "Fl", threshold: 100, went_left: true },
      { abbreviation: "A", threshold: 12, went_left: false },
    ]);
    expect(detail.textContent).toContain("80% confidence");
    expect(detail.textContent).toContain("you can quit too");
    expect(detail.querySelector(".bin-path")!.textContent).toContain("Fl <= 100");
    expect(detail.querySelector(".bin-path")!.textContent).toContain("A > 12");
  });
});

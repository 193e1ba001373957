import { beforeEach, describe, expect, it } from "vitest";

import type { GroupModelJson } from "../src/api.js";
import { renderBinMessages, renderTree } from "../src/tree.js";
import { depthTwoTree } from "./mockApi.js";

let root: HTMLElement;
let aside: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "<div id='t'></div><aside id='b'></aside>";
  root = document.getElementById("t")!;
  aside = document.getElementById("b")!;
});

function depthOneTree(): GroupModelJson {
  const model = depthTwoTree();
  model.tree = {
    feature_name: "followers_count",
    threshold: 100,
    n_samples: 6,
    left: { probs: [1], leaf_id: 0, n_samples: 3 },
    right: { probs: [1], leaf_id: 1, n_samples: 3 },
  };
  return model;
}

describe("renderTree", () => {
  it("depth-1 tree renders a root and two leaves", () => {
    renderTree(root, depthOneTree(), () => {});
    expect(root.querySelectorAll("details.tree-node").length).toBe(1);
    expect(root.querySelectorAll(".tree-leaf").length).toBe(2);
  });

  it("depth-2 tree renders both splits and three leaves", () => {
    renderTree(root, depthTwoTree(), () => {});
    expect(root.querySelectorAll("details.tree-node").length).toBe(2);
    expect(root.querySelectorAll(".tree-leaf").length).toBe(3);
  });

  it("nodes carry the profile-feature abbreviations", () => {
    renderTree(root, depthTwoTree(), () => {});
    const labels = [...root.querySelectorAll("summary")].map((s) => s.textContent);
    expect(labels).toContain("Fl <= 100");
    expect(labels).toContain("A <= 12");
  });

  it("leaf click surfaces the bin's message list", () => {
    const model = depthTwoTree();
    renderTree(root, model, (binId) => renderBinMessages(aside, model, binId));
    const leaves = root.querySelectorAll<HTMLElement>(".tree-leaf");
    const target = [...leaves].find((l) => l.dataset.binId === "1")!;
    target.click();
    const items = [...aside.querySelectorAll("li")].map((li) => li.textContent);
    expect(items).toEqual(["one year smoke free", "breathing easy now"]);
    expect(aside.querySelector(".representative")!.textContent)
      .toBe("breathing easy now");
  });

  it("marks branches with true/false labels", () => {
    renderTree(root, depthOneTree(), () => {});
    const labels = [...root.querySelectorAll(".branch-label")].map(
      (l) => l.textContent,
    );
    expect(labels).toEqual(["T", "F"]);
  });
});

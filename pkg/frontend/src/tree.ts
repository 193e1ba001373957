/** Collapsible group-tree view. Left branch is the TRUE side of each split. */

import type { GroupModelJson, TreeNodeJson } from "./api.js";

const ABBREVIATIONS: Record<string, string> = {
  created_at_mms: "A",
  favourites_count: "Fa",
  followers_count: "Fl",
  friends_count: "Fr",
  listed_count: "Lc",
  statuses_count: "S",
  default_profile: "P",
  default_profile_image: "PI",
  verified: "V",
};

export type LeafClickHandler = (binId: number) => void;

function isLeaf(node: TreeNodeJson): boolean {
  return node.probs !== undefined;
}

function nodeElement(node: TreeNodeJson, model: GroupModelJson,
                     onLeafClick: LeafClickHandler): HTMLElement {
  if (isLeaf(node)) {
    const leaf = document.createElement("div");
    leaf.className = "tree-leaf";
    const binId = node.leaf_id ?? -1;
    const members = model.bins[`${binId}`]?.message_ids ?? [];
    leaf.textContent = `bin ${binId} · ${members.length} message${members.length === 1 ? "" : "s"}`;
    leaf.dataset.binId = `${binId}`;
    leaf.addEventListener("click", () => onLeafClick(binId));
    return leaf;
  }

  const details = document.createElement("details");
  details.className = "tree-node";
  details.open = true;
  const summary = document.createElement("summary");
  const abbrev = ABBREVIATIONS[node.feature_name ?? ""] ?? node.feature_name;
  summary.textContent = `${abbrev} <= ${node.threshold}`;
  summary.title = `${node.feature_name}; left branch is TRUE`;
  details.appendChild(summary);

  const branches = document.createElement("div");
  branches.className = "tree-branches";
  for (const [side, child] of [["true", node.left], ["false", node.right]] as const) {
    const branch = document.createElement("div");
    branch.className = `tree-branch branch-${side}`;
    const label = document.createElement("span");
    label.className = "branch-label";
    label.textContent = side === "true" ? "T" : "F";
    branch.appendChild(label);
    if (child) branch.appendChild(nodeElement(child, model, onLeafClick));
    branches.appendChild(branch);
  }
  details.appendChild(branches);
  return details;
}

export function renderTree(container: HTMLElement, model: GroupModelJson,
                           onLeafClick: LeafClickHandler): void {
  container.textContent = "";
  const summary = document.createElement("p");
  summary.className = "tree-summary";
  summary.textContent =
    `${model.n_groups} groups · ${Object.keys(model.bins).length} bins`;
  container.appendChild(summary);
  container.appendChild(nodeElement(model.tree, model, onLeafClick));
}

export function renderBinMessages(container: HTMLElement, model: GroupModelJson,
                                  binId: number): void {
  container.textContent = "";
  const info = model.bins[`${binId}`];
  if (!info) return;
  const heading = document.createElement("h3");
  heading.textContent = `Bin ${binId}`;
  container.appendChild(heading);
  const list = document.createElement("ul");
  list.className = "bin-messages";
  for (const messageId of info.message_ids) {
    const item = document.createElement("li");
    const message = model.messages[messageId];
    item.textContent = message ? message.text : messageId;
    if (messageId === info.representative_id) {
      item.classList.add("representative");
      item.title = "representative message";
    }
    list.appendChild(item);
  }
  container.appendChild(list);
}

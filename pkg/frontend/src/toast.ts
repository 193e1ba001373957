/** Transient notifications, bottom-right. */

let container: HTMLElement | null = null;

function ensureContainer(): HTMLElement {
  if (!container || !container.isConnected) {
    container = document.createElement("div");
    container.className = "toast-container";
    document.body.appendChild(container);
  }
  return container;
}

export function toast(message: string, kind: "info" | "error" = "info",
                      ttlMs = 4000): HTMLElement {
  const el = document.createElement("div");
  el.className = `toast toast-${kind}`;
  el.textContent = message;
  ensureContainer().appendChild(el);
  setTimeout(() => el.remove(), ttlMs);
  return el;
}

// Minimal DOM construction helpers; no framework, flat styling hooks only.

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function section(title: string, id: string, children: (Node | string)[] = []): HTMLElement {
  return el("section", { class: "panel", "data-screen": id }, [
    el("h2", {}, [title]),
    ...children,
  ]);
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function toast(root: HTMLElement, message: string, kind: "error" | "info" = "info"): void {
  const note = el("p", { class: `toast ${kind}`, role: "status" }, [message]);
  root.prepend(note);
}

export function labeled(labelText: string, input: HTMLElement): HTMLElement {
  return el("label", { class: "field" }, [labelText, input]);
}

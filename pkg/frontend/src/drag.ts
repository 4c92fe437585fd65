// Pointer-based card dragging. Positions are stored as viewport
// percentages so the wall is resolution independent.

import type { ApiClient } from "./api";
import type { Position } from "./types";

export function clampPct(value: number): number {
  if (value < 0) return 0;
  if (value > 100) return 100;
  return value;
}

/** Translate a pointer location inside a container into clamped percentages. */
export function toViewportPct(
  clientX: number,
  clientY: number,
  container: { left: number; top: number; width: number; height: number },
): Position {
  const x = container.width > 0 ? ((clientX - container.left) / container.width) * 100 : 0;
  const y = container.height > 0 ? ((clientY - container.top) / container.height) * 100 : 0;
  return { x_pct: clampPct(x), y_pct: clampPct(y) };
}

export interface DragDeps {
  container: HTMLElement;
  api: ApiClient;
  groupId: string;
  token: () => string | null;
  onMoved?: (messageId: string, pos: Position) => void;
}

export function makeDraggable(card: HTMLElement, messageId: string, deps: DragDeps): void {
  let dragging = false;
  let last: Position | null = null;

  const move = (ev: PointerEvent) => {
    if (!dragging) return;
    const rect = deps.container.getBoundingClientRect();
    last = toViewportPct(ev.clientX, ev.clientY, rect);
    card.classList.add("pinned");
    card.style.left = `${last.x_pct}%`;
    card.style.top = `${last.y_pct}%`;
  };

  const up = () => {
    if (!dragging) return;
    dragging = false;
    card.classList.remove("dragging");
    document.removeEventListener("pointermove", move);
    document.removeEventListener("pointerup", up);
    if (last) {
      deps.onMoved?.(messageId, last);
      // Persisting a position requires an admin token; without one the
      // placement stays local to this browser session.
      const token = deps.token();
      if (token) {
        void deps.api
          .patchPosition(deps.groupId, messageId, last.x_pct, last.y_pct, token)
          .catch(() => undefined);
      }
    }
  };

  card.addEventListener("pointerdown", (ev) => {
    if ((ev.target as HTMLElement).tagName === "IMG") return;
    dragging = true;
    card.classList.add("dragging");
    document.addEventListener("pointermove", move);
    document.addEventListener("pointerup", up);
    ev.preventDefault();
  });
}

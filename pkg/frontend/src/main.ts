// Entry point. Hash routing: #/admin shows the admin panel, anything else
// shows the wall for the group named in the hash (default "default").

import { ApiClient } from "./api";
import { AdminPanel, storedToken } from "./admin";
import { applyPosition, renderCard } from "./cards";
import { makeDraggable } from "./drag";
import { renderLeaderboard } from "./leaderboard";
import { startPollLoop, type WallState } from "./poll";
import type { Position } from "./types";

function route(): { view: "admin" } | { view: "wall"; groupId: string } {
  const hash = window.location.hash.replace(/^#\/?/, "");
  if (hash === "admin") return { view: "admin" };
  return { view: "wall", groupId: hash || "default" };
}

function mountWall(root: HTMLElement, api: ApiClient, groupId: string): () => void {
  root.replaceChildren();
  const wall = document.createElement("main");
  wall.className = "wall";
  const sidebar = document.createElement("aside");
  sidebar.className = "sidebar";
  root.append(wall, sidebar);

  const cards = new Map<string, HTMLElement>();
  const localPositions = new Map<string, Position>();

  const onChange = (changedIds: string[], state: WallState) => {
    for (const id of changedIds) {
      const rec = state.records.get(id);
      if (!rec) continue;
      const existing = cards.get(id);
      const card = renderCard(rec, existing);
      const local = localPositions.get(id);
      applyPosition(card, local ? { ...rec, position: local } : rec);
      if (!existing) {
        makeDraggable(card, id, {
          container: wall,
          api,
          groupId,
          token: storedToken,
          onMoved: (messageId, pos) => localPositions.set(messageId, pos),
        });
        // Grid order follows arrival order until a card is dragged.
        wall.appendChild(card);
        cards.set(id, card);
      }
    }
    renderLeaderboard(state.leaderboard, sidebar);
  };

  const { stop } = startPollLoop(
    (since) => api.getMessages(groupId, since),
    onChange,
  );
  return stop;
}

export function bootstrap(root: HTMLElement, api = new ApiClient()): void {
  let teardown: (() => void) | null = null;
  const render = () => {
    teardown?.();
    teardown = null;
    const r = route();
    if (r.view === "admin") {
      root.replaceChildren();
      const panel = new AdminPanel(api, root);
      void panel.start();
    } else {
      teardown = mountWall(root, api, r.groupId);
    }
  };
  window.addEventListener("hashchange", render);
  render();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  bootstrap(document.getElementById("app")!);
}

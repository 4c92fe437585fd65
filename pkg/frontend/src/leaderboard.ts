// Sidebar leaderboard. The server sends the authoritative ranking with each
// poll; computeLeaderboard exists only as a local recompute for tests and
// offline rendering, matching the server's ordering rule.

import type { LeaderboardEntry, MessageRecord } from "./types";

export function computeLeaderboard(records: Iterable<MessageRecord>): LeaderboardEntry[] {
  const counts = new Map<string, number>();
  for (const rec of records) {
    const key = rec.sender_handle;
    counts.set(key, (counts.get(key) ?? 0) + 1);
  }
  return [...counts.entries()]
    .map(([sender_handle, count]) => ({ sender_handle, count }))
    .sort((a, b) => b.count - a.count || a.sender_handle.localeCompare(b.sender_handle));
}

export function renderLeaderboard(entries: LeaderboardEntry[], target: HTMLElement): void {
  target.replaceChildren();
  const title = document.createElement("h2");
  title.textContent = "Leaderboard";
  target.appendChild(title);
  const list = document.createElement("ol");
  for (const entry of entries) {
    const li = document.createElement("li");
    li.textContent = `@${entry.sender_handle} — ${entry.count}`;
    list.appendChild(li);
  }
  target.appendChild(list);
}

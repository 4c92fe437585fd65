// Poll cursor and merge logic for the wall.
//
// The `since` parameter only returns strictly newer records, but a record's
// badge lands later without changing its timestamp. The cursor therefore
// never advances past the oldest record still "generating", so those rows
// keep being re-fetched until their badge arrives.

import type { LeaderboardEntry, MessageRecord } from "./types";

export const POLL_INTERVAL_MS = 5000;

export class WallState {
  records = new Map<string, MessageRecord>();
  arrivalOrder: string[] = [];
  leaderboard: LeaderboardEntry[] = [];

  nextSince(): number | undefined {
    if (this.records.size === 0) return undefined;
    let maxTs = -Infinity;
    let minGeneratingTs = Infinity;
    for (const rec of this.records.values()) {
      maxTs = Math.max(maxTs, rec.timestamp_ms);
      if (rec.signature_status === "generating") {
        minGeneratingTs = Math.min(minGeneratingTs, rec.timestamp_ms);
      }
    }
    if (minGeneratingTs !== Infinity) return minGeneratingTs - 1;
    return maxTs;
  }

  /** Merge a poll response; returns ids that are new or changed. */
  merge(messages: MessageRecord[], leaderboard: LeaderboardEntry[]): string[] {
    this.leaderboard = leaderboard;
    const changed: string[] = [];
    for (const rec of messages) {
      const prev = this.records.get(rec.message_id);
      if (!prev) {
        this.arrivalOrder.push(rec.message_id);
        this.records.set(rec.message_id, rec);
        changed.push(rec.message_id);
      } else if (JSON.stringify(prev) !== JSON.stringify(rec)) {
        this.records.set(rec.message_id, rec);
        changed.push(rec.message_id);
      }
    }
    return changed;
  }
}

export type PollHandler = (changedIds: string[], state: WallState) => void;

export function startPollLoop(
  fetchMessages: (since?: number) => Promise<{ messages: MessageRecord[]; leaderboard: LeaderboardEntry[] }>,
  onChange: PollHandler,
  intervalMs = POLL_INTERVAL_MS,
): { state: WallState; stop: () => void } {
  const state = new WallState();

  const tick = async () => {
    try {
      const resp = await fetchMessages(state.nextSince());
      const changed = state.merge(resp.messages, resp.leaderboard);
      if (changed.length > 0) onChange(changed, state);
    } catch (err) {
      console.warn("poll failed, will retry", err);
    }
  };

  void tick();
  const timer = setInterval(tick, intervalMs);
  return { state, stop: () => clearInterval(timer) };
}

// Wire types mirroring docs/api-contract.md. Field names are the contract's.

export interface HslColor {
  h: number;
  s: number;
  l: number;
  css: string;
}

export interface Badge {
  q_num: number;
  pk_hash: string;
  signature: string;
  color: HslColor;
  nonce_hex: string;
}

export interface Provenance {
  device: string;
  algorithm: string;
  duration_ms: number;
  bell: number[];
  q_num: number;
}

export interface Position {
  x_pct: number;
  y_pct: number;
}

export interface MessageRecord {
  group_id: string;
  message_id: string;
  timestamp_ms: number;
  sender_name: string;
  sender_handle: string;
  text: string;
  photo_ref: string | null;
  photo_url: string | null;
  position: Position | null;
  signature_status: "generating" | "completed";
  badge: Badge | null;
  provenance: Provenance | null;
  hidden?: boolean; // admin projection only
}

export interface LeaderboardEntry {
  sender_handle: string;
  count: number;
}

export interface MessagesResponse {
  messages: MessageRecord[];
  leaderboard: LeaderboardEntry[];
}

export interface GroupSummary {
  group_id: string;
  message_count: number;
  leaderboard: LeaderboardEntry[];
}

export const FALLBACK_DEVICE = "local-fallback";

export function isFallback(record: MessageRecord): boolean {
  return record.provenance?.device === FALLBACK_DEVICE;
}

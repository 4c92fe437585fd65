import type { Badge, MessageRecord, Provenance } from "../src/types";

export function makeBadge(overrides: Partial<Badge> = {}): Badge {
  return {
    q_num: 123,
    pk_hash: "46F0D090CB8B",
    signature: "szu6EYZ9dKWjJDcTLtcBZOhD",
    color: { h: 42.5, s: 85, l: 55, css: "hsl(42.5, 85%, 55%)" },
    nonce_hex: "00".repeat(32),
    ...overrides,
  };
}

export function makeProvenance(overrides: Partial<Provenance> = {}): Provenance {
  return {
    device: "SV1-embedded",
    algorithm: "ToyLWE-Braket-SV1",
    duration_ms: 12,
    bell: [0.5, 0, 0, 0.5],
    q_num: 123,
    ...overrides,
  };
}

export function makeRecord(overrides: Partial<MessageRecord> = {}): MessageRecord {
  return {
    group_id: "g1",
    message_id: "m1",
    timestamp_ms: 1000,
    sender_name: "Alice",
    sender_handle: "alice",
    text: "hello wall",
    photo_ref: null,
    photo_url: null,
    position: null,
    signature_status: "completed",
    badge: makeBadge(),
    provenance: makeProvenance(),
    ...overrides,
  };
}

export function generatingRecord(overrides: Partial<MessageRecord> = {}): MessageRecord {
  return makeRecord({
    signature_status: "generating",
    badge: null,
    provenance: null,
    ...overrides,
  });
}

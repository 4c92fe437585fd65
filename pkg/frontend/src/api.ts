// Thin client over the documented HTTP contract; no other requests exist.

import type { GroupSummary, MessagesResponse, MessageRecord } from "./types";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function asJson<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    throw new ApiError(resp.status, `${resp.status} ${resp.statusText}`);
  }
  return (await resp.json()) as T;
}

export class ApiClient {
  constructor(private baseUrl = "") {}

  async getMessages(groupId: string, sinceMs?: number): Promise<MessagesResponse> {
    const query = sinceMs !== undefined ? `?since=${sinceMs}` : "";
    const resp = await fetch(
      `${this.baseUrl}/api/messages/${encodeURIComponent(groupId)}${query}`,
    );
    return asJson<MessagesResponse>(resp);
  }

  async getGroups(): Promise<GroupSummary[]> {
    const resp = await fetch(`${this.baseUrl}/api/groups`);
    const body = await asJson<{ groups: GroupSummary[] }>(resp);
    return body.groups;
  }

  async login(password: string): Promise<string> {
    const resp = await fetch(`${this.baseUrl}/api/admin`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ password }),
    });
    const body = await asJson<{ token: string }>(resp);
    return body.token;
  }

  async adminMessages(groupId: string, token: string): Promise<MessageRecord[]> {
    const resp = await fetch(
      `${this.baseUrl}/api/admin/messages/${encodeURIComponent(groupId)}`,
      { headers: { Authorization: `Bearer ${token}` } },
    );
    const body = await asJson<{ messages: MessageRecord[] }>(resp);
    return body.messages;
  }

  async deleteMessage(groupId: string, messageId: string, token: string): Promise<void> {
    const resp = await fetch(
      `${this.baseUrl}/api/messages/${encodeURIComponent(groupId)}?id=${encodeURIComponent(messageId)}`,
      { method: "DELETE", headers: { Authorization: `Bearer ${token}` } },
    );
    await asJson(resp);
  }

  async patchPosition(
    groupId: string,
    messageId: string,
    xPct: number,
    yPct: number,
    token: string,
  ): Promise<void> {
    const resp = await fetch(`${this.baseUrl}/api/messages/${encodeURIComponent(groupId)}`, {
      method: "PATCH",
      headers: {
        "Content-Type": "application/json",
        Authorization: `Bearer ${token}`,
      },
      body: JSON.stringify({ id: messageId, x_pct: xPct, y_pct: yPct }),
    });
    await asJson(resp);
  }
}

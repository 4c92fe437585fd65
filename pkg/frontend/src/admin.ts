// Admin panel: password login, group selector, provenance table with
// soft-delete controls. The session token lives in sessionStorage so a
// reload keeps the session but closing the tab ends it.

import { ApiClient, ApiError } from "./api";
import { isFallback, type MessageRecord } from "./types";

export const TOKEN_KEY = "qsign-admin-token";

export function storedToken(): string | null {
  return sessionStorage.getItem(TOKEN_KEY);
}

export function formatBell(record: MessageRecord): string {
  const bell = record.provenance?.bell;
  if (!bell) return "—";
  return `[${bell.map((p) => p.toFixed(3)).join(", ")}]`;
}

export function provenanceRow(record: MessageRecord): string[] {
  return [
    record.message_id,
    record.sender_name,
    record.provenance?.device ?? "—",
    record.provenance?.algorithm ?? "—",
    formatBell(record),
    record.badge ? String(record.badge.q_num) : "—",
    record.hidden ? "hidden" : record.signature_status,
  ];
}

const HEADERS = ["id", "sender", "device", "algorithm", "bell state", "quantum number", "status"];

export class AdminPanel {
  private groupId: string | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
  ) {}

  async start(): Promise<void> {
    if (storedToken()) {
      await this.showGroups();
    } else {
      this.showLogin();
    }
  }

  showLogin(error?: string): void {
    this.root.replaceChildren();
    const form = document.createElement("form");
    form.className = "admin-login";
    const input = document.createElement("input");
    input.type = "password";
    input.placeholder = "admin password";
    input.name = "password";
    const button = document.createElement("button");
    button.type = "submit";
    button.textContent = "Log in";
    form.append(input, button);
    if (error) {
      const msg = document.createElement("p");
      msg.className = "error";
      msg.textContent = error;
      form.appendChild(msg);
    }
    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      void this.login(input.value);
    });
    this.root.appendChild(form);
  }

  async login(password: string): Promise<void> {
    try {
      const token = await this.api.login(password);
      sessionStorage.setItem(TOKEN_KEY, token);
      await this.showGroups();
    } catch (err) {
      const message = err instanceof ApiError && err.status === 401 ? "wrong password" : "login failed";
      this.showLogin(message);
    }
  }

  async showGroups(): Promise<void> {
    let groups;
    try {
      groups = await this.api.getGroups();
    } catch {
      this.showLogin("session expired");
      return;
    }
    this.root.replaceChildren();
    const select = document.createElement("select");
    select.className = "group-select";
    for (const g of groups) {
      const opt = document.createElement("option");
      opt.value = g.group_id;
      opt.textContent = `${g.group_id} (${g.message_count})`;
      select.appendChild(opt);
    }
    const table = document.createElement("div");
    table.className = "admin-table";
    select.addEventListener("change", () => {
      this.groupId = select.value;
      void this.refresh(table);
    });
    this.root.append(select, table);
    if (groups.length > 0) {
      this.groupId = groups[0].group_id;
      await this.refresh(table);
    }
  }

  async refresh(target: HTMLElement): Promise<void> {
    const token = storedToken();
    if (!token || !this.groupId) return;
    let records: MessageRecord[];
    try {
      records = await this.api.adminMessages(this.groupId, token);
    } catch (err) {
      if (err instanceof ApiError && err.status === 401) {
        sessionStorage.removeItem(TOKEN_KEY);
        this.showLogin("session expired");
      }
      return;
    }
    target.replaceChildren();
    const table = document.createElement("table");
    const thead = document.createElement("thead");
    const headRow = document.createElement("tr");
    for (const h of [...HEADERS, ""]) {
      const th = document.createElement("th");
      th.textContent = h;
      headRow.appendChild(th);
    }
    thead.appendChild(headRow);
    table.appendChild(thead);
    const tbody = document.createElement("tbody");
    for (const rec of records) {
      const tr = document.createElement("tr");
      if (isFallback(rec)) tr.classList.add("fallback-row");
      for (const cell of provenanceRow(rec)) {
        const td = document.createElement("td");
        td.textContent = cell;
        tr.appendChild(td);
      }
      if (isFallback(rec)) {
        tr.cells[2].textContent = `△ ${tr.cells[2].textContent}`;
      }
      const actions = document.createElement("td");
      if (!rec.hidden) {
        const del = document.createElement("button");
        del.textContent = "Delete";
        del.className = "delete-btn";
        del.addEventListener("click", () => {
          void this.api
            .deleteMessage(this.groupId!, rec.message_id, token)
            .then(() => this.refresh(target))
            .catch(() => undefined);
        });
        actions.appendChild(del);
      }
      tr.appendChild(actions);
      tbody.appendChild(tr);
    }
    table.appendChild(tbody);
    target.appendChild(table);
  }
}

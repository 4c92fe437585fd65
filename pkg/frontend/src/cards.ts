// Card rendering. The card background is the served hsl() string verbatim:
// the UI does no color math of its own.

import { isFallback, type MessageRecord } from "./types";
import { openLightbox } from "./lightbox";

export function badgeLine(record: MessageRecord): string {
  if (!record.badge) return "";
  return `Q#${record.badge.q_num} | ${record.badge.pk_hash}`;
}

export function statusMarker(record: MessageRecord): "generating" | "fallback" | "completed" {
  if (record.signature_status === "generating") return "generating";
  return isFallback(record) ? "fallback" : "completed";
}

export function renderCard(record: MessageRecord, existing?: HTMLElement): HTMLElement {
  const card = existing ?? document.createElement("article");
  card.className = "card";
  card.dataset.messageId = record.message_id;
  card.replaceChildren();

  if (record.badge) {
    card.style.backgroundColor = record.badge.color.css;
  } else {
    card.style.removeProperty("background-color");
  }

  const sender = document.createElement("header");
  sender.className = "card-sender";
  sender.textContent = record.sender_name;
  const handle = document.createElement("span");
  handle.className = "card-handle";
  handle.textContent = record.sender_handle ? `@${record.sender_handle}` : "";
  sender.appendChild(handle);
  card.appendChild(sender);

  const body = document.createElement("p");
  body.className = "card-text";
  // Server-side sanitization entity-encoded the text; render the entities.
  body.innerHTML = record.text;
  card.appendChild(body);

  if (record.photo_url) {
    const img = document.createElement("img");
    img.className = "card-photo";
    img.src = record.photo_url;
    img.addEventListener("click", () => openLightbox(record.photo_url!));
    card.appendChild(img);
  }

  const footer = document.createElement("footer");
  footer.className = "card-footer";
  const marker = statusMarker(record);
  if (marker === "generating") {
    const spinner = document.createElement("span");
    spinner.className = "spinner";
    spinner.title = "quantum signature generating";
    footer.appendChild(spinner);
  } else {
    const badge = document.createElement("span");
    badge.className = "card-badge";
    badge.textContent = badgeLine(record);
    footer.appendChild(badge);
    if (marker === "fallback") {
      const warn = document.createElement("span");
      warn.className = "fallback-marker";
      warn.title = "local fallback (no quantum execution)";
      warn.textContent = "△";
      footer.appendChild(warn);
    }
  }
  card.appendChild(footer);
  return card;
}

/** Default auto-layout before any drag: grid flow by arrival order. */
export function applyPosition(card: HTMLElement, record: MessageRecord): void {
  if (record.position) {
    card.classList.add("pinned");
    card.style.left = `${record.position.x_pct}%`;
    card.style.top = `${record.position.y_pct}%`;
  } else {
    card.classList.remove("pinned");
    card.style.removeProperty("left");
    card.style.removeProperty("top");
  }
}

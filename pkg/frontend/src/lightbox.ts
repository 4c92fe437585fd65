// Full-screen photo overlay; click anywhere (or press Escape) to close.

export function openLightbox(src: string): HTMLElement {
  closeLightbox();
  const overlay = document.createElement("div");
  overlay.className = "lightbox";
  const img = document.createElement("img");
  img.src = src;
  overlay.appendChild(img);
  overlay.addEventListener("click", closeLightbox);
  document.addEventListener("keydown", escListener);
  document.body.appendChild(overlay);
  return overlay;
}

export function closeLightbox(): void {
  const existing = document.querySelector(".lightbox");
  if (existing) {
    existing.remove();
    document.removeEventListener("keydown", escListener);
  }
}

function escListener(ev: KeyboardEvent): void {
  if (ev.key === "Escape") closeLightbox();
}

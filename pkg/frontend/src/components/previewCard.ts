import type { CitationPreview } from "../api.js";

// Evidence preview pop-over: title, page, and the quote in context — all
// verbatim from the citations endpoint.
export function renderPreview(container: HTMLElement, preview: CitationPreview | null,
                              onOpenSource: (preview: CitationPreview) => void): void {
  container.innerHTML = "";
  if (preview === null) {
    container.classList.remove("open");
    return;
  }
  container.classList.add("open");

  const card = document.createElement("div");
  card.className = "preview-card";
  card.dataset.anchorId = preview.anchor_id;

  const header = document.createElement("button");
  header.className = "preview-title";
  header.textContent = `${preview.title} — p. ${preview.page}`;
  header.addEventListener("click", () => onOpenSource(preview));
  card.appendChild(header);

  const snippet = document.createElement("blockquote");
  snippet.className = "preview-snippet";
  const quoteStart = preview.context_window.indexOf(preview.quote);
  if (quoteStart < 0) {
    snippet.textContent = preview.context_window;
  } else {
    snippet.appendChild(document.createTextNode(
      preview.context_window.slice(0, quoteStart)));
    const mark = document.createElement("mark");
    mark.textContent = preview.quote;
    snippet.appendChild(mark);
    snippet.appendChild(document.createTextNode(
      preview.context_window.slice(quoteStart + preview.quote.length)));
  }
  card.appendChild(snippet);
  container.appendChild(card);
}

export function renderStaleBanner(container: HTMLElement): void {
  container.innerHTML = "";
  container.classList.add("open");
  const banner = document.createElement("div");
  banner.className = "stale-citation-banner";
  banner.setAttribute("role", "alert");
  banner.textContent =
    "This citation points at an older corpus version that is no longer loaded.";
  container.appendChild(banner);
}

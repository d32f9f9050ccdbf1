import type { CitationPreview, DocumentContent } from "../api.js";

// Side-by-side source viewer over block-structured canonical text. Page
// boundaries render as ruled separators; the cited block is located by
// byte-range overlap (service-provided offsets, no client arithmetic) and
// the quote highlighted by exact string match.
export function renderViewer(container: HTMLElement, doc: DocumentContent,
                             citation: CitationPreview): { scrolledPage: number | null } {
  container.innerHTML = "";
  container.classList.add("open");

  const header = document.createElement("h2");
  header.className = "viewer-title";
  header.textContent = doc.title;
  container.appendChild(header);

  const [citeStart, citeEnd] = citation.byte_range;
  let scrollTarget: HTMLElement | null = null;
  let scrolledPage: number | null = null;
  let lastPage = 0;

  for (const block of doc.blocks) {
    if (block.page !== lastPage) {
      const rule = document.createElement("div");
      rule.className = "page-rule";
      rule.dataset.page = String(block.page);
      rule.textContent = `— page ${block.page} —`;
      container.appendChild(rule);
      lastPage = block.page;
    }
    const el = document.createElement(block.kind === "heading" ? "h3" : "p");
    el.className = `viewer-block kind-${block.kind}`;
    el.dataset.page = String(block.page);
    el.dataset.path = block.path;

    const [blockStart, blockEnd] = block.byte_range;
    const holdsCitation = blockStart <= citeStart && citeEnd <= blockEnd;
    if (holdsCitation) {
      const at = block.text.indexOf(citation.quote);
      if (at >= 0) {
        el.appendChild(document.createTextNode(block.text.slice(0, at)));
        const mark = document.createElement("mark");
        mark.className = "cited-span";
        mark.textContent = citation.quote;
        el.appendChild(mark);
        el.appendChild(document.createTextNode(
          block.text.slice(at + citation.quote.length)));
      } else {
        el.textContent = block.text;
      }
      scrollTarget = el;
      scrolledPage = block.page;
    } else {
      el.textContent = block.text;
    }
    container.appendChild(el);
  }

  if (scrollTarget) {
    scrollTarget.scrollIntoView?.({ block: "center" });
    container.dataset.scrolledPage = String(scrolledPage);
  }
  return { scrolledPage };
}

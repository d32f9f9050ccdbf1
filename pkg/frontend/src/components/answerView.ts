import type { Envelope } from "../api.js";

const MARKER_RE = /(\[\d+\])/g;

export interface AnswerCallbacks {
  onCitationHover: (anchorId: string, marker: HTMLElement) => void;
  onCitationClick: (anchorId: string) => void;
  onRefinementPick: (text: string) => void;
}

// Renders a grounded answer with interactive [n] markers, or an abstention
// with its rationale and clickable refinement chips.
export function renderAnswer(container: HTMLElement, envelope: Envelope,
                             callbacks: AnswerCallbacks): void {
  container.innerHTML = "";
  if (envelope.kind === "grounded") {
    renderGrounded(container, envelope, callbacks);
  } else {
    renderAbstention(container, envelope, callbacks);
  }
}

function renderGrounded(container: HTMLElement, envelope: Envelope,
                        callbacks: AnswerCallbacks): void {
  const panel = document.createElement("div");
  panel.className = "answer grounded";
  const body = document.createElement("p");
  body.className = "answer-text";
  const citations = envelope.citations ?? [];
  for (const part of (envelope.text ?? "").split(MARKER_RE)) {
    const match = /^\[(\d+)\]$/.exec(part);
    if (!match) {
      body.appendChild(document.createTextNode(part));
      continue;
    }
    const index = parseInt(match[1], 10) - 1;
    const anchor = citations[index];
    const button = document.createElement("button");
    button.className = "citation-marker";
    button.textContent = part;
    if (anchor) {
      button.dataset.anchorId = anchor.anchor_id;
      button.addEventListener("mouseenter", () =>
        callbacks.onCitationHover(anchor.anchor_id, button));
      button.addEventListener("click", () => callbacks.onCitationClick(anchor.anchor_id));
    } else {
      button.disabled = true;
    }
    body.appendChild(button);
  }
  panel.appendChild(body);

  const meta = document.createElement("div");
  meta.className = "verification-summary";
  const v = envelope.verification;
  meta.textContent =
    `coverage ${(v.coverage * 100).toFixed(0)}% · agreement ${(v.agreement * 100).toFixed(0)}% · ` +
    `${citations.length} citation${citations.length === 1 ? "" : "s"}`;
  panel.appendChild(meta);
  container.appendChild(panel);
}

function renderAbstention(container: HTMLElement, envelope: Envelope,
                          callbacks: AnswerCallbacks): void {
  const panel = document.createElement("div");
  panel.className = "answer abstained";

  const rationale = document.createElement("p");
  rationale.className = "abstention-rationale";
  rationale.textContent = envelope.rationale ?? "";
  panel.appendChild(rationale);

  const chipRow = document.createElement("div");
  chipRow.className = "refinement-chips";
  for (const refinement of envelope.refinements ?? []) {
    chipRow.appendChild(chip(refinement, refinement, callbacks));
  }
  for (const topic of envelope.related_topics ?? []) {
    chipRow.appendChild(
      chip(topic.title, `${topic.title}: ${envelope.query}`, callbacks, "topic-chip"));
  }
  panel.appendChild(chipRow);
  container.appendChild(panel);
}

function chip(label: string, fillText: string, callbacks: AnswerCallbacks,
              extraClass = ""): HTMLButtonElement {
  const button = document.createElement("button");
  button.className = `refinement-chip ${extraClass}`.trim();
  button.textContent = label;
  button.addEventListener("click", () => callbacks.onRefinementPick(fillText));
  return button;
}

// Plain-text export: answer text plus a numbered citation list (or the
// abstention rationale), for the copy-to-clipboard control.
export function answerAsText(envelope: Envelope): string {
  if (envelope.kind === "abstained") {
    const refinements = (envelope.refinements ?? []).map((r) => `- ${r}`).join("\n");
    return `${envelope.rationale ?? ""}\n\nSuggested refinements:\n${refinements}`;
  }
  const lines = [envelope.text ?? "", "", "Sources:"];
  (envelope.citations ?? []).forEach((anchor, i) => {
    lines.push(`[${i + 1}] ${anchor.doc_id}, p. ${anchor.page} — "${anchor.quote}"`);
  });
  return lines.join("\n");
}

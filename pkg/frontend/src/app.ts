import { ApiClient, ApiError, CitationPreview } from "./api.js";
import { initialState, ViewState } from "./state.js";
import { answerAsText, renderAnswer } from "./components/answerView.js";
import { renderNotes } from "./components/notesPanel.js";
import { renderPreview, renderStaleBanner } from "./components/previewCard.js";
import { renderViewer } from "./components/sourceViewer.js";
import { renderTrace } from "./components/tracePanel.js";

export interface AppHandles {
  state: ViewState;
  elements: {
    queryInput: HTMLInputElement;
    submitButton: HTMLButtonElement;
    answer: HTMLElement;
    trace: HTMLElement;
    preview: HTMLElement;
    viewer: HTMLElement;
    notes: HTMLElement;
    error: HTMLElement;
    copyButton: HTMLButtonElement;
    saveButton: HTMLButtonElement;
  };
  submitQuery(text: string): Promise<void>;
  openCitation(anchorId: string): Promise<void>;
  openSource(preview: CitationPreview): Promise<void>;
  saveNote(tags: string[]): Promise<void>;
  copyResponse(): Promise<string>;
  whenIdle(): Promise<void>;
}

export function createApp(root: HTMLElement, client: ApiClient,
                          clipboard?: (text: string) => Promise<void>): AppHandles {
  const state = initialState();
  root.innerHTML = `
    <div class="layout">
      <section class="main-pane">
        <form class="query-form">
          <input class="query-input" type="text"
                 placeholder="Ask a question about the document library" />
          <button class="query-submit" type="submit">Ask</button>
        </form>
        <div class="error-state" hidden></div>
        <div class="trace-panel"></div>
        <div class="answer-panel"></div>
        <div class="answer-actions" hidden>
          <button class="copy-button" type="button">Copy</button>
          <button class="save-button" type="button">Save as note</button>
        </div>
        <div class="preview-pane"></div>
      </section>
      <aside class="side-pane">
        <div class="viewer-pane"></div>
        <div class="notes-panel"></div>
      </aside>
    </div>`;

  const queryForm = root.querySelector<HTMLFormElement>(".query-form")!;
  const elements = {
    queryInput: root.querySelector<HTMLInputElement>(".query-input")!,
    submitButton: root.querySelector<HTMLButtonElement>(".query-submit")!,
    answer: root.querySelector<HTMLElement>(".answer-panel")!,
    trace: root.querySelector<HTMLElement>(".trace-panel")!,
    preview: root.querySelector<HTMLElement>(".preview-pane")!,
    viewer: root.querySelector<HTMLElement>(".viewer-pane")!,
    notes: root.querySelector<HTMLElement>(".notes-panel")!,
    error: root.querySelector<HTMLElement>(".error-state")!,
    copyButton: root.querySelector<HTMLButtonElement>(".copy-button")!,
    saveButton: root.querySelector<HTMLButtonElement>(".save-button")!,
  };
  const actionsRow = root.querySelector<HTMLElement>(".answer-actions")!;

  let inFlight: Promise<void> = Promise.resolve();
  let traceGeneration = 0;

  const writeClipboard = clipboard
    ?? ((text: string) => navigator.clipboard.writeText(text));

  async function ensureSession(): Promise<string> {
    if (state.sessionId === null) {
      const created = await client.createSession("ui-user");
      state.sessionId = created.session_id;
    }
    return state.sessionId;
  }

  function showError(message: string, retryText: string | null): void {
    elements.error.hidden = false;
    elements.error.innerHTML = "";
    const label = document.createElement("span");
    label.textContent = message;
    elements.error.appendChild(label);
    if (retryText !== null) {
      const retry = document.createElement("button");
      retry.className = "retry-button";
      retry.textContent = "Retry";
      retry.addEventListener("click", () => {
        void submitQuery(retryText);
      });
      elements.error.appendChild(retry);
    }
  }

  async function pollTrace(traceId: string, generation: number): Promise<void> {
    for (let attempt = 0; attempt < 10; attempt++) {
      if (generation !== traceGeneration) return; // superseded by a new query
      try {
        state.trace = await client.trace(traceId);
        renderTrace(elements.trace, state.trace);
        return;
      } catch (error) {
        if (error instanceof ApiError && error.status === 404) {
          await new Promise((resolve) => setTimeout(resolve, 150));
          continue;
        }
        throw error;
      }
    }
  }

  const callbacks = {
    onCitationHover: (anchorId: string) => {
      void openCitation(anchorId);
    },
    onCitationClick: (anchorId: string) => {
      void openCitation(anchorId);
    },
    onRefinementPick: (text: string) => {
      elements.queryInput.value = text;
      elements.queryInput.focus();
    },
  };

  async function submitQuery(text: string): Promise<void> {
    if (!text.trim()) return;
    traceGeneration += 1; // cancels any trace polling for the previous query
    const generation = traceGeneration;
    elements.error.hidden = true;
    state.openPreview = null;
    renderPreview(elements.preview, null, () => undefined);
    const run = (async () => {
      try {
        const sessionId = await ensureSession();
        state.envelope = await client.query(text, sessionId);
        renderAnswer(elements.answer, state.envelope, callbacks);
        actionsRow.hidden = false;
        await pollTrace(state.envelope.trace_id, generation);
      } catch (error) {
        if (error instanceof ApiError && error.status >= 500) {
          showError(`Service unavailable (${error.status}). ${error.message}`, text);
          return;
        }
        if (error instanceof ApiError) {
          showError(`Request failed (${error.status}): ${error.message}`, null);
          return;
        }
        throw error;
      }
    })();
    inFlight = run;
    await run;
  }

  async function openCitation(anchorId: string): Promise<void> {
    try {
      state.openPreview = await client.citation(anchorId);
      renderPreview(elements.preview, state.openPreview, (preview) => {
        void openSource(preview);
      });
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        renderStaleBanner(elements.preview);
        return;
      }
      throw error;
    }
  }

  async function openSource(preview: CitationPreview): Promise<void> {
    const doc = await client.document(preview.doc_id, state.envelope?.corpus_version);
    const { scrolledPage } = renderViewer(elements.viewer, doc, preview);
    state.viewerDocId = doc.doc_id;
    state.viewerScrollPage = scrolledPage;
  }

  async function refreshNotes(): Promise<void> {
    const sessionId = await ensureSession();
    state.notes = (await client.notes(sessionId)).notes;
    renderNotes(elements.notes, state.notes, (noteId, tag) => {
      void (async () => {
        await client.addTags(noteId, sessionId, [tag]);
        await refreshNotes();
      })();
    });
  }

  async function saveNote(tags: string[]): Promise<void> {
    if (state.envelope === null) return;
    const sessionId = await ensureSession();
    await client.saveNote(sessionId, state.envelope.trace_id, tags);
    await refreshNotes();
  }

  async function copyResponse(): Promise<string> {
    if (state.envelope === null) return "";
    const text = answerAsText(state.envelope);
    await writeClipboard(text);
    return text;
  }

  queryForm.addEventListener("submit", (event) => {
    event.preventDefault();
    void submitQuery(elements.queryInput.value);
  });
  elements.copyButton.addEventListener("click", () => {
    void copyResponse();
  });
  elements.saveButton.addEventListener("click", () => {
    void saveNote([]);
  });

  return {
    state,
    elements,
    submitQuery,
    openCitation,
    openSource,
    saveNote,
    copyResponse,
    whenIdle: () => inFlight,
  };
}

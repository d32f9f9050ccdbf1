import type { CitationPreview, Envelope, Note, Trace } from "./api.js";

// Single mutable view state; every field mirrors service responses.
export interface ViewState {
  sessionId: string | null;
  envelope: Envelope | null;
  trace: Trace | null;
  openPreview: CitationPreview | null;
  viewerDocId: string | null;
  viewerScrollPage: number | null;
  notes: Note[];
}

export function initialState(): ViewState {
  return {
    sessionId: null,
    envelope: null,
    trace: null,
    openPreview: null,
    viewerDocId: null,
    viewerScrollPage: null,
    notes: [],
  };
}

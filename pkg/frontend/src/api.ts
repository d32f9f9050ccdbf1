// Typed client for the query service. The UI never derives quotes, pages,
// or offsets itself; everything rendered comes from these endpoints.

export interface CitationAnchor {
  anchor_id: string;
  node_id: string;
  doc_id: string;
  page: number;
  byte_range: [number, number];
  quote: string;
}

export interface VerificationSummary {
  coverage: number;
  agreement: number;
  decision: string;
  flagged_claim_ids: string[];
  evidence_sufficient: boolean;
}

export interface RelatedTopic {
  title: string;
  doc_id: string;
}

export interface Envelope {
  kind: "grounded" | "abstained";
  query: string;
  corpus_version: string;
  trace_id: string;
  timings: Record<string, number>;
  language_fallback: boolean;
  verification: VerificationSummary;
  text?: string;
  citations?: CitationAnchor[];
  render_language?: string;
  rationale?: string;
  refinements?: string[];
  related_topics?: RelatedTopic[];
}

export interface TraceEvent {
  type: string;
  [key: string]: unknown;
}

export interface Trace {
  trace_id: string;
  query: string;
  events: TraceEvent[];
}

export interface CitationPreview {
  anchor_id: string;
  doc_id: string;
  title: string;
  page: number;
  quote: string;
  context_window: string;
  byte_range: [number, number];
  source_uri: string;
}

export interface DocumentBlock {
  path: string;
  kind: string;
  page: number;
  text: string;
  byte_range: [number, number];
}

export interface DocumentContent {
  doc_id: string;
  title: string;
  page_count: number;
  corpus_version: string;
  blocks: DocumentBlock[];
}

export interface Note {
  note_id: string;
  trace_id: string;
  tags: string[];
  corpus_version: string;
  saved_at: string;
  envelope: Envelope;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.error === "string") detail = body.error;
    } catch {
      // keep statusText
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(private baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  createSession(user: string): Promise<{ session_id: string }> {
    return request(this.url("/v1/sessions"), {
      method: "POST",
      body: JSON.stringify({ user }),
    });
  }

  query(text: string, sessionId: string, context: string[] = []): Promise<Envelope> {
    return request(this.url("/v1/query"), {
      method: "POST",
      body: JSON.stringify({ text, session_id: sessionId, context }),
    });
  }

  trace(traceId: string): Promise<Trace> {
    return request(this.url(`/v1/traces/${traceId}`));
  }

  citation(anchorId: string): Promise<CitationPreview> {
    return request(this.url(`/v1/citations/${anchorId}`));
  }

  document(docId: string, version?: string): Promise<DocumentContent> {
    const suffix = version ? `?version=${encodeURIComponent(version)}` : "";
    return request(this.url(`/v1/documents/${docId}${suffix}`));
  }

  saveNote(sessionId: string, traceId: string, tags: string[]): Promise<{ note_id: string }> {
    return request(this.url("/v1/notes"), {
      method: "POST",
      body: JSON.stringify({ session_id: sessionId, envelope_ref: traceId, tags }),
    });
  }

  notes(sessionId: string): Promise<{ notes: Note[] }> {
    return request(this.url(`/v1/notes?session_id=${encodeURIComponent(sessionId)}`));
  }

  addTags(noteId: string, sessionId: string, tags: string[]): Promise<{ note: Note }> {
    return request(this.url(`/v1/notes/${noteId}/tags`), {
      method: "POST",
      body: JSON.stringify({ session_id: sessionId, tags }),
    });
  }
}

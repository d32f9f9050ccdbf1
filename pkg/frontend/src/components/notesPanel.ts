import type { Note } from "../api.js";

export function renderNotes(container: HTMLElement, notes: Note[],
                            onAddTag: (noteId: string, tag: string) => void): void {
  container.innerHTML = "";
  const heading = document.createElement("h3");
  heading.textContent = `Notes (${notes.length})`;
  container.appendChild(heading);

  for (const note of notes) {
    const card = document.createElement("div");
    card.className = "note-card";
    card.dataset.noteId = note.note_id;

    const query = document.createElement("div");
    query.className = "note-query";
    query.textContent = note.envelope.query;
    card.appendChild(query);

    const tags = document.createElement("div");
    tags.className = "note-tags";
    for (const tag of note.tags) {
      const span = document.createElement("span");
      span.className = "tag";
      span.textContent = tag;
      tags.appendChild(span);
    }
    card.appendChild(tags);

    const form = document.createElement("form");
    form.className = "tag-form";
    const input = document.createElement("input");
    input.className = "tag-input";
    input.placeholder = "add tag";
    form.appendChild(input);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      if (input.value.trim()) {
        onAddTag(note.note_id, input.value.trim());
        input.value = "";
      }
    });
    card.appendChild(form);
    container.appendChild(card);
  }
}

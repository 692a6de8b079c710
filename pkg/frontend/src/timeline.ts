/** History timeline: one entry per move, rebuildable from the transcript
 * endpoint so a replay renders the same view as the live session did. */

import { renderGraph } from "./render.js";
import type { TranscriptPayload, TranscriptTurn } from "./types.js";

function renderTurn(doc: Document, turn: TranscriptTurn): HTMLElement {
  const entry = doc.createElement("li");
  entry.className = `timeline-entry ${turn.role}`;
  entry.dataset.role = turn.role;
  if (turn.payload.type === "presentation") {
    entry.dataset.kind = "presentation";
    const items = turn.payload.items ?? [];
    entry.dataset.itemCount = String(items.length);
    for (const item of items) {
      const cell = doc.createElement("div");
      cell.className = "timeline-item";
      cell.dataset.key = item.key;
      if (item.graph) {
        cell.appendChild(renderGraph(doc, item.graph));
      } else {
        cell.textContent = (item.sentences ?? []).join("; ");
      }
      entry.appendChild(cell);
    }
    if (items.length === 0) {
      entry.textContent = "(empty presentation)";
    }
  } else {
    entry.dataset.kind = "feedback";
    const feedback = turn.payload.feedback ?? [];
    entry.dataset.itemCount = String(feedback.length);
    for (const fb of feedback) {
      const chip = doc.createElement("span");
      chip.className = `feedback-chip ${fb.polarity}`;
      chip.dataset.propertyKey = fb.propertyKey;
      chip.dataset.polarity = fb.polarity;
      chip.textContent =
        typeof fb.representative.representative === "string"
          ? `${fb.polarity}: ${fb.representative.representative}`
          : `${fb.polarity}: graph class of order ${fb.representative.order}`;
      entry.appendChild(chip);
    }
    if (feedback.length === 0) {
      entry.textContent = "(empty feedback)";
    }
  }
  return entry;
}

export function renderTimeline(doc: Document, transcript: TranscriptPayload): HTMLElement {
  const list = doc.createElement("ol");
  list.className = "timeline";
  list.dataset.protocol = transcript.config.protocol;
  for (const turn of transcript.turns) {
    list.appendChild(renderTurn(doc, turn));
  }
  const footer = doc.createElement("li");
  footer.className = "timeline-footer";
  footer.dataset.status = transcript.terminal.status;
  footer.textContent = `${transcript.terminal.status} ${transcript.terminal.reason}`.trim();
  list.appendChild(footer);
  return list;
}

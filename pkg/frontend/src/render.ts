/** DOM rendering: hypergraph candidates, property menus, terminal banner.
 *
 * A candidate graph renders as literal chips plus one junction element per
 * hyperedge row (a labelled anchor node with a connector per endpoint, in
 * tuple order), so edges of any arity draw cleanly.  Properties render as
 * mini graphs or sentence text with three polarity buttons; pointed
 * properties stay visible but disabled, and the neutral button is omitted
 * when the protocol forbids it.
 */

import type {
  CandidatePayload,
  GraphPayload,
  Polarity,
  PresentationPayload,
  PropertyPayload,
  TerminalPayload,
} from "./types.js";

export interface RenderOptions {
  hideNeutral?: boolean;
  onSelectionChange?: (selections: Map<string, Polarity>) => void;
}

const POLARITIES: Polarity[] = ["pos", "neg", "neutral"];

export function renderGraph(doc: Document, graph: GraphPayload): HTMLElement {
  const root = doc.createElement("div");
  root.className = "graph";
  const chipRow = doc.createElement("div");
  chipRow.className = "vertices";
  for (const literal of graph.vertices) {
    const chip = doc.createElement("span");
    chip.className = "chip";
    chip.dataset.literal = literal;
    chip.textContent = literal;
    chipRow.appendChild(chip);
  }
  root.appendChild(chipRow);
  for (const [relation, rows] of Object.entries(graph.edges ?? {})) {
    for (const row of rows) {
      const junction = doc.createElement("div");
      junction.className = "junction";
      junction.dataset.relation = relation;
      junction.dataset.arity = String(row.length);
      const label = doc.createElement("span");
      label.className = "edge-label";
      label.textContent = relation;
      junction.appendChild(label);
      row.forEach((endpoint, position) => {
        const connector = doc.createElement("span");
        connector.className = "connector";
        connector.dataset.endpoint = endpoint;
        connector.dataset.position = String(position);
        connector.textContent = `${position + 1}:${endpoint}`;
        junction.appendChild(connector);
      });
      root.appendChild(junction);
    }
  }
  return root;
}

function renderPropertyBody(doc: Document, prop: PropertyPayload): HTMLElement {
  if (prop.kind === "graph-class") {
    const body = renderGraph(doc, prop.representative as GraphPayload);
    body.classList.add("mini");
    return body;
  }
  const body = doc.createElement("span");
  body.className = "sentence";
  body.textContent = prop.representative as string;
  return body;
}

export function renderCandidate(
  doc: Document,
  candidate: CandidatePayload,
  selections: Map<string, Polarity>,
  options: RenderOptions,
): HTMLElement {
  const card = doc.createElement("section");
  card.className = "candidate";
  card.dataset.key = candidate.key;
  if (candidate.graph) {
    card.appendChild(renderGraph(doc, candidate.graph));
  } else {
    const list = doc.createElement("ul");
    list.className = "sentences";
    for (const sentence of candidate.sentences ?? []) {
      const entry = doc.createElement("li");
      entry.textContent = sentence;
      list.appendChild(entry);
    }
    card.appendChild(list);
  }
  const menu = doc.createElement("ul");
  menu.className = "property-menu";
  for (const prop of candidate.properties) {
    const row = doc.createElement("li");
    row.className = "property";
    row.dataset.propertyKey = prop.key;
    if (prop.pointed) {
      row.dataset.pointed = "true";
    }
    row.appendChild(renderPropertyBody(doc, prop));
    for (const polarity of POLARITIES) {
      if (polarity === "neutral" && options.hideNeutral) {
        continue;
      }
      const button = doc.createElement("button");
      button.className = `polarity ${polarity}`;
      button.dataset.polarity = polarity;
      button.textContent = polarity;
      button.disabled = Boolean(prop.pointed);
      button.addEventListener("click", () => {
        if (selections.get(prop.key) === polarity) {
          selections.delete(prop.key);
          button.classList.remove("selected");
        } else {
          selections.set(prop.key, polarity);
          for (const sibling of row.querySelectorAll("button.polarity")) {
            sibling.classList.remove("selected");
          }
          button.classList.add("selected");
        }
        options.onSelectionChange?.(selections);
      });
      row.appendChild(button);
    }
    menu.appendChild(row);
  }
  card.appendChild(menu);
  return card;
}

export function renderTerminal(doc: Document, terminal: TerminalPayload): HTMLElement {
  const banner = doc.createElement("div");
  banner.className = "terminal-banner";
  banner.dataset.status = terminal.status;
  const headline = doc.createElement("strong");
  headline.textContent = `dialogue ${terminal.status}: ${terminal.reason}`;
  banner.appendChild(headline);
  if (terminal.convergence) {
    const verdict = doc.createElement("p");
    verdict.className = "convergence";
    verdict.dataset.converges = String(terminal.convergence.converges);
    verdict.textContent = terminal.convergence.converges
      ? "converged to the target's shared properties"
      : `did not converge (${terminal.convergence.condition ?? "see witness"})`;
    banner.appendChild(verdict);
  }
  return banner;
}

function schemaProblem(payload: PresentationPayload): string | null {
  if (typeof payload !== "object" || payload === null) return "payload is not an object";
  if (!Array.isArray(payload.candidates)) return "missing candidates list";
  for (const candidate of payload.candidates) {
    if (typeof candidate.key !== "string") return "candidate without key";
    if (!candidate.graph && !candidate.sentences) return "candidate without body";
    if (!Array.isArray(candidate.properties)) return "candidate without properties";
    for (const prop of candidate.properties) {
      if (typeof prop.key !== "string") return "property without key";
      if (prop.representative === undefined) return "property without representative";
    }
  }
  return null;
}

export function renderPresentation(
  doc: Document,
  payload: PresentationPayload,
  selections: Map<string, Polarity>,
  options: RenderOptions = {},
): HTMLElement {
  const root = doc.createElement("div");
  root.className = "presentation";
  const problem = schemaProblem(payload);
  if (problem) {
    // No partial render on schema mismatch.
    const panel = doc.createElement("div");
    panel.className = "error-panel";
    panel.textContent = `malformed presentation payload: ${problem}`;
    root.appendChild(panel);
    return root;
  }
  root.dataset.turn = String(payload.turn);
  if (payload.candidates.length === 0 || payload.terminal) {
    if (payload.terminal) {
      root.appendChild(renderTerminal(doc, payload.terminal));
    } else {
      const empty = doc.createElement("div");
      empty.className = "terminal-banner";
      empty.dataset.status = "empty";
      empty.textContent = "no candidates to present";
      root.appendChild(empty);
    }
  }
  for (const candidate of payload.candidates) {
    root.appendChild(renderCandidate(doc, candidate, selections, options));
  }
  return root;
}

/** A submission needs at least one selection whenever fresh properties
 * exist (the client mirrors, never replaces, the service-side check). */
export function submissionBlocked(
  payload: PresentationPayload,
  selections: Map<string, Polarity>,
): boolean {
  const freshExists = payload.candidates.some((candidate) =>
    candidate.properties.some((prop) => !prop.pointed),
  );
  return freshExists && selections.size === 0;
}

/** Page controller: one session per page, optimistic turn counter, the
 * service as the single source of protocol truth. */

import { ApiError, SessionApi } from "./api.js";
import {
  renderPresentation,
  renderTerminal,
  submissionBlocked,
} from "./render.js";
import { renderTimeline } from "./timeline.js";
import type {
  FeedbackSelection,
  Polarity,
  PresentationPayload,
  TerminalPayload,
} from "./types.js";

export class SessionController {
  private sessionId: string | null = null;
  private current: PresentationPayload | null = null;
  private selections = new Map<string, Polarity>();
  private inFlight = false;
  private hideNeutral = false;

  constructor(
    private readonly api: SessionApi,
    private readonly doc: Document,
    private readonly root: HTMLElement,
  ) {}

  async start(config: Record<string, unknown>): Promise<void> {
    const created = await this.api.createSession(config);
    this.sessionId = created.id;
    const protocol = String(config["protocol"] ?? "Basic");
    this.hideNeutral = protocol === "Simple" || protocol === "BasicX-SimpleF";
    this.show(created.presentation);
  }

  get selectionItems(): FeedbackSelection[] {
    return [...this.selections.entries()].map(([propertyKey, polarity]) => ({
      propertyKey,
      polarity,
    }));
  }

  show(presentation: PresentationPayload): void {
    this.current = presentation;
    this.selections = new Map();
    this.root.replaceChildren();
    const view = renderPresentation(this.doc, presentation, this.selections, {
      hideNeutral: this.hideNeutral,
      onSelectionChange: () => this.syncSubmitState(),
    });
    this.root.appendChild(view);
    if (!presentation.terminal) {
      const controls = this.doc.createElement("div");
      controls.className = "controls";
      const button = this.doc.createElement("button");
      button.className = "submit";
      button.textContent = "submit feedback";
      button.addEventListener("click", () => void this.submit());
      controls.appendChild(button);
      const note = this.doc.createElement("span");
      note.className = "inline-error";
      controls.appendChild(note);
      this.root.appendChild(controls);
      this.syncSubmitState();
    }
  }

  private syncSubmitState(): void {
    const button = this.root.querySelector<HTMLButtonElement>("button.submit");
    if (!button || !this.current) return;
    button.disabled =
      this.inFlight || submissionBlocked(this.current, this.selections);
  }

  async submit(): Promise<void> {
    if (!this.sessionId || !this.current || this.inFlight) return;
    if (submissionBlocked(this.current, this.selections)) return;
    this.inFlight = true;
    this.syncSubmitState();
    try {
      const result = await this.api.postFeedback(
        this.sessionId,
        this.current.turn,
        this.selectionItems,
      );
      if (result.terminal) {
        this.showTerminal(result.terminal);
      } else if (result.next) {
        this.show(result.next);
      }
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) {
        this.showRejection(error.violatedConditions);
      } else if (error instanceof ApiError && error.status === 409) {
        // Stale turn: refresh the authoritative presentation.
        this.show(await this.api.getPresentation(this.sessionId));
      } else {
        this.showNetworkProblem(error);
      }
    } finally {
      this.inFlight = false;
      this.syncSubmitState();
    }
  }

  private showTerminal(terminal: TerminalPayload): void {
    this.root.replaceChildren(renderTerminal(this.doc, terminal));
  }

  private showRejection(conditions: string[]): void {
    const note = this.root.querySelector<HTMLElement>(".inline-error");
    if (note) {
      note.textContent = conditions.length
        ? `rejected, violates: ${conditions.join(", ")}`
        : "rejected by the service";
      note.dataset.violations = conditions.join("|");
    }
  }

  private showNetworkProblem(error: unknown): void {
    const note = this.root.querySelector<HTMLElement>(".inline-error");
    if (note) {
      note.textContent = `network problem, retry is safe: ${String(error)}`;
      note.dataset.retriable = "true";
    }
  }

  async showTimeline(target: HTMLElement): Promise<void> {
    if (!this.sessionId) return;
    const transcript = await this.api.getTranscript(this.sessionId);
    target.replaceChildren(renderTimeline(this.doc, transcript));
  }
}

/** Entry point for the browser page. */
export function mount(doc: Document, baseUrl: string): void {
  const root = doc.querySelector<HTMLElement>("#session");
  const timeline = doc.querySelector<HTMLElement>("#timeline");
  const configBox = doc.querySelector<HTMLTextAreaElement>("#config");
  const startButton = doc.querySelector<HTMLButtonElement>("#start");
  if (!root || !configBox || !startButton || !timeline) return;
  const controller = new SessionController(new SessionApi(baseUrl), doc, root);
  startButton.addEventListener("click", () => {
    void controller
      .start(JSON.parse(configBox.value))
      .then(() => controller.showTimeline(timeline));
  });
}

/** Payload shapes of the session service JSON API. */

export type Polarity = "pos" | "neg" | "neutral";

export interface GraphPayload {
  vertices: string[];
  edges: Record<string, string[][]>;
}

export interface PropertyPayload {
  key: string;
  kind: "graph-class" | "sentence-class";
  order?: number;
  truthSet?: number[];
  representative: GraphPayload | string;
  pointed?: boolean;
}

export interface CandidatePayload {
  key: string;
  graph?: GraphPayload;
  sentences?: string[];
  properties: PropertyPayload[];
}

export interface ConvergencePayload {
  converges: boolean;
  condition: string | null;
  witness: PropertyPayload | null;
}

export interface TerminalPayload {
  status: string;
  reason: string;
  convergence?: ConvergencePayload;
}

export interface PresentationPayload {
  turn: number;
  candidates: CandidatePayload[];
  terminal?: TerminalPayload;
}

export interface CreatedSession {
  id: string;
  presentation: PresentationPayload;
}

export interface FeedbackSelection {
  propertyKey: string;
  polarity: Polarity;
}

export interface FeedbackResult {
  accepted: boolean;
  next?: PresentationPayload;
  terminal?: TerminalPayload;
}

export interface TranscriptTurn {
  role: "reasoner" | "user";
  payload: {
    type: "presentation" | "feedback";
    items?: Array<{ key: string; graph?: GraphPayload; sentences?: string[] }>;
    feedback?: Array<{
      propertyKey: string;
      polarity: Polarity;
      representative: PropertyPayload;
    }>;
  };
}

export interface TranscriptPayload {
  config: { protocol: string; propertyMode: string; [k: string]: unknown };
  turns: TranscriptTurn[];
  terminal: { status: string; reason: string };
}

export interface SessionSummary {
  id: string;
  turn: number;
  expects: "presentation" | "feedback";
  protocol: string;
  propertyMode: string;
  terminal: TerminalPayload | null;
}

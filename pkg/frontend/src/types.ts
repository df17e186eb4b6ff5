/** Shared shapes for the capture form and its API calls. */

export interface Scale {
  min: number;
  max: number;
  step: number;
}

export interface SurveyDefinition {
  words: string[];
  scale: Scale;
}

/** One answered word, in scale units. */
export interface ResponseEntry {
  word: string;
  left: number;
  right: number;
}

export interface SubmissionPayload {
  participant_id: string;
  group: string;
  responses: ResponseEntry[];
}

export interface SubmitResult {
  accepted: boolean;
  stored: boolean;
  participant_id: string;
  responses: number;
}

/** A selected interval on a scale, or null while unanswered/skipped. */
export type Selection = { left: number; right: number } | null;

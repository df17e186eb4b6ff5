/** Thin fetch wrappers around the capture service endpoints. */

import type { SubmissionPayload, SubmitResult, SurveyDefinition } from "./types.js";

/** Error carrying the service's structured error kind, when one was sent. */
export class ApiError extends Error {
  constructor(
    message: string,
    public readonly kind: string = "error",
    public readonly status: number = 0,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function errorFrom(response: Response): Promise<ApiError> {
  try {
    const body = (await response.json()) as { error?: { kind?: string; message?: string } };
    if (body.error?.message) {
      return new ApiError(body.error.message, body.error.kind ?? "error", response.status);
    }
  } catch {
    // fall through to the generic message
  }
  return new ApiError(`request failed with status ${response.status}`, "error", response.status);
}

export async function fetchSurvey(): Promise<SurveyDefinition> {
  const response = await fetch("/api/survey");
  if (!response.ok) {
    throw await errorFrom(response);
  }
  return (await response.json()) as SurveyDefinition;
}

export async function submitResponses(payload: SubmissionPayload): Promise<SubmitResult> {
  const response = await fetch("/api/submit", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  });
  if (!response.ok) {
    throw await errorFrom(response);
  }
  return (await response.json()) as SubmitResult;
}

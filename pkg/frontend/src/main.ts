/** Form bootstrap: fetch the survey, render a slider per word, submit. */

import { ApiError, fetchSurvey, submitResponses } from "./api.js";
import { buildSubmission, submissionProblem } from "./logic.js";
import { IntervalSlider } from "./widget.js";
import type { Selection } from "./types.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing #${id}`);
  }
  return el as T;
}

function setStatus(text: string, tone: "info" | "error" | "done"): void {
  const status = byId<HTMLElement>("status");
  status.textContent = text;
  status.dataset.tone = tone;
}

async function init(): Promise<void> {
  const form = byId<HTMLFormElement>("survey-form");
  const sliderHost = byId<HTMLElement>("sliders");
  const participantInput = byId<HTMLInputElement>("participant");
  const groupInput = byId<HTMLInputElement>("group");
  const submitButton = byId<HTMLButtonElement>("submit");

  let survey;
  try {
    survey = await fetchSurvey();
  } catch (err) {
    setStatus(`could not load the survey: ${(err as Error).message}`, "error");
    return;
  }

  const selections = new Map<string, Selection>();
  const sliders = survey.words.map((word) => {
    const slider = new IntervalSlider(word, survey.scale, (w, selection) => {
      selections.set(w, selection);
    });
    selections.set(word, null);
    sliderHost.appendChild(slider.element);
    return slider;
  });

  byId<HTMLElement>("scale-hint").textContent =
    `Mark, for each phrase, the range of the ${survey.scale.min}–${survey.scale.max} ` +
    "scale it covers for you. Drag across the bar; click “skip” to leave one out.";

  form.addEventListener("submit", async (ev) => {
    ev.preventDefault();
    const payload = buildSubmission(
      participantInput.value,
      groupInput.value,
      survey.words,
      selections,
    );
    const problem = submissionProblem(payload);
    if (problem) {
      setStatus(problem, "error");
      return;
    }

    submitButton.disabled = true;
    setStatus("submitting…", "info");
    try {
      const result = await submitResponses(payload);
      for (const slider of sliders) {
        slider.setEnabled(false);
      }
      participantInput.readOnly = true;
      groupInput.readOnly = true;
      setStatus(
        `thank you - recorded ${result.responses} response(s) for ` +
          `${result.participant_id}`,
        "done",
      );
    } catch (err) {
      submitButton.disabled = false;
      if (err instanceof ApiError && err.kind === "duplicate_response") {
        setStatus(
          "this participant id already submitted a different response set; " +
            "use a new id or contact the study organiser",
          "error",
        );
      } else {
        setStatus(`submission failed: ${(err as Error).message}`, "error");
      }
    }
  });
}

init();

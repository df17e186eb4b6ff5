/** Form bootstrap: fetch the survey, render a slider per word, submit. */
import { ApiError, fetchSurvey, submitResponses } from "./api.js";
import { buildSubmission, submissionProblem } from "./logic.js";
import { IntervalSlider } from "./widget.js";
function byId(id) {
    const el = document.getElementById(id);
    if (!el) {
        throw new Error(`missing #${id}`);
    }
    return el;
}
function setStatus(text, tone) {
    const status = byId("status");
    status.textContent = text;
    status.dataset.tone = tone;
}
async function init() {
    const form = byId("survey-form");
    const sliderHost = byId("sliders");
    const participantInput = byId("participant");
    const groupInput = byId("group");
    const submitButton = byId("submit");
    let survey;
    try {
        survey = await fetchSurvey();
    }
    catch (err) {
        setStatus(`could not load the survey: ${err.message}`, "error");
        return;
    }
    const selections = new Map();
    const sliders = survey.words.map((word) => {
        const slider = new IntervalSlider(word, survey.scale, (w, selection) => {
            selections.set(w, selection);
        });
        selections.set(word, null);
        sliderHost.appendChild(slider.element);
        return slider;
    });
    byId("scale-hint").textContent =
        `Mark, for each phrase, the range of the ${survey.scale.min}–${survey.scale.max} ` +
            "scale it covers for you. Drag across the bar; click “skip” to leave one out.";
    form.addEventListener("submit", async (ev) => {
        ev.preventDefault();
        const payload = buildSubmission(participantInput.value, groupInput.value, survey.words, selections);
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
            setStatus(`thank you - recorded ${result.responses} response(s) for ` +
                `${result.participant_id}`, "done");
        }
        catch (err) {
            submitButton.disabled = false;
            if (err instanceof ApiError && err.kind === "duplicate_response") {
                setStatus("this participant id already submitted a different response set; " +
                    "use a new id or contact the study organiser", "error");
            }
            else {
                setStatus(`submission failed: ${err.message}`, "error");
            }
        }
    });
}
init();

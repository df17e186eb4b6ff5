/** Pure selection logic: everything the widget does that isn't DOM.
 *
 * Selections are quantized to tenths of a scale unit. That is the display
 * resolution of the readout, not the analysis grid; the stored endpoints are
 * exactly the quantized values shown to the respondent.
 */
/** Resolution of drag selections in scale units. */
export const UI_STEP = 0.1;
export function clamp(value, lo, hi) {
    return Math.min(hi, Math.max(lo, value));
}
/** Decimal places needed to print multiples of `step` exactly. */
export function decimalsOf(step) {
    const text = step.toString();
    const dot = text.indexOf(".");
    return dot === -1 ? 0 : text.length - dot - 1;
}
/** Snap a raw scale value onto the UI resolution, inside the scale. */
export function quantize(value, scale) {
    const snapped = Math.round((value - scale.min) / UI_STEP) * UI_STEP + scale.min;
    const places = Math.max(decimalsOf(UI_STEP), decimalsOf(scale.min));
    return clamp(Number(snapped.toFixed(places)), scale.min, scale.max);
}
/** Affine pixel-to-scale mapping over the track's client geometry. */
export function pixelToValue(clientX, trackLeft, trackWidth, scale) {
    if (trackWidth <= 0) {
        return scale.min;
    }
    const fraction = clamp((clientX - trackLeft) / trackWidth, 0, 1);
    return quantize(scale.min + fraction * (scale.max - scale.min), scale);
}
/** Fraction of the track width at which a value sits, for rendering. */
export function valueToFraction(value, scale) {
    return clamp((value - scale.min) / (scale.max - scale.min), 0, 1);
}
/**
 * Normalize the two drag endpoints into an ordered selection, so dragging
 * right-to-left means the same thing as left-to-right.
 */
export function selectionFromDrag(anchor, current, scale) {
    const a = quantize(anchor, scale);
    const b = quantize(current, scale);
    return a <= b ? { left: a, right: b } : { left: b, right: a };
}
export function formatValue(value) {
    return value.toFixed(1);
}
/** Readout text, e.g. "3.0 – 5.0"; a point selection reads "4.0". */
export function formatReadout(selection) {
    if (selection === null) {
        return "no selection";
    }
    if (selection.left === selection.right) {
        return formatValue(selection.left);
    }
    return `${formatValue(selection.left)} – ${formatValue(selection.right)}`;
}
/** Selections in word order become the submit payload; skipped words drop out. */
export function buildSubmission(participantId, group, words, selections) {
    const responses = [];
    for (const word of words) {
        const selection = selections.get(word);
        if (selection) {
            responses.push({ word, left: selection.left, right: selection.right });
        }
    }
    return {
        participant_id: participantId.trim(),
        group: group.trim(),
        responses,
    };
}
/** Client-side gate before POSTing; mirrors the server's cheapest checks. */
export function submissionProblem(payload) {
    if (payload.participant_id === "") {
        return "enter a participant id";
    }
    if (payload.group === "") {
        return "enter a group";
    }
    if (payload.responses.length === 0) {
        return "mark at least one word before submitting";
    }
    return null;
}

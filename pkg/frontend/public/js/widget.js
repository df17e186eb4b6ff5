/** Drag-to-select interval widget: one scale track per descriptor word.
 *
 * Press anywhere on the track and drag to sweep out an interval; the
 * position expresses where the word sits on the scale and the width how
 * much ground it covers. Dragging in either direction works. A plain click
 * leaves a point selection. "skip" clears the answer.
 */
import { formatReadout, pixelToValue, selectionFromDrag, valueToFraction, } from "./logic.js";
export class IntervalSlider {
    constructor(word, scale, onChange) {
        this.word = word;
        this.scale = scale;
        this.onChange = onChange;
        this.selection = null;
        this.anchor = null;
        this.enabled = true;
        this.element = document.createElement("div");
        this.element.className = "slider";
        const head = document.createElement("div");
        head.className = "slider-head";
        const label = document.createElement("span");
        label.className = "slider-word";
        label.textContent = word;
        this.readout = document.createElement("span");
        this.readout.className = "slider-readout";
        this.skipButton = document.createElement("button");
        this.skipButton.type = "button";
        this.skipButton.className = "slider-skip";
        this.skipButton.textContent = "skip";
        this.skipButton.addEventListener("click", () => this.clear());
        head.append(label, this.readout, this.skipButton);
        this.track = document.createElement("div");
        this.track.className = "slider-track";
        this.band = document.createElement("div");
        this.band.className = "slider-band";
        this.track.appendChild(this.band);
        const ends = document.createElement("div");
        ends.className = "slider-ends";
        const lo = document.createElement("span");
        lo.textContent = String(scale.min);
        const hi = document.createElement("span");
        hi.textContent = String(scale.max);
        ends.append(lo, hi);
        this.element.append(head, this.track, ends);
        this.track.addEventListener("pointerdown", (ev) => this.onPointerDown(ev));
        this.track.addEventListener("pointermove", (ev) => this.onPointerMove(ev));
        this.track.addEventListener("pointerup", (ev) => this.onPointerUp(ev));
        this.track.addEventListener("pointercancel", () => {
            this.anchor = null;
        });
        this.render();
    }
    getSelection() {
        return this.selection;
    }
    clear() {
        if (!this.enabled) {
            return;
        }
        this.selection = null;
        this.render();
        this.onChange?.(this.word, null);
    }
    setEnabled(enabled) {
        this.enabled = enabled;
        this.skipButton.disabled = !enabled;
        this.element.classList.toggle("slider-disabled", !enabled);
    }
    valueAt(ev) {
        const rect = this.track.getBoundingClientRect();
        return pixelToValue(ev.clientX, rect.left, rect.width, this.scale);
    }
    onPointerDown(ev) {
        if (!this.enabled) {
            return;
        }
        ev.preventDefault();
        this.track.setPointerCapture(ev.pointerId);
        this.anchor = this.valueAt(ev);
        this.selection = selectionFromDrag(this.anchor, this.anchor, this.scale);
        this.render();
    }
    onPointerMove(ev) {
        if (this.anchor === null || !this.enabled) {
            return;
        }
        this.selection = selectionFromDrag(this.anchor, this.valueAt(ev), this.scale);
        this.render();
    }
    onPointerUp(ev) {
        if (this.anchor === null) {
            return;
        }
        this.selection = selectionFromDrag(this.anchor, this.valueAt(ev), this.scale);
        this.anchor = null;
        this.render();
        this.onChange?.(this.word, this.selection);
    }
    render() {
        this.readout.textContent = formatReadout(this.selection);
        if (this.selection === null) {
            this.band.style.display = "none";
            return;
        }
        const left = valueToFraction(this.selection.left, this.scale);
        const right = valueToFraction(this.selection.right, this.scale);
        this.band.style.display = "block";
        this.band.style.left = `${(left * 100).toFixed(2)}%`;
        // A point selection still gets a visible sliver.
        this.band.style.width = `${Math.max((right - left) * 100, 0.75).toFixed(2)}%`;
    }
}

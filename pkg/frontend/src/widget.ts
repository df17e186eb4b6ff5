/** Drag-to-select interval widget: one scale track per descriptor word.
 *
 * Press anywhere on the track and drag to sweep out an interval; the
 * position expresses where the word sits on the scale and the width how
 * much ground it covers. Dragging in either direction works. A plain click
 * leaves a point selection. "skip" clears the answer.
 */

import {
  formatReadout,
  pixelToValue,
  selectionFromDrag,
  valueToFraction,
} from "./logic.js";
import type { Scale, Selection } from "./types.js";

export class IntervalSlider {
  readonly element: HTMLElement;

  private readonly track: HTMLElement;
  private readonly band: HTMLElement;
  private readonly readout: HTMLElement;
  private readonly skipButton: HTMLButtonElement;
  private selection: Selection = null;
  private anchor: number | null = null;
  private enabled = true;

  constructor(
    readonly word: string,
    private readonly scale: Scale,
    private readonly onChange?: (word: string, selection: Selection) => void,
  ) {
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

  getSelection(): Selection {
    return this.selection;
  }

  clear(): void {
    if (!this.enabled) {
      return;
    }
    this.selection = null;
    this.render();
    this.onChange?.(this.word, null);
  }

  setEnabled(enabled: boolean): void {
    this.enabled = enabled;
    this.skipButton.disabled = !enabled;
    this.element.classList.toggle("slider-disabled", !enabled);
  }

  private valueAt(ev: PointerEvent): number {
    const rect = this.track.getBoundingClientRect();
    return pixelToValue(ev.clientX, rect.left, rect.width, this.scale);
  }

  private onPointerDown(ev: PointerEvent): void {
    if (!this.enabled) {
      return;
    }
    ev.preventDefault();
    this.track.setPointerCapture(ev.pointerId);
    this.anchor = this.valueAt(ev);
    this.selection = selectionFromDrag(this.anchor, this.anchor, this.scale);
    this.render();
  }

  private onPointerMove(ev: PointerEvent): void {
    if (this.anchor === null || !this.enabled) {
      return;
    }
    this.selection = selectionFromDrag(this.anchor, this.valueAt(ev), this.scale);
    this.render();
  }

  private onPointerUp(ev: PointerEvent): void {
    if (this.anchor === null) {
      return;
    }
    this.selection = selectionFromDrag(this.anchor, this.valueAt(ev), this.scale);
    this.anchor = null;
    this.render();
    this.onChange?.(this.word, this.selection);
  }

  private render(): void {
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

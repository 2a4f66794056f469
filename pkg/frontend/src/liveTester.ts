/** Live tester: type a message, see the toxicity gauge and highlighted
 * spans the engine would report, debounced to one request per pause. */

import { ApiClient } from "./api.js";
import { debounce, type Debounced } from "./debounce.js";
import { renderHighlights } from "./highlights.js";

export const DEBOUNCE_MS = 300;

export class LiveTester {
  private readonly schedule: Debounced<[string]>;
  /** Monotone counter so a slow response never overwrites a newer one. */
  private requestSeq = 0;
  private renderedSeq = 0;

  constructor(
    private readonly input: HTMLTextAreaElement,
    private readonly gauge: HTMLElement,
    private readonly preview: HTMLElement,
    private readonly api: ApiClient,
    waitMs: number = DEBOUNCE_MS,
  ) {
    this.schedule = debounce((text: string) => void this.run(text), waitMs);
    this.input.addEventListener("input", () => this.schedule(this.input.value));
  }

  private async run(text: string): Promise<void> {
    const seq = ++this.requestSeq;
    if (!text) {
      this.renderedSeq = seq;
      this.gauge.textContent = "0 / 100";
      this.gauge.dataset.level = "0";
      this.preview.innerHTML = "";
      this.preview.classList.remove("stale");
      return;
    }
    try {
      const record = await this.api.score(text);
      if (seq < this.renderedSeq) return;
      this.renderedSeq = seq;
      this.gauge.textContent = `${record.toxicity} / 100` +
        (record.antisemitic ? " — flagged" : "") +
        (record.violent ? " — violent" : "");
      this.gauge.dataset.level = String(Math.ceil(record.toxicity / 25));
      this.preview.innerHTML = renderHighlights(text, record);
      this.preview.classList.remove("stale");
    } catch {
      // keep the last good preview, just mark it stale
      this.preview.classList.add("stale");
    }
  }
}

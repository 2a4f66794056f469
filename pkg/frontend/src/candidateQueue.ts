/** Review queue for machine-suggested provisional entries: assign a score
 * and labels to promote one into the curated lexicon, or dismiss it from
 * the local view. Promotion is just a first annotation via the same PUT
 * endpoint the table uses. */

import { LABEL_CODES } from "./labels.js";
import { DOT_POSITIONS, MAX_SCORE } from "./dots.js";
import { CurationStore } from "./store.js";
import type { EntryRecord } from "./types.js";

export class CandidateQueue {
  private dismissed = new Set<string>();

  constructor(
    private readonly root: HTMLElement,
    private readonly store: CurationStore,
  ) {
    store.subscribe((event) => {
      if (event.kind === "loaded" || event.kind === "saved") this.render();
    });
  }

  async refresh(): Promise<void> {
    await this.store.refreshCandidates();
  }

  private async promote(entry: EntryRecord, score: number, labels: string[]): Promise<void> {
    const ok = await this.store.submit(
      { entryId: entry.id, score, labels },
      { expectVersion: true },
    );
    if (ok) await this.refresh();
  }

  render(): void {
    this.root.replaceChildren();
    const queue = this.store.entries.filter(
      (e) => e.status === "PROVISIONAL" && !this.dismissed.has(e.id),
    );
    if (queue.length === 0) {
      const empty = document.createElement("p");
      empty.className = "empty-state";
      empty.textContent = "Queue is empty: no provisional candidates right now.";
      this.root.append(empty);
      return;
    }
    for (const entry of queue) {
      this.root.append(this.renderCard(entry));
    }
  }

  private renderCard(entry: EntryRecord): HTMLElement {
    const card = document.createElement("div");
    card.className = "candidate-card";
    card.dataset.entryId = entry.id;

    const title = document.createElement("h3");
    title.textContent = entry.pattern;
    card.append(title);

    const scoreRow = document.createElement("div");
    scoreRow.className = "dots";
    let chosen = 0;
    const dots: HTMLButtonElement[] = [];
    const paint = () => {
      dots.forEach((d, i) => (d.textContent = i < chosen ? "●" : "○"));
    };
    for (let i = 0; i < DOT_POSITIONS; i++) {
      const dot = document.createElement("button");
      dot.className = "dot";
      dot.addEventListener("click", () => {
        if (i + 1 <= MAX_SCORE) chosen = i + 1 === chosen ? i : i + 1;
        paint();
      });
      dots.push(dot);
      scoreRow.append(dot);
    }
    paint();
    card.append(scoreRow);

    const labelRow = document.createElement("div");
    labelRow.className = "label-row";
    const chosenLabels = new Set<string>();
    for (const code of LABEL_CODES) {
      const wrap = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.dataset.label = code;
      box.addEventListener("change", () => {
        if (box.checked) chosenLabels.add(code);
        else chosenLabels.delete(code);
      });
      wrap.append(box, document.createTextNode(code));
      labelRow.append(wrap);
    }
    card.append(labelRow);

    const actions = document.createElement("div");
    const promote = document.createElement("button");
    promote.textContent = "Promote";
    promote.className = "promote";
    promote.addEventListener("click", () =>
      void this.promote(entry, chosen, LABEL_CODES.filter((c) => chosenLabels.has(c))),
    );
    const dismiss = document.createElement("button");
    dismiss.textContent = "Dismiss";
    dismiss.className = "dismiss";
    dismiss.addEventListener("click", () => {
      this.dismissed.add(entry.id);
      this.render();
    });
    actions.append(promote, dismiss);
    card.append(actions);
    return card;
  }
}

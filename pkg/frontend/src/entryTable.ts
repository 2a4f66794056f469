/** The annotation table: one row per entry with the 5-dot score widget,
 * the 14 label checkboxes in canonical order, a status badge, and
 * per-annotator detail on expand. */

import { LABEL_CODES, toggleLabel } from "./labels.js";
import { renderDots, scoreAfterClick, DOT_POSITIONS } from "./dots.js";
import { CurationStore, type PendingEdit } from "./store.js";
import type { EntryRecord } from "./types.js";

export interface TableFilters {
  lang: string;
  status: string;
  q: string;
}

export class EntryTable {
  filters: TableFilters = { lang: "", status: "", q: "" };
  private expanded = new Set<string>();

  constructor(
    private readonly root: HTMLElement,
    private readonly store: CurationStore,
    private readonly banner: (message: string, retry?: () => void) => void,
  ) {
    store.subscribe((event) => {
      if (event.kind === "loaded" || event.kind === "saved") this.render();
      if (event.kind === "conflict") {
        this.banner(
          `Lexicon moved to version ${event.currentVersion} while you edited ` +
            `${event.edit.entryId}; reapply your change?`,
          () => void this.store.reapply(event.edit),
        );
      }
      if (event.kind === "network-error") {
        this.banner(
          `Could not save ${event.edit.entryId} (${event.message}); ` +
            "your edit is kept locally, retry when the service is back.",
          () => void this.store.reapply(event.edit),
        );
      }
    });
  }

  async refresh(): Promise<void> {
    await this.store.refresh({
      lang: this.filters.lang || undefined,
      status: this.filters.status || undefined,
      q: this.filters.q || undefined,
    });
  }

  private edit(entry: EntryRecord): PendingEdit {
    const pending = this.store.unsaved.get(entry.id);
    if (pending) return pending;
    return {
      entryId: entry.id,
      score: this.store.annotatorScore(entry),
      labels: [...entry.labels],
    };
  }

  private onDotClick(entry: EntryRecord, index: number): void {
    const edit = this.edit(entry);
    const score = scoreAfterClick(edit.score, index);
    void this.store.submit({ ...edit, score });
  }

  private onLabelToggle(entry: EntryRecord, code: (typeof LABEL_CODES)[number], on: boolean): void {
    const edit = this.edit(entry);
    void this.store.submit({ ...edit, labels: toggleLabel(edit.labels, code, on) });
  }

  render(): void {
    const rows = this.store.entries;
    this.root.replaceChildren();
    if (rows.length === 0) {
      const empty = document.createElement("p");
      empty.className = "empty-state";
      empty.textContent = "No entries match the current filter.";
      this.root.append(empty);
      return;
    }
    const table = document.createElement("table");
    table.className = "entry-table";
    const head = document.createElement("tr");
    for (const title of ["WORD", "TRANSLATION", "LANG", "SCORE", ...LABEL_CODES, "STATUS"]) {
      const th = document.createElement("th");
      th.textContent = title;
      head.append(th);
    }
    table.append(head);
    for (const entry of rows) {
      table.append(this.renderRow(entry));
      if (this.expanded.has(entry.id)) table.append(this.renderDetail(entry));
    }
    this.root.append(table);
  }

  private renderRow(entry: EntryRecord): HTMLTableRowElement {
    const tr = document.createElement("tr");
    tr.dataset.entryId = entry.id;

    const word = document.createElement("td");
    word.className = "word";
    word.textContent = entry.pattern;
    word.title = entry.id;
    word.addEventListener("click", () => {
      if (this.expanded.has(entry.id)) this.expanded.delete(entry.id);
      else this.expanded.add(entry.id);
      this.render();
    });
    tr.append(word);

    const translation = document.createElement("td");
    translation.textContent = entry.translation ?? "";
    tr.append(translation);

    const lang = document.createElement("td");
    lang.textContent = entry.language;
    tr.append(lang);

    const score = document.createElement("td");
    score.className = "dots";
    const shown = typeof entry.consensus === "number" ? entry.consensus : 0;
    for (let i = 0; i < DOT_POSITIONS; i++) {
      const dot = document.createElement("button");
      dot.className = "dot";
      dot.textContent = renderDots(shown)[i];
      dot.addEventListener("click", () => this.onDotClick(entry, i));
      score.append(dot);
    }
    tr.append(score);

    for (const code of LABEL_CODES) {
      const cell = document.createElement("td");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.checked = entry.labels.includes(code);
      box.dataset.label = code;
      box.addEventListener("change", () => this.onLabelToggle(entry, code, box.checked));
      cell.append(box);
      tr.append(cell);
    }

    const status = document.createElement("td");
    const badge = document.createElement("span");
    badge.className = `badge badge-${entry.status.toLowerCase()}`;
    badge.textContent = entry.status;
    status.append(badge);
    tr.append(status);
    return tr;
  }

  private renderDetail(entry: EntryRecord): HTMLTableRowElement {
    const tr = document.createElement("tr");
    tr.className = "detail";
    const td = document.createElement("td");
    td.colSpan = 4 + LABEL_CODES.length + 1;
    if (entry.annotations.length === 0) {
      td.textContent = "No annotations yet.";
    } else {
      for (const a of entry.annotations) {
        const line = document.createElement("div");
        line.textContent =
          `${a.annotator}: ${renderDots(a.score)}` +
          (a.labels.length ? ` [${a.labels.join(", ")}]` : "") +
          (a.timestamp ? ` at ${a.timestamp}` : "");
        td.append(line);
      }
    }
    tr.append(td);
    return tr;
  }
}

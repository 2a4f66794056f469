import { ApiClient } from "./api.js";
import { CurationStore } from "./store.js";
import { EntryTable } from "./entryTable.js";
import { CandidateQueue } from "./candidateQueue.js";
import { LiveTester } from "./liveTester.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function showBanner(message: string, retry?: () => void): void {
  const banner = el<HTMLDivElement>("banner");
  banner.replaceChildren();
  banner.classList.add("visible");
  const text = document.createElement("span");
  text.textContent = message;
  banner.append(text);
  if (retry) {
    const button = document.createElement("button");
    button.textContent = "Reapply";
    button.addEventListener("click", () => {
      banner.classList.remove("visible");
      retry();
    });
    banner.append(button);
  }
  const close = document.createElement("button");
  close.textContent = "×";
  close.addEventListener("click", () => banner.classList.remove("visible"));
  banner.append(close);
}

function main(): void {
  const api = new ApiClient("");
  const store = new CurationStore(api, localStorage.getItem("annotator") ?? "A");
  const queueStore = new CurationStore(api, store.annotator);

  const annotatorInput = el<HTMLInputElement>("annotator");
  annotatorInput.value = store.annotator;
  annotatorInput.addEventListener("change", () => {
    store.annotator = annotatorInput.value || "A";
    queueStore.annotator = store.annotator;
    localStorage.setItem("annotator", store.annotator);
  });

  const table = new EntryTable(el("entries"), store, showBanner);
  const queue = new CandidateQueue(el("candidates"), queueStore);
  new LiveTester(
    el<HTMLTextAreaElement>("tester-input"),
    el("tester-gauge"),
    el("tester-preview"),
    api,
  );

  const filterLang = el<HTMLSelectElement>("filter-lang");
  const filterStatus = el<HTMLSelectElement>("filter-status");
  const filterQ = el<HTMLInputElement>("filter-q");
  const applyFilters = () => {
    table.filters = {
      lang: filterLang.value,
      status: filterStatus.value,
      q: filterQ.value.trim(),
    };
    void table.refresh();
  };
  filterLang.addEventListener("change", applyFilters);
  filterStatus.addEventListener("change", applyFilters);
  filterQ.addEventListener("input", applyFilters);

  for (const button of document.querySelectorAll<HTMLButtonElement>("[data-tab]")) {
    button.addEventListener("click", () => {
      for (const section of document.querySelectorAll<HTMLElement>(".tab-panel")) {
        section.hidden = section.id !== button.dataset.tab;
      }
      for (const other of document.querySelectorAll(".tab-bar button")) {
        other.classList.toggle("active", other === button);
      }
      if (button.dataset.tab === "panel-candidates") void queue.refresh();
      if (button.dataset.tab === "panel-entries") void table.refresh();
    });
  }

  void api
    .health()
    .then((health) => {
      el("health").textContent =
        `lexicon v${health.version} · ${health.entries} entries ` +
        `(${health.compiled_entries} compiled)`;
    })
    .catch(() => {
      el("health").textContent = "service unreachable";
    });
  void table.refresh().catch((error) => showBanner(`Could not load lexicon: ${error}`));
}

main();

/** Client-side lexicon state: a cache of the server's entries plus the
 * optimistic-edit machinery.
 *
 * The store never invents lexicon state: every mutation is a PUT, every
 * render is reproducible from a refetch, and a full page reload converges
 * on exactly the server state. Optimistic edits exist only between a
 * checkbox click and the server's 200/409/error answer.
 */

import { ApiClient, ConflictError, type LexiconFilters } from "./api.js";
import type { EntryRecord } from "./types.js";

export interface PendingEdit {
  entryId: string;
  score: number;
  labels: string[];
}

export type StoreEvent =
  | { kind: "loaded" }
  | { kind: "saved"; entryId: string }
  | { kind: "conflict"; edit: PendingEdit; currentVersion: number }
  | { kind: "network-error"; edit: PendingEdit; message: string };

export class CurationStore {
  version = 0;
  entries: EntryRecord[] = [];
  /** Edits not yet confirmed by the server, keyed by entry id; retained
   * across failures so nothing typed is ever silently lost. */
  readonly unsaved = new Map<string, PendingEdit>();

  private listeners: Array<(event: StoreEvent) => void> = [];

  constructor(
    private readonly api: ApiClient,
    public annotator: string = "A",
  ) {}

  subscribe(listener: (event: StoreEvent) => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(event: StoreEvent): void {
    for (const listener of this.listeners) listener(event);
  }

  entry(entryId: string): EntryRecord | undefined {
    return this.entries.find((e) => e.id === entryId);
  }

  async refresh(filters: LexiconFilters = {}): Promise<void> {
    const body = await this.api.lexicon(filters);
    this.version = body.version;
    this.entries = body.entries;
    this.emit({ kind: "loaded" });
  }

  async refreshCandidates(): Promise<void> {
    const body = await this.api.candidates();
    this.version = body.version;
    this.entries = body.entries;
    this.emit({ kind: "loaded" });
  }

  /** The score this annotator would submit for an entry right now: their
   * own prior score if any, else the integer consensus, else 0. */
  annotatorScore(entry: EntryRecord): number {
    const own = entry.annotations.find((a) => a.annotator === this.annotator);
    if (own) return own.score;
    return typeof entry.consensus === "number" ? entry.consensus : 0;
  }

  /** Submit an annotation optimistically. Updates the local entry on 200;
   * on 409 refetches and re-emits the edit for the caller to confirm; on
   * network failure keeps the edit in `unsaved`. */
  async submit(edit: PendingEdit, opts: { expectVersion?: boolean } = {}): Promise<boolean> {
    this.unsaved.set(edit.entryId, edit);
    const expectVersion = opts.expectVersion ?? true;
    try {
      const response = await this.api.putAnnotation(edit.entryId, {
        annotator: this.annotator,
        score: edit.score,
        labels: edit.labels,
        ...(expectVersion ? { version: this.version } : {}),
      });
      this.version = response.version;
      const index = this.entries.findIndex((e) => e.id === edit.entryId);
      if (index >= 0) this.entries[index] = response.entry;
      this.unsaved.delete(edit.entryId);
      this.emit({ kind: "saved", entryId: edit.entryId });
      return true;
    } catch (error) {
      if (error instanceof ConflictError) {
        await this.refresh().catch(() => undefined);
        this.emit({ kind: "conflict", edit, currentVersion: this.version });
        return false;
      }
      const message = error instanceof Error ? error.message : String(error);
      this.emit({ kind: "network-error", edit, message });
      return false;
    }
  }

  /** Retry a conflicted edit against the freshly fetched version. */
  reapply(edit: PendingEdit): Promise<boolean> {
    return this.submit(edit);
  }
}

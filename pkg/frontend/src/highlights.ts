/** Client-side rendering of score explanations onto raw text.
 *
 * Mirrors the server's display rule: overlapping or touching spans merge
 * into one region; a region shows the union of labels and the worst entry
 * score of everything inside it. */

import type { ExplanationRecord, ScoreRecord } from "./types.js";
import { canonicalOrder } from "./labels.js";

export interface HighlightRegion {
  start: number;
  end: number;
  entryIds: string[];
  maxScore: number;
  labels: string[];
}

export interface Segment {
  text: string;
  region: HighlightRegion | null;
}

export function mergedRegions(explanations: ExplanationRecord[]): HighlightRegion[] {
  const spans: Array<{ start: number; end: number; exp: ExplanationRecord }> = [];
  for (const exp of explanations) {
    for (const [start, end] of exp.spans) {
      spans.push({ start, end, exp });
    }
  }
  spans.sort((a, b) => a.start - b.start || a.end - b.end);
  const regions: HighlightRegion[] = [];
  for (const { start, end, exp } of spans) {
    const last = regions[regions.length - 1];
    if (last && start <= last.end) {
      last.end = Math.max(last.end, end);
      if (!last.entryIds.includes(exp.entry_id)) last.entryIds.push(exp.entry_id);
      last.maxScore = Math.max(last.maxScore, exp.score);
      last.labels = canonicalOrder([...last.labels, ...exp.labels]);
    } else {
      regions.push({
        start,
        end,
        entryIds: [exp.entry_id],
        maxScore: exp.score,
        labels: canonicalOrder(exp.labels),
      });
    }
  }
  return regions;
}

export function segment(raw: string, record: ScoreRecord): Segment[] {
  const regions = mergedRegions(record.explanations);
  const segments: Segment[] = [];
  let cursor = 0;
  for (const region of regions) {
    if (region.start < cursor || region.end > raw.length) {
      throw new RangeError(`span [${region.start},${region.end}) does not fit the text`);
    }
    if (region.start > cursor) {
      segments.push({ text: raw.slice(cursor, region.start), region: null });
    }
    segments.push({ text: raw.slice(region.start, region.end), region });
    cursor = region.end;
  }
  if (cursor < raw.length) {
    segments.push({ text: raw.slice(cursor), region: null });
  }
  return segments;
}

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

/** HTML fragment with <mark> per region; the title attribute doubles as a
 * native tooltip (entry ids, score, labels). */
export function renderHighlights(raw: string, record: ScoreRecord): string {
  return segment(raw, record)
    .map(({ text, region }) => {
      const escaped = escapeHtml(text);
      if (!region) return escaped;
      const tooltip = `${region.entryIds.join(", ")} | score ${region.maxScore}` +
        (region.labels.length ? ` | ${region.labels.join(",")}` : "");
      return (
        `<mark data-entries="${escapeHtml(region.entryIds.join(","))}"` +
        ` data-score="${region.maxScore}"` +
        ` data-labels="${escapeHtml(region.labels.join(","))}"` +
        ` title="${escapeHtml(tooltip)}">${escaped}</mark>`
      );
    })
    .join("");
}

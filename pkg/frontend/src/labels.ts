/** The 14 category codes, in the canonical column order used everywhere:
 * server TSV, API payloads, and every checkbox row in this UI. */
export const LABEL_CODES = [
  "HATE", "SHIT", "FUCK", "FOOL", "SCUM", "SLUT", "GOOK",
  "HELL", "HEIL", "PLOT", "KILL", "IFFY", "SLUR", "CONTEXT",
] as const;

export type LabelCode = (typeof LABEL_CODES)[number];

/** Sort a label list into canonical order, dropping unknowns. */
export function canonicalOrder(labels: string[]): LabelCode[] {
  const present = new Set(labels);
  return LABEL_CODES.filter((code) => present.has(code));
}

/** Toggle one code in a label list, keeping canonical order. */
export function toggleLabel(labels: string[], code: LabelCode, on: boolean): LabelCode[] {
  const set = new Set(labels);
  if (on) {
    set.add(code);
  } else {
    set.delete(code);
  }
  return canonicalOrder([...set]);
}

/** The 5-dot score widget: a score s in 0..4 renders as s filled dots out
 * of five positions, so score 0 is visibly "no dots filled" rather than
 * ambiguous. */

export const DOT_POSITIONS = 5;
export const MAX_SCORE = 4;

const FILLED = "●";
const EMPTY = "○";

export function renderDots(score: number): string {
  if (!Number.isInteger(score) || score < 0 || score > MAX_SCORE) {
    throw new RangeError(`score must be an integer 0..${MAX_SCORE}, got ${score}`);
  }
  return FILLED.repeat(score) + EMPTY.repeat(DOT_POSITIONS - score);
}

export function parseDots(dots: string): number {
  const score = [...dots].filter((d) => d === FILLED).length;
  if (dots.length !== DOT_POSITIONS || score > MAX_SCORE) {
    throw new RangeError(`not a valid dot widget: ${dots}`);
  }
  return score;
}

/** Score resulting from clicking dot position `index` (0-based): clicking
 * the last filled dot clears back down by one, so a score of 0 stays
 * reachable without a separate control. */
export function scoreAfterClick(current: number, index: number): number {
  const clicked = index + 1;
  if (clicked > MAX_SCORE) {
    return current; // fifth position is never a score
  }
  return clicked === current ? clicked - 1 : clicked;
}

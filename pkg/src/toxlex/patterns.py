"""Pattern mini-language for lexicon entries.

Grammar, applied to the WORD column of the lexicon:

* words separated by spaces form consecutive token slots
* ``/`` inside a word separates alternatives for that slot ("gas/kill")
* one bare ``+`` word splits the pattern into a proximity combination:
  the left token group must be followed by the right group within a
  bounded gap ("gas/kill + jews")
* an optional ``~N`` suffix overrides the gap window (1-10, default 3)

Every alternative is pushed through the same normalization pipeline as
message text. A single-alternative word that tokenizes into several
fragments ("ye'or", "bagel-eating") expands into that many consecutive
slots, which keeps matching closed under normalization; alternated words
must stay single tokens because alternation of multi-token sequences has
no slot representation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import PatternSyntaxError, PatternWindowError
from .textnorm import normalize_text

PHRASE = "PHRASE"
COMBO = "COMBO"

DEFAULT_WINDOW = 3
MIN_WINDOW = 1
MAX_WINDOW = 10

_WINDOW_SUFFIX_RE = re.compile(r"\s*~(\d+)\s*$")

Slot = frozenset


@dataclass(frozen=True)
class Pattern:
    """A parsed lexicon pattern.

    ``slots`` is populated for PHRASE patterns, ``left_slots`` /
    ``right_slots`` / ``window`` for COMBO patterns.
    """

    kind: str
    slots: tuple[frozenset[str], ...] = ()
    left_slots: tuple[frozenset[str], ...] = ()
    right_slots: tuple[frozenset[str], ...] = ()
    window: int = DEFAULT_WINDOW

    def groups(self) -> tuple[tuple[frozenset[str], ...], ...]:
        """The slot groups to match: one for PHRASE, two for COMBO."""
        if self.kind == PHRASE:
            return (self.slots,)
        return (self.left_slots, self.right_slots)

    def canonical(self) -> str:
        """Canonical text form; two patterns are duplicates iff equal here."""
        def fmt(slots: tuple[frozenset[str], ...]) -> str:
            return " ".join("/".join(sorted(slot)) for slot in slots)

        if self.kind == PHRASE:
            return fmt(self.slots)
        text = f"{fmt(self.left_slots)} + {fmt(self.right_slots)}"
        if self.window != DEFAULT_WINDOW:
            text += f" ~{self.window}"
        return text


def _parse_word(word: str) -> list[frozenset[str]]:
    """One whitespace-separated pattern word -> one or more slots."""
    alternatives = word.split("/")
    if any(alt == "" for alt in alternatives):
        raise PatternSyntaxError(f"empty alternative in slot {word!r}")
    expanded: list[tuple[str, ...]] = []
    for alt in alternatives:
        toks = tuple(t.normalized for t in normalize_text(alt).tokens)
        if not toks:
            raise PatternSyntaxError(
                f"alternative {alt!r} normalizes to nothing matchable"
            )
        expanded.append(toks)
    if len(expanded) == 1:
        return [frozenset({tok}) for tok in expanded[0]]
    slot = set()
    for toks in expanded:
        if len(toks) != 1:
            raise PatternSyntaxError(
                f"alternative {toks!r} spans several tokens; alternated words "
                "must normalize to a single token"
            )
        slot.add(toks[0])
    return [frozenset(slot)]


def parse_pattern(text: str) -> Pattern:
    """Parse pattern text into a :class:`Pattern`.

    Raises :class:`PatternSyntaxError` for grammar violations and
    :class:`PatternWindowError` when ``~N`` is outside 1-10.
    """
    if not text or not text.strip():
        raise PatternSyntaxError("empty pattern")
    window = None
    m = _WINDOW_SUFFIX_RE.search(text)
    if m:
        window = int(m.group(1))
        if not MIN_WINDOW <= window <= MAX_WINDOW:
            raise PatternWindowError(
                f"window {window} outside {MIN_WINDOW}-{MAX_WINDOW}"
            )
        text = text[: m.start()]
    words = text.split()
    plus_at = [i for i, w in enumerate(words) if w == "+"]
    if len(plus_at) > 1:
        raise PatternSyntaxError("at most one '+' allowed in a pattern")
    if not plus_at:
        if window is not None:
            raise PatternSyntaxError("'~N' window requires a '+' combination")
        slots: list[frozenset[str]] = []
        for w in words:
            slots.extend(_parse_word(w))
        if not slots:
            raise PatternSyntaxError("pattern has no slots")
        return Pattern(PHRASE, slots=tuple(slots))
    split = plus_at[0]
    left_words, right_words = words[:split], words[split + 1 :]
    if not left_words or not right_words:
        raise PatternSyntaxError("'+' needs a token group on both sides")
    left: list[frozenset[str]] = []
    right: list[frozenset[str]] = []
    for w in left_words:
        left.extend(_parse_word(w))
    for w in right_words:
        right.extend(_parse_word(w))
    return Pattern(
        COMBO,
        left_slots=tuple(left),
        right_slots=tuple(right),
        window=DEFAULT_WINDOW if window is None else window,
    )

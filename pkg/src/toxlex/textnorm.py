"""Obfuscation-resilient text normalization with exact raw-offset provenance.

Turns raw message text into a lowercase, diacritic-free token stream while
remembering, for every token, exactly which characters of the original
string produced it. Matching happens over normalized tokens; highlighting
renders the matches back onto the untouched raw text through that map.

The pipeline, in fixed order (see ``PIPELINE_STEPS``):

1. Unicode compatibility decomposition (NFKD), combining marks stripped
2. lowercase
3. leetspeak substitution for digits/symbols flanked by letters on BOTH
   sides ("k1ke" -> "kike", but "1488" and trailing "!!" stay untouched);
   the substitution table is ``LEET_MAP``
4. runs of 3+ identical letters collapse to exactly 2 ("killl" -> "kill",
   "soooo" -> "soo"; doubles like "jewish" survive)
5. runs of 3+ single-character fragments separated by one uniform
   non-whitespace separator join into one token ("k-i-k-e" -> "kike");
   the joined text is passed through steps 3-4 again so the pipeline is a
   fixed point of itself
6. split into tokens on whitespace/punctuation; punctuation is dropped,
   never emitted as a token

Emoji and other symbol characters (Unicode category So) pass through
steps 1-2 unchanged and form their own tokens. Lexicon patterns are fed
through the identical steps, so matching is closed under normalization.
``LEET_MAP`` and ``PIPELINE_STEPS`` are stable, documented constants that
other tools (e.g. a live preview in an annotation UI) can mirror.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

LEET_MAP = {
    "0": "o",
    "1": "i",
    "3": "e",
    "4": "a",
    "5": "s",
    "7": "t",
    "@": "a",
    "$": "s",
    "!": "i",
}

PIPELINE_STEPS = (
    "nfkd_strip_marks",
    "lowercase",
    "leet_substitution",
    "collapse_repeats",
    "join_separated_chars",
    "tokenize",
)

# Minimum number of single-character fragments before step 5 joins them.
# Two-piece joins would swallow legitimate text ("a-b" lists, initials).
JOIN_MIN_PIECES = 3

_ALNUM = 2
_SYMBOL = 1  # Unicode So: emoji, pictographs; they tokenize but never leet/collapse
_SEP = 0


@dataclass(frozen=True)
class Token:
    """One normalized token plus the half-open raw-text span it came from."""

    normalized: str
    start: int
    end: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class NormalizedText:
    """A raw string and its normalized token stream."""

    raw: str
    tokens: tuple[Token, ...]


# Per-character results of steps 1-2 are memoized: message corpora reuse a
# tiny alphabet, so this turns the decomposition into a dict lookup.
_fold_cache: dict[str, str] = {}
_class_cache: dict[str, int] = {}


def _char_class(ch: str) -> int:
    cls = _class_cache.get(ch)
    if cls is None:
        if ch.isalnum():
            cls = _ALNUM
        elif unicodedata.category(ch) == "So":
            cls = _SYMBOL
        else:
            cls = _SEP
        _class_cache[ch] = cls
    return cls


def _fold_char(ch: str) -> str:
    """Steps 1-2 for a single raw character.

    May return zero, one, or several characters (ligatures expand, combining
    marks vanish). When a single raw character decomposes into a mix of
    token content and separators (e.g. vulgar fractions), only the token
    content is kept so that token boundaries always fall between raw
    characters and spans never overlap.
    """
    cached = _fold_cache.get(ch)
    if cached is not None:
        return cached
    out: list[str] = []
    for dec in unicodedata.normalize("NFKD", ch):
        if unicodedata.combining(dec):
            continue
        # casefold, not lower: case-stable, so normalize(upper(s)) and
        # normalize(s) agree even where uppercasing changes length ("ß")
        for low in dec.casefold():
            if not unicodedata.combining(low):
                out.append(low)
    classes = {_char_class(c) for c in out}
    if _ALNUM in classes and len(classes) > 1:
        out = [c for c in out if _char_class(c) == _ALNUM]
    elif _SYMBOL in classes and _SEP in classes:
        out = [c for c in out if _char_class(c) == _SYMBOL]
    folded = "".join(out)
    _fold_cache[ch] = folded
    return folded


def _leet_substitute(chars: list[str]) -> None:
    """Step 3 in place. Adjacency is judged on the pre-substitution stream,
    so chains of leet characters ("a11a") never cascade and one application
    is a fixed point."""
    n = len(chars)
    if n < 3:
        return
    alpha = [c.isalpha() for c in chars]
    for i in range(1, n - 1):
        c = chars[i]
        if c in LEET_MAP and alpha[i - 1] and alpha[i + 1]:
            chars[i] = LEET_MAP[c]


def _collapse(chars: list[str], starts: list[int], ends: list[int]) -> tuple[list[str], list[int], list[int]]:
    """Step 4 with provenance. A dropped character's raw extent is absorbed
    into the surviving run, so a token's span always covers the characters
    that justified its normalized form ("O0O" stays [0,3), not [0,2))."""
    out_c: list[str] = []
    out_s: list[int] = []
    out_e: list[int] = []
    for i, c in enumerate(chars):
        if len(out_c) >= 2 and c == out_c[-1] and c == out_c[-2] and c.isalpha():
            out_e[-1] = max(out_e[-1], ends[i])
            continue
        out_c.append(c)
        out_s.append(starts[i])
        out_e.append(ends[i])
    return out_c, out_s, out_e


def _leet_collapse_plain(chars: list[str]) -> list[str]:
    """Steps 3-4 without provenance, for pattern words and refolds."""
    _leet_substitute(chars)
    out: list[str] = []
    for c in chars:
        if len(out) >= 2 and c == out[-1] and c == out[-2] and c.isalpha():
            continue
        out.append(c)
    return out


def _refold_word(word: str) -> str:
    """Re-run steps 3-4 on a joined fragment so step 5 output is stable."""
    return "".join(_leet_collapse_plain(list(word)))


@dataclass
class _Piece:
    text: str
    cls: int
    cstart: int  # indices into the folded char stream
    cend: int


def _split_pieces(chars: list[str]) -> list[_Piece]:
    pieces: list[_Piece] = []
    i = 0
    n = len(chars)
    while i < n:
        cls = _char_class(chars[i])
        if cls == _SEP:
            i += 1
            continue
        j = i + 1
        while j < n and _char_class(chars[j]) == cls:
            j += 1
        pieces.append(_Piece("".join(chars[i:j]), cls, i, j))
        i = j
    return pieces


def _join_pass(pieces: list[_Piece], chars: list[str]) -> list[_Piece]:
    """Step 5: merge runs of >= JOIN_MIN_PIECES single alnum chars split by
    one uniform non-whitespace separator."""
    out: list[_Piece] = []
    i = 0
    n = len(pieces)
    while i < n:
        p = pieces[i]
        if p.cls != _ALNUM or len(p.text) != 1:
            out.append(p)
            i += 1
            continue
        j = i
        sep = None
        while j + 1 < n:
            nxt = pieces[j + 1]
            if nxt.cls != _ALNUM or len(nxt.text) != 1:
                break
            gap_lo, gap_hi = pieces[j].cend, nxt.cstart
            if gap_hi - gap_lo != 1:
                break
            gap_ch = chars[gap_lo]
            if gap_ch.isspace():
                break
            if sep is None:
                sep = gap_ch
            elif gap_ch != sep:
                break
            j += 1
        if j - i + 1 >= JOIN_MIN_PIECES:
            joined = _refold_word("".join(pieces[k].text for k in range(i, j + 1)))
            out.append(_Piece(joined, _ALNUM, pieces[i].cstart, pieces[j].cend))
            i = j + 1
        else:
            out.append(p)
            i += 1
    return out


def _normalize_general(raw: str) -> NormalizedText:
    chars: list[str] = []
    starts: list[int] = []
    ends: list[int] = []
    for i, ch in enumerate(raw):
        folded = _fold_cache.get(ch)
        if folded is None:
            folded = _fold_char(ch)
        for c in folded:
            chars.append(c)
            starts.append(i)
            ends.append(i + 1)
    _leet_substitute(chars)
    chars, starts, ends = _collapse(chars, starts, ends)
    pieces = _join_pass(_split_pieces(chars), chars)
    tokens = tuple(
        Token(p.text, starts[p.cstart], ends[p.cend - 1]) for p in pieces
    )
    return NormalizedText(raw, tokens)


# Fast path for plain ASCII text. Steps 1-2 reduce to str.lower() (1:1 on
# code points), step 3 is a length-preserving regex substitution whose
# lookarounds read the pre-substitution string exactly like the general
# pass, and step 6 is a single finditer. Inputs that would need step 4 or
# step 5 (offset-changing) fall back to the general pass.
_ASCII_LEET_RE = re.compile(r"(?<=[a-z])[013457@$!](?=[a-z])")
_ASCII_TRIPLE_RE = re.compile(r"([a-z])\1\1")
_ASCII_TOKEN_RE = re.compile(r"[a-z0-9]+")
_ASCII_ANY_LEET_RE = re.compile(r"[013457@$!]")


def _ascii_has_join_run(lowered: str, spans: list[tuple[int, int]]) -> bool:
    """Conservative test for step 5 applying anywhere in an ASCII string.

    Any actual join implies three consecutive single-char tokens whose two
    gaps are the same single non-space character; testing for that triple
    may over-trigger (costing only a slower fallback), never under-trigger.
    """
    for k in range(len(spans) - 2):
        (s0, e0), (s1, e1), (s2, e2) = spans[k], spans[k + 1], spans[k + 2]
        if e0 - s0 == 1 and e1 - s1 == 1 and e2 - s2 == 1:
            g1, g2 = lowered[e0:s1], lowered[e1:s2]
            if g1 == g2 and len(g1) == 1 and not g1.isspace():
                return True
    return False


def normalize_text(raw: str) -> NormalizedText:
    """Normalize a raw message into tokens mapped back to raw offsets.

    Pure and deterministic. Empty or all-punctuation input yields an empty
    token list, never an error.
    """
    if not raw:
        return NormalizedText(raw, ())
    if raw.isascii():
        lowered = raw.lower()
        if _ASCII_ANY_LEET_RE.search(lowered):
            lowered = _ASCII_LEET_RE.sub(lambda m: LEET_MAP[m.group(0)], lowered)
        if not _ASCII_TRIPLE_RE.search(lowered):
            spans = [m.span() for m in _ASCII_TOKEN_RE.finditer(lowered)]
            if not _ascii_has_join_run(lowered, spans):
                return NormalizedText(
                    raw, tuple(Token(lowered[s:e], s, e) for s, e in spans)
                )
    return _normalize_general(raw)


def normalize_pattern_token(word: str) -> str:
    """Normalize one lexicon pattern word through pipeline steps 1-4.

    Separator characters are stripped from the result because text tokens
    can never contain them; a word with nothing left after that has no
    matchable content and raises :class:`NormalizationError`. Words that
    tokenize into several fragments ("ye'or") are the pattern parser's
    business, not this function's.
    """
    from .errors import NormalizationError

    chars: list[str] = []
    for ch in word:
        chars.extend(_fold_char(ch))
    chars = _leet_collapse_plain(chars)
    kept = "".join(c for c in chars if _char_class(c) != _SEP)
    if not kept:
        raise NormalizationError(f"pattern word {word!r} has no matchable content")
    return kept

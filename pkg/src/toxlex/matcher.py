"""Multi-pattern matching of compiled lexicon entries over token streams.

The compiler expands every entry's slot alternations into concrete token
sequences and inserts them into an Aho-Corasick automaton whose alphabet
is whole normalized tokens (not characters), so one pass over a message's
token list reports every occurrence of every phrase and every combination
slot-group. Combination entries are then resolved by pairing left-group
and right-group occurrences within the entry's token-gap window.

Disputed, provisional (un-annotated), and consensus-0 entries never enter
the automaton: score-0 entries are neutral reference material (counted by
corpus keyword reports, which compile their own keyword set), and low
agreement entries wait for curation. A compiled lexicon is immutable and
safe to share across any number of concurrent scoring workers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .errors import CompileError, PatternError
from .lexicon import DISPUTED, LabelSet, Lexicon
from .patterns import COMBO, PHRASE, Pattern, parse_pattern  # re-export: pattern grammar
from .privacy import PLACEHOLDER_TOKENS
from .textnorm import NormalizedText

__all__ = [
    "Pattern", "parse_pattern", "PHRASE", "COMBO",
    "Match", "EntryMeta", "CompiledLexicon", "TokenAutomaton",
    "compile_lexicon", "find_matches",
]

# Expansion guard: alternation products beyond this are almost certainly a
# curation mistake and would bloat the automaton.
MAX_SEQUENCES_PER_GROUP = 4096


@dataclass(frozen=True)
class Match:
    """One lexicon hit in one message.

    ``token_ranges`` holds one half-open token range for a phrase, two
    (left group, right group) for a combination; ``char_spans`` are the
    corresponding half-open character spans in the raw text.
    """

    entry_id: str
    token_ranges: tuple[tuple[int, int], ...]
    char_spans: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class EntryMeta:
    """Per-entry data the scorer needs, denormalized out of the lexicon."""

    entry_id: str
    score: int
    labels: LabelSet
    kind: str
    window: int


class _Node:
    __slots__ = ("children", "fail", "outputs")

    def __init__(self):
        self.children: dict[str, _Node] = {}
        self.fail: _Node | None = None
        self.outputs: list[tuple[object, int]] = []


class TokenAutomaton:
    """Aho-Corasick over token sequences.

    Symbols are token strings; each inserted sequence carries an opaque
    key. ``build()`` computes failure links (BFS) and folds each node's
    failure-chain outputs into the node, after which ``occurrences()``
    reports every (end_index, key, length) in a single left-to-right scan.
    """

    def __init__(self):
        self._root = _Node()
        self._built = False

    def add(self, sequence: Sequence[str], key: object) -> None:
        if self._built:
            raise RuntimeError("automaton already built")
        node = self._root
        for sym in sequence:
            node = node.children.setdefault(sym, _Node())
        node.outputs.append((key, len(sequence)))

    def build(self) -> None:
        root = self._root
        root.fail = root
        queue: deque[_Node] = deque()
        for child in root.children.values():
            child.fail = root
            queue.append(child)
        while queue:
            current = queue.popleft()
            for sym, child in current.children.items():
                fallback = current.fail
                while fallback is not root and sym not in fallback.children:
                    fallback = fallback.fail
                target = fallback.children.get(sym, root)
                child.fail = root if target is child else target
                child.outputs = child.outputs + child.fail.outputs
                queue.append(child)
        self._built = True

    def occurrences(self, tokens: Sequence[str]) -> list[tuple[int, object, int]]:
        """All matches as (end_index_exclusive, key, sequence_length)."""
        if not self._built:
            raise RuntimeError("build() must run before occurrences()")
        root = self._root
        node = root
        found: list[tuple[int, object, int]] = []
        for i, sym in enumerate(tokens):
            while node is not root and sym not in node.children:
                node = node.fail
            node = node.children.get(sym, root)
            if node.outputs:
                end = i + 1
                for key, length in node.outputs:
                    found.append((end, key, length))
        return found


class CompiledLexicon:
    """An immutable matching plan for one lexicon version."""

    def __init__(
        self,
        version: int,
        meta: dict[str, EntryMeta],
        automaton: TokenAutomaton,
        known_sequences: frozenset[tuple[str, ...]],
    ):
        self.version = version
        self.meta = meta
        self.automaton = automaton
        # Token sequences of ALL entries (any status), used by the
        # expansion module to avoid re-suggesting known patterns.
        self.known_sequences = known_sequences

    def __len__(self) -> int:
        return len(self.meta)


def _expand_group(slots: tuple[frozenset[str], ...], entry_id: str) -> list[tuple[str, ...]]:
    size = 1
    for slot in slots:
        size *= len(slot)
        if size > MAX_SEQUENCES_PER_GROUP:
            raise CompileError(
                f"alternation product exceeds {MAX_SEQUENCES_PER_GROUP} sequences",
                entry_id=entry_id,
            )
    return [tuple(seq) for seq in product(*(sorted(slot) for slot in slots))]


def compile_lexicon(lexicon: Lexicon) -> CompiledLexicon:
    """Compile a lexicon into an automaton plus entry metadata.

    Deterministic for a given lexicon version. Raises
    :class:`CompileError` (naming the entry) for patterns that normalize
    to nothing and for pattern tokens that collide with a redaction
    placeholder, which would let anonymization itself trigger matches.
    """
    automaton = TokenAutomaton()
    meta: dict[str, EntryMeta] = {}
    known: set[tuple[str, ...]] = set()
    for entry in sorted(lexicon, key=lambda e: e.id):
        try:
            pattern = entry.parsed
        except PatternError as exc:
            raise CompileError(str(exc), entry_id=entry.id) from exc
        groups = pattern.groups()
        sequences = [_expand_group(g, entry.id) for g in groups]
        for seqs in sequences:
            known.update(seqs)
            for seq in seqs:
                collision = set(seq) & PLACEHOLDER_TOKENS
                if collision:
                    raise CompileError(
                        f"pattern token {sorted(collision)[0]!r} collides with a "
                        "redaction placeholder",
                        entry_id=entry.id,
                    )
        consensus = entry.consensus
        if consensus is None or consensus is DISPUTED or consensus == 0:
            continue
        meta[entry.id] = EntryMeta(
            entry_id=entry.id,
            score=consensus,
            labels=entry.labels,
            kind=pattern.kind,
            window=pattern.window,
        )
        for group_index, seqs in enumerate(sequences):
            for seq in seqs:
                automaton.add(seq, (entry.id, group_index))
    automaton.build()
    return CompiledLexicon(lexicon.version, meta, automaton, frozenset(known))


def _char_spans(text: NormalizedText, ranges: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    toks = text.tokens
    return tuple((toks[a].start, toks[b - 1].end) for a, b in ranges)


def find_matches(compiled: CompiledLexicon, text: NormalizedText) -> list[Match]:
    """Every occurrence of every compiled entry in the token stream.

    Overlapping and repeated matches are all reported; phrase matches need
    consecutive tokens each drawn from its slot, combinations need a left
    occurrence followed by a right occurrence with a token gap of at most
    the entry's window. Results sort by first token index, then entry id,
    then range detail, so output order is total and reproducible.
    """
    tokens = [t.normalized for t in text.tokens]
    phrase_hits: list[tuple[str, tuple[int, int]]] = []
    combo_sides: dict[str, tuple[list[tuple[int, int]], list[tuple[int, int]]]] = {}
    for end, key, length in compiled.automaton.occurrences(tokens):
        entry_id, group_index = key  # type: ignore[misc]
        meta = compiled.meta[entry_id]
        rng = (end - length, end)
        if meta.kind == PHRASE:
            phrase_hits.append((entry_id, rng))
        else:
            sides = combo_sides.get(entry_id)
            if sides is None:
                sides = ([], [])
                combo_sides[entry_id] = sides
            sides[group_index].append(rng)

    matches: list[Match] = []
    for entry_id, rng in phrase_hits:
        matches.append(Match(entry_id, (rng,), _char_spans(text, (rng,))))
    for entry_id, (lefts, rights) in combo_sides.items():
        window = compiled.meta[entry_id].window
        for left in lefts:
            for right in rights:
                gap = right[0] - left[1]
                if 0 <= gap <= window:
                    ranges = (left, right)
                    matches.append(Match(entry_id, ranges, _char_spans(text, ranges)))
    matches.sort(key=lambda m: (m.token_ranges[0][0], m.entry_id, m.token_ranges))
    return matches

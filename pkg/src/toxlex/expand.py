"""Weak-supervision lexicon expansion.

Messages the engine already flags act as noisy positive labels; terms that
keep company with flags and avoid clean messages are surfaced, ranked, and
queued for human annotation. Nothing is ever auto-accepted: candidates
enter the lexicon as provisional entries that never compile into the
matcher until an annotator scores them.

The association statistic is a smoothed log odds ratio of document-level
presence:

    ln( (df_flagged + 1) / (N_flagged + 2)
      / ((df_clean  + 1) / (N_clean  + 2)) )

Add-one smoothing keeps rare terms finite; document presence (rather than
raw frequency) stops one spammy message from promoting its vocabulary.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from importlib import resources
from typing import Iterable

from .corpus import Message
from .lexicon import Lexicon, LexiconEntry
from .matcher import CompiledLexicon, find_matches
from .scorer import ScoreConfig, score_from_matches
from .textnorm import normalize_text


@dataclass(frozen=True)
class ExpandConfig:
    min_support: int = 5
    top_k: int = 50
    include_bigrams: bool = True


@dataclass(frozen=True)
class Candidate:
    term: str
    flagged_count: int
    clean_count: int
    association: float


def _load_stopwords() -> frozenset[str]:
    words: set[str] = set()
    for name in ("stopwords_en.txt", "stopwords_de.txt"):
        text = resources.files("toxlex.data").joinpath(name).read_text("utf-8")
        for line in text.splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(line)
    return frozenset(words)


_stopwords: frozenset[str] | None = None


def stopwords() -> frozenset[str]:
    global _stopwords
    if _stopwords is None:
        _stopwords = _load_stopwords()
    return _stopwords


def _message_terms(tokens: list[str], include_bigrams: bool) -> set[str]:
    stop = stopwords()
    terms = {t for t in tokens if t not in stop}
    if include_bigrams:
        for a, b in zip(tokens, tokens[1:]):
            if a not in stop and b not in stop:
                terms.add(f"{a} {b}")
    return terms


def suggest_candidates(
    messages: Iterable[Message],
    compiled: CompiledLexicon,
    config: ExpandConfig = ExpandConfig(),
    score_config: ScoreConfig = ScoreConfig(),
) -> list[Candidate]:
    """Rank unknown terms by association with the anti-Semitic flag.

    Deterministic and order-independent; ties break lexicographically.
    Returns an empty list when nothing is flagged (no signal to rank by).
    """
    flagged_docs = 0
    clean_docs = 0
    flagged_occ: dict[str, int] = {}
    clean_occ: dict[str, int] = {}
    flagged_df: dict[str, int] = {}
    clean_df: dict[str, int] = {}

    for message in messages:
        text = normalize_text(message.text)
        tokens = [t.normalized for t in text.tokens]
        matches = find_matches(compiled, text)
        score = score_from_matches(compiled.meta, message.text, matches, score_config)
        flagged = score.antisemitic
        if flagged:
            flagged_docs += 1
        else:
            clean_docs += 1
        occ = flagged_occ if flagged else clean_occ
        df = flagged_df if flagged else clean_df
        terms = _message_terms(tokens, config.include_bigrams)
        for term in terms:
            df[term] = df.get(term, 0) + 1
        counted: dict[str, int] = {}
        for t in tokens:
            counted[t] = counted.get(t, 0) + 1
        for a, b in zip(tokens, tokens[1:]):
            bigram = f"{a} {b}"
            counted[bigram] = counted.get(bigram, 0) + 1
        for term in terms:
            occ[term] = occ.get(term, 0) + counted.get(term, 0)

    if flagged_docs == 0:
        return []

    known = compiled.known_sequences
    candidates: list[Candidate] = []
    for term in set(flagged_df) | set(clean_df):
        if tuple(term.split(" ")) in known:
            continue
        f_occ = flagged_occ.get(term, 0)
        c_occ = clean_occ.get(term, 0)
        if f_occ + c_occ < config.min_support:
            continue
        assoc = math.log(
            ((flagged_df.get(term, 0) + 1) / (flagged_docs + 2))
            / ((clean_df.get(term, 0) + 1) / (clean_docs + 2))
        )
        candidates.append(Candidate(term, f_occ, c_occ, assoc))
    candidates.sort(key=lambda c: (-c.association, c.term))
    return candidates[: config.top_k]


@dataclass(frozen=True)
class EnqueueSummary:
    added: tuple[str, ...]
    skipped: tuple[str, ...]

    @property
    def changed(self) -> bool:
        return bool(self.added)


def candidate_entry_id(term: str, language: str = "en") -> str:
    digest = hashlib.sha256(f"{language}:{term}".encode("utf-8")).hexdigest()
    return f"cand-{digest[:10]}"


def enqueue_candidates(
    candidates: Iterable[Candidate],
    lexicon: Lexicon,
    language: str = "en",
) -> tuple[Lexicon, EnqueueSummary]:
    """Turn candidates into provisional (un-annotated) lexicon entries.

    Candidates whose pattern already exists are skipped and reported.
    Bumps the lexicon version once when anything was added; a no-op
    returns the lexicon unchanged.
    """
    existing = {e.dedup_key() for e in lexicon}
    entries = dict(lexicon.entries)
    added: list[str] = []
    skipped: list[str] = []
    for candidate in candidates:
        entry = LexiconEntry(
            id=candidate_entry_id(candidate.term, language),
            pattern=candidate.term,
            language=language,
        )
        key = entry.dedup_key()
        if key in existing or entry.id in entries:
            skipped.append(candidate.term)
            continue
        existing.add(key)
        entries[entry.id] = entry
        added.append(entry.id)
    if not added:
        return lexicon, EnqueueSummary((), tuple(skipped))
    return lexicon.with_entries(entries), EnqueueSummary(tuple(added), tuple(skipped))

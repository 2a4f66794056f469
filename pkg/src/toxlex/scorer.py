"""Message scoring: matches -> 0-100 toxicity, flags, and explanations.

The score is a capped sum over DISTINCT matched entries of
``consensus * points_per_level`` (defaults: 25 points per level, cap 100),
so one maximally toxic entry saturates the scale and repeating a single
slur cannot dominate corpus statistics. The anti-Semitic flag is a pure
threshold on the toxicity value; the violent flag requires a matched
KILL-labeled entry at or above the configured consensus level. Every match
occurrence becomes an explanation span, which is the whole point: the
output always shows exactly which text triggered it.
"""

from __future__ import annotations

import html as _html
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import HighlightIntegrityError
from .lexicon import LabelSet
from .matcher import CompiledLexicon, EntryMeta, Match, find_matches
from .textnorm import NormalizedText, normalize_text

PLAIN = "plain"
ANSI = "ansi"
HTML = "html"

VIOLENT_LABEL = "KILL"


@dataclass(frozen=True)
class ScoreConfig:
    points_per_level: int = 25
    antisemitic_threshold: int = 50
    violent_min_level: int = 2
    cap: int = 100

    def __post_init__(self):
        if not 0 < self.points_per_level <= 100:
            raise ValueError("points_per_level must be in 1-100")
        if not 0 <= self.antisemitic_threshold <= 100:
            raise ValueError("antisemitic_threshold must be in 0-100")
        if not 0 <= self.violent_min_level <= 4:
            raise ValueError("violent_min_level must be in 0-4")
        if self.cap <= 0:
            raise ValueError("cap must be positive")


@dataclass(frozen=True)
class Explanation:
    """Why one match contributed: the spans and the entry's judgement."""

    entry_id: str
    surfaces: tuple[str, ...]
    spans: tuple[tuple[int, int], ...]
    score: int
    labels: LabelSet

    def to_record(self) -> dict:
        return {
            "entry_id": self.entry_id,
            "spans": [list(span) for span in self.spans],
            "score": self.score,
            "labels": self.labels.to_list(),
        }


@dataclass(frozen=True)
class MessageScore:
    toxicity: int
    antisemitic: bool
    violent: bool
    explanations: tuple[Explanation, ...]

    def to_record(self, lexicon_version: int | None = None) -> dict:
        record = {
            "toxicity": self.toxicity,
            "antisemitic": self.antisemitic,
            "violent": self.violent,
            "explanations": [e.to_record() for e in self.explanations],
        }
        if lexicon_version is not None:
            record["lexicon_version"] = lexicon_version
        return record


def score_from_matches(
    meta: Mapping[str, EntryMeta],
    raw: str,
    matches: Iterable[Match],
    config: ScoreConfig,
) -> MessageScore:
    """Aggregate pre-computed matches; the seam shared by scoring paths.

    Order of ``matches`` never affects the result: the sum runs over the
    distinct entry set and explanations are re-sorted by first span.
    """
    explanations = []
    seen_entries: set[str] = set()
    total = 0
    violent = False
    for match in matches:
        entry = meta[match.entry_id]
        if match.entry_id not in seen_entries:
            seen_entries.add(match.entry_id)
            total += entry.score * config.points_per_level
        if VIOLENT_LABEL in entry.labels and entry.score >= config.violent_min_level:
            violent = True
        explanations.append(Explanation(
            entry_id=match.entry_id,
            surfaces=tuple(raw[s:e] for s, e in match.char_spans),
            spans=match.char_spans,
            score=entry.score,
            labels=entry.labels,
        ))
    explanations.sort(key=lambda e: (e.spans[0], e.entry_id, e.spans))
    toxicity = min(config.cap, total)
    return MessageScore(
        toxicity=toxicity,
        antisemitic=toxicity >= config.antisemitic_threshold,
        violent=violent,
        explanations=tuple(explanations),
    )


def score_message(
    compiled: CompiledLexicon,
    raw: str,
    config: ScoreConfig = ScoreConfig(),
    normalized: NormalizedText | None = None,
) -> MessageScore:
    """Normalize, match, and aggregate one message.

    ``normalized`` lets batch pipelines reuse an existing normalization of
    ``raw``; it must have been produced from the same string.
    """
    text = normalized if normalized is not None else normalize_text(raw)
    matches = find_matches(compiled, text)
    return score_from_matches(compiled.meta, raw, matches, config)


def _merged_regions(raw: str, score: MessageScore):
    """Overlapping/adjacent explanation spans merged for display."""
    spans = []
    for exp in score.explanations:
        for i, (start, end) in enumerate(exp.spans):
            if not (0 <= start < end <= len(raw)):
                raise HighlightIntegrityError(
                    f"span [{start},{end}) outside text of length {len(raw)}"
                )
            if raw[start:end] != exp.surfaces[i]:
                raise HighlightIntegrityError(
                    f"span [{start},{end}) does not slice to the recorded surface; "
                    "was this score produced from a different text?"
                )
            spans.append((start, end, exp))
    spans.sort(key=lambda item: (item[0], item[1]))
    regions: list[tuple[int, int, list[Explanation]]] = []
    for start, end, exp in spans:
        if regions and start <= regions[-1][1]:
            prev = regions[-1]
            regions[-1] = (prev[0], max(prev[1], end), prev[2] + [exp])
        else:
            regions.append((start, end, [exp]))
    return regions


def render_highlights(raw: str, score: MessageScore, fmt: str = PLAIN) -> str:
    """Render the raw text with match spans highlighted.

    PLAIN wraps regions in guillemets, ANSI colors them by severity, HTML
    emits a fragment with ``<mark>`` elements carrying entry ids, the max
    entry score, and the union of labels for each merged region.
    """
    if fmt not in (PLAIN, ANSI, HTML):
        raise ValueError(f"unknown highlight format {fmt!r}")
    regions = _merged_regions(raw, score)
    out: list[str] = []
    cursor = 0
    escape = _html.escape if fmt == HTML else (lambda s: s)
    for start, end, exps in regions:
        out.append(escape(raw[cursor:start]))
        surface = escape(raw[start:end])
        if fmt == PLAIN:
            out.append(f"«{surface}»")
        elif fmt == ANSI:
            worst = max(e.score for e in exps)
            color = "31" if worst >= 3 else "33"
            out.append(f"\x1b[1;{color}m{surface}\x1b[0m")
        else:
            entry_ids = sorted({e.entry_id for e in exps})
            labels = LabelSet()
            for e in exps:
                labels = labels.union(e.labels)
            worst = max(e.score for e in exps)
            out.append(
                '<mark data-entries="{}" data-score="{}" data-labels="{}">{}</mark>'.format(
                    _html.escape(",".join(entry_ids), quote=True),
                    worst,
                    _html.escape(",".join(labels.to_list()), quote=True),
                    surface,
                )
            )
        cursor = end
    out.append(escape(raw[cursor:]))
    return "".join(out)

"""The curated lexicon: entries, dual-annotator scores, and the TSV format.

An entry couples a pattern (see :mod:`toxlex.patterns`) with per-annotator
toxicity scores on the 0-4 scale and a set of category labels. Consensus
is the mean of the annotator scores rounded half up, unless two annotators
disagree by 2 or more points, in which case the entry is DISPUTED and kept
out of the compiled matcher until curators resolve it. Entries with no
annotations at all are PROVISIONAL (typically machine-suggested candidates
awaiting a first human score) and are likewise never compiled.

Lexicon values are immutable; every mutation returns a new value with a
bumped version so a long-running service can swap compiled lexicons
atomically and readers never observe a half-applied update.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field, replace
from datetime import datetime
from functools import cached_property
from typing import IO, Iterable, Iterator

from .errors import (
    DuplicatePatternError,
    LexiconFormatError,
    LexiconSchemaError,
    PatternError,
    UnknownEntryError,
)
from .patterns import Pattern, parse_pattern

# Canonical label codes, in fixed serialization order.
LABEL_CODES = (
    "HATE", "SHIT", "FUCK", "FOOL", "SCUM", "SLUT", "GOOK",
    "HELL", "HEIL", "PLOT", "KILL", "IFFY", "SLUR", "CONTEXT",
)

# Long-name aliases accepted on input; the 4-letter codes are canonical on
# output. Only these four pairs exist; anything else is rejected.
LABEL_ALIASES = {
    "RIDICULE": "FOOL",
    "DEHUMANIZATION": "SCUM",
    "VIOLENCE": "KILL",
    "CONSPIRACY": "PLOT",
}

LANGUAGES = ("en", "de")

MIN_SCORE = 0
MAX_SCORE = 4

# Annotator scores further apart than this make the entry DISPUTED.
DISPUTE_GAP = 2

STATUS_OK = "OK"
STATUS_DISPUTED = "DISPUTED"
STATUS_PROVISIONAL = "PROVISIONAL"


class _Disputed:
    """Singleton consensus value for entries whose annotators disagree."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "DISPUTED"


DISPUTED = _Disputed()


def canonical_label(name: str) -> str:
    """Resolve a label name (code or accepted alias) to its canonical code."""
    code = name.strip().upper()
    code = LABEL_ALIASES.get(code, code)
    if code not in LABEL_CODES:
        raise LexiconSchemaError(f"unknown label {name!r}")
    return code


@dataclass(frozen=True)
class LabelSet:
    """An immutable set drawn from the 14 canonical category codes."""

    codes: frozenset[str] = frozenset()

    def __post_init__(self):
        bad = self.codes - set(LABEL_CODES)
        if bad:
            raise LexiconSchemaError(f"unknown label codes {sorted(bad)!r}")

    @classmethod
    def of(cls, *names: str) -> "LabelSet":
        return cls(frozenset(canonical_label(n) for n in names))

    @classmethod
    def from_names(cls, names: Iterable[str]) -> "LabelSet":
        return cls.of(*names)

    def union(self, other: "LabelSet") -> "LabelSet":
        return LabelSet(self.codes | other.codes)

    def to_list(self) -> list[str]:
        """Codes present, in canonical column order."""
        return [c for c in LABEL_CODES if c in self.codes]

    def cells(self) -> list[str]:
        """One "1"/"0" cell per canonical column, for TSV rows."""
        return ["1" if c in self.codes else "0" for c in LABEL_CODES]

    def __contains__(self, code: str) -> bool:
        return code in self.codes

    def __bool__(self) -> bool:
        return bool(self.codes)

    def __iter__(self) -> Iterator[str]:
        return iter(self.to_list())


EMPTY_LABELS = LabelSet()


@dataclass(frozen=True)
class Annotation:
    """One annotator's judgement of an entry."""

    annotator_id: str
    score: int
    labels: LabelSet = EMPTY_LABELS
    timestamp: datetime | None = None

    def __post_init__(self):
        if not self.annotator_id:
            raise ValueError("annotator_id must be non-empty")
        if not isinstance(self.score, int) or not MIN_SCORE <= self.score <= MAX_SCORE:
            raise ValueError(
                f"score must be an integer in {MIN_SCORE}-{MAX_SCORE}, got {self.score!r}"
            )


def merge_annotations(annotations: list[Annotation] | tuple[Annotation, ...]):
    """Reconcile annotator scores into a consensus.

    Returns the mean rounded half up when the widest disagreement is at
    most 1 point, otherwise :data:`DISPUTED`. Order-independent.
    """
    if not annotations:
        raise ValueError("merge_annotations requires at least one annotation")
    scores = [a.score for a in annotations]
    if max(scores) - min(scores) >= DISPUTE_GAP:
        return DISPUTED
    total, count = sum(scores), len(scores)
    # round-half-up without float error: floor(total/count + 1/2)
    return (2 * total + count) // (2 * count)


@dataclass(frozen=True)
class LexiconEntry:
    """One curated pattern with its annotations.

    ``consensus``, ``labels``, ``status`` and ``kind`` are derived from the
    annotations and pattern; they are cached on first access.
    """

    id: str
    pattern: str
    language: str
    translation: str | None = None
    annotations: tuple[Annotation, ...] = ()

    def __post_init__(self):
        if not self.id:
            raise ValueError("entry id must be non-empty")
        if self.language not in LANGUAGES:
            raise ValueError(f"language must be one of {LANGUAGES}, got {self.language!r}")
        for text, what in ((self.id, "id"), (self.pattern, "pattern"),
                           (self.translation or "", "translation")):
            if "\t" in text or "\n" in text or "\r" in text:
                raise ValueError(f"{what} may not contain tabs or newlines")

    @cached_property
    def parsed(self) -> Pattern:
        return parse_pattern(self.pattern)

    @property
    def kind(self) -> str:
        return self.parsed.kind

    @cached_property
    def consensus(self):
        """int 0-4, DISPUTED, or None for un-annotated entries."""
        if not self.annotations:
            return None
        return merge_annotations(self.annotations)

    @cached_property
    def labels(self) -> LabelSet:
        labels = EMPTY_LABELS
        for a in self.annotations:
            labels = labels.union(a.labels)
        return labels

    @property
    def status(self) -> str:
        if not self.annotations:
            return STATUS_PROVISIONAL
        if self.consensus is DISPUTED:
            return STATUS_DISPUTED
        return STATUS_OK

    def dedup_key(self, canonical_pattern: str | None = None) -> tuple[str, str]:
        return (canonical_pattern or self.parsed.canonical(), self.language)


@dataclass(frozen=True)
class Lexicon:
    """An immutable, versioned collection of entries keyed by id."""

    entries: dict[str, LexiconEntry] = field(default_factory=dict)
    version: int = 1

    def __post_init__(self):
        seen: dict[tuple[str, str], str] = {}
        for eid, entry in self.entries.items():
            if eid != entry.id:
                raise ValueError(f"entry {entry.id!r} filed under key {eid!r}")
            key = entry.dedup_key()
            other = seen.get(key)
            if other is not None:
                raise DuplicatePatternError(
                    f"entries {other!r} and {entry.id!r} share pattern "
                    f"{key[0]!r} for language {key[1]!r}"
                )
            seen[key] = entry.id

    @property
    def languages(self) -> set[str]:
        return {e.language for e in self.entries.values()}

    def get(self, entry_id: str) -> LexiconEntry:
        try:
            return self.entries[entry_id]
        except KeyError:
            raise UnknownEntryError(entry_id) from None

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[LexiconEntry]:
        return iter(self.entries.values())

    def __contains__(self, entry_id: str) -> bool:
        return entry_id in self.entries

    def with_entries(self, entries: dict[str, LexiconEntry]) -> "Lexicon":
        """A new lexicon with the given entry map and a bumped version."""
        return Lexicon(entries, self.version + 1)


def upsert_annotation(lexicon: Lexicon, entry_id: str, annotation: Annotation) -> Lexicon:
    """Add or replace one annotator's judgement; returns a new version.

    A prior annotation by the same annotator is replaced wholesale;
    consensus and the label union recompute from the surviving set.
    """
    entry = lexicon.get(entry_id)
    kept = tuple(a for a in entry.annotations if a.annotator_id != annotation.annotator_id)
    updated = replace(entry, annotations=kept + (annotation,))
    entries = dict(lexicon.entries)
    entries[entry_id] = updated
    return lexicon.with_entries(entries)


# ---------------------------------------------------------------------------
# TSV serialization
#
# One row per entry: id, WORD (the pattern), TRANSLATION, LANG, SCORE_A,
# SCORE_B, then the 14 label columns as 1/0 cells. Tab-separated because
# patterns legitimately contain commas and slashes. Score cells are empty
# for un-annotated (provisional) entries; the file stores at most two
# annotator scores under the positional ids "A" and "B", and the label row
# is the entry's label union (per-annotator label detail is a service-side
# refinement that the file format intentionally flattens).
# ---------------------------------------------------------------------------

HEADER_FIXED = ("id", "WORD", "TRANSLATION", "LANG", "SCORE_A", "SCORE_B")
TSV_HEADER = "\t".join(HEADER_FIXED + LABEL_CODES)

_SCORE_COLUMNS = ("SCORE_A", "SCORE_B")


def _parse_header(line: str) -> None:
    cells = line.rstrip("\n").split("\t")
    expected = len(HEADER_FIXED) + len(LABEL_CODES)
    if len(cells) != expected:
        raise LexiconSchemaError(
            f"header has {len(cells)} columns, expected {expected}", line=1
        )
    for i, name in enumerate(HEADER_FIXED):
        if cells[i] != name:
            raise LexiconSchemaError(
                f"column {i + 1} must be {name!r}, found {cells[i]!r}",
                line=1, column=cells[i],
            )
    for i, code in enumerate(LABEL_CODES):
        cell = cells[len(HEADER_FIXED) + i].strip().upper()
        if LABEL_ALIASES.get(cell, cell) != code:
            raise LexiconSchemaError(
                f"label column {i + 1 + len(HEADER_FIXED)} must be {code!r} "
                f"(or its accepted alias), found {cells[len(HEADER_FIXED) + i]!r}",
                line=1, column=cells[len(HEADER_FIXED) + i],
            )


def _parse_score(cell: str, line_no: int, column: str) -> int | None:
    cell = cell.strip()
    if cell == "":
        return None
    try:
        score = int(cell)
    except ValueError:
        raise LexiconFormatError(
            f"score cell {cell!r} is not an integer", line=line_no, column=column
        ) from None
    if not MIN_SCORE <= score <= MAX_SCORE:
        raise LexiconFormatError(
            f"score {score} outside {MIN_SCORE}-{MAX_SCORE}",
            line=line_no, column=column,
        )
    return score


def parse_lexicon(source: IO[str] | str) -> Lexicon:
    """Parse a TSV stream (or string) into a version-1 :class:`Lexicon`.

    Errors name the offending line and column. Duplicate
    (normalized pattern, language) rows and duplicate ids are rejected.
    """
    stream = io.StringIO(source) if isinstance(source, str) else source
    header = stream.readline()
    if header == "":
        raise LexiconSchemaError("empty stream: missing header row", line=1)
    _parse_header(header)

    entries: dict[str, LexiconEntry] = {}
    seen_patterns: dict[tuple[str, str], str] = {}
    for line_no, line in enumerate(stream, start=2):
        line = line.rstrip("\n")
        if line == "":
            continue
        cells = line.split("\t")
        if len(cells) != len(HEADER_FIXED) + len(LABEL_CODES):
            raise LexiconFormatError(
                f"row has {len(cells)} cells, expected "
                f"{len(HEADER_FIXED) + len(LABEL_CODES)}", line=line_no,
            )
        eid, word, translation, lang = (c.strip() for c in cells[:4])
        if not eid:
            raise LexiconFormatError("empty id", line=line_no, column="id")
        if eid in entries:
            raise LexiconFormatError(f"duplicate id {eid!r}", line=line_no, column="id")
        if not word:
            raise LexiconFormatError("empty WORD", line=line_no, column="WORD")
        if lang not in LANGUAGES:
            raise LexiconFormatError(
                f"LANG must be one of {LANGUAGES}, got {lang!r}",
                line=line_no, column="LANG",
            )
        codes = set()
        for i, code in enumerate(LABEL_CODES):
            cell = cells[len(HEADER_FIXED) + i].strip()
            if cell == "1":
                codes.add(code)
            elif cell != "0":
                raise LexiconFormatError(
                    f"label cell must be 0 or 1, got {cell!r}",
                    line=line_no, column=code,
                )
        labels = LabelSet(frozenset(codes))
        annotations = []
        for annotator, column in zip("AB", _SCORE_COLUMNS):
            score = _parse_score(cells[HEADER_FIXED.index(column)], line_no, column)
            if score is not None:
                annotations.append(Annotation(annotator, score, labels))
        try:
            entry = LexiconEntry(
                id=eid,
                pattern=word,
                language=lang,
                translation=translation or None,
                annotations=tuple(annotations),
            )
            canonical = entry.parsed.canonical()
        except PatternError as exc:
            raise LexiconFormatError(
                f"bad pattern: {exc}", line=line_no, column="WORD"
            ) from exc
        key = (canonical, lang)
        if key in seen_patterns:
            raise DuplicatePatternError(
                f"pattern duplicates entry {seen_patterns[key]!r}",
                line=line_no, column="WORD",
            )
        seen_patterns[key] = eid
        entries[eid] = entry
    return Lexicon(entries, version=1)


def serialize_lexicon(lexicon: Lexicon) -> str:
    """Render a lexicon as TSV text (LF line endings, id-sorted rows).

    ``parse_lexicon(serialize_lexicon(lex))`` reproduces the entry set of
    any lexicon that came out of ``parse_lexicon``.
    """
    lines = [TSV_HEADER]
    for entry in sorted(lexicon, key=lambda e: e.id):
        scores = ["", ""]
        for i, ann in enumerate(sorted(entry.annotations, key=lambda a: a.annotator_id)[:2]):
            scores[i] = str(ann.score)
        lines.append("\t".join(
            [entry.id, entry.pattern, entry.translation or "", entry.language]
            + scores + entry.labels.cells()
        ))
    return "\n".join(lines) + "\n"

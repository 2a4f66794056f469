"""Corpus ingestion and aggregate reporting.

Adapters map line-delimited JSON dumps from each platform onto a common
message record; during ingestion authors are pseudonymized and text is
redacted, so nothing personally identifying crosses into storage or
reports. Analysis is a single streaming pass with associative
accumulators: mean toxicity, flagged percentages, and raw keyword
occurrence counts bucketed by order of magnitude.

Keyword counting compiles the keyword list itself through the matcher, so
obfuscated spellings count toward prevalence, and it is independent of
entry scores: neutral reference keywords still show up in reports even
though they never flag a message.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import IO, Iterable, Iterator

from .errors import AdapterMismatchError
from .lexicon import Annotation, LexiconEntry, Lexicon
from .matcher import CompiledLexicon, compile_lexicon, find_matches
from .privacy import PrivacyConfig, pseudonymize_author, redact
from .scorer import ScoreConfig, score_from_matches
from .textnorm import normalize_text

PLATFORMS = ("twitter", "facebook", "gab", "chan", "generic")

TEXT = "text"
CSV = "csv"
JSON = "json"

# Order-of-magnitude prevalence buckets: none / dozens / hundreds / thousands.
BUCKET_BOUNDS = (10, 100, 1000)
BUCKET_DOTS = ("○○○", "●○○",
               "●●○", "●●●")


@dataclass(frozen=True)
class Message:
    """One ingested message; the author field is already a pseudonym."""

    id: str
    platform: str
    text: str
    author_pseudonym: str = ""
    timestamp: datetime | None = None
    language: str | None = None

    def __post_init__(self):
        if self.platform not in PLATFORMS:
            raise ValueError(f"platform must be one of {PLATFORMS}")
        if not self.text:
            raise ValueError("text must be non-empty")


@dataclass
class IngestStats:
    total: int = 0
    emitted: int = 0
    skipped: int = 0


# Each adapter lists candidate source fields (dotted = nested) per record
# attribute. These are thin mappings over archived JSON-lines dumps; live
# API clients are out of scope.
ADAPTERS: dict[str, dict[str, tuple[str, ...]]] = {
    "generic": {
        "id": ("id",),
        "text": ("text",),
        "timestamp": ("timestamp",),
        "author": ("author",),
    },
    "twitter": {
        "id": ("id_str", "id"),
        "text": ("full_text", "text"),
        "timestamp": ("created_at",),
        "author": ("user.screen_name", "author_id"),
    },
    "facebook": {
        "id": ("id",),
        "text": ("message",),
        "timestamp": ("created_time",),
        "author": ("from.name", "from.id"),
    },
    "gab": {
        "id": ("id",),
        "text": ("body", "content"),
        "timestamp": ("created_at",),
        "author": ("actor.preferredUsername", "actor.id"),
    },
    "chan": {
        "id": ("no",),
        "text": ("com", "body"),
        "timestamp": ("time",),
        "author": ("name", "trip"),
    },
}

_TIME_FORMATS = (
    "%a %b %d %H:%M:%S %z %Y",   # twitter classic
    "%Y-%m-%dT%H:%M:%S%z",
    "%Y-%m-%d %H:%M:%S",
)


def _dig(record: dict, path: str):
    value = record
    for part in path.split("."):
        if not isinstance(value, dict):
            return None
        value = value.get(part)
    return value


def _first(record: dict, paths: tuple[str, ...]):
    for path in paths:
        value = _dig(record, path)
        if value is not None:
            return value
    return None


def _parse_timestamp(value) -> datetime | None:
    if value is None:
        return None
    if isinstance(value, (int, float)):
        try:
            return datetime.fromtimestamp(value, tz=timezone.utc)
        except (OverflowError, OSError, ValueError):
            return None
    text = str(value).strip()
    try:
        return datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError:
        pass
    for fmt in _TIME_FORMATS:
        try:
            return datetime.strptime(text, fmt)
        except ValueError:
            continue
    return None


def ingest(
    source: str | IO[str],
    platform: str,
    privacy: PrivacyConfig,
    stats: IngestStats | None = None,
    adapter: str | None = None,
) -> Iterator[Message]:
    """Stream messages out of a line-delimited dump.

    Malformed lines are counted and skipped; if more than half of a
    non-empty file fails, the generator raises
    :class:`AdapterMismatchError` at exhaustion because the adapter choice
    is almost certainly wrong. ``stats`` (if given) is updated in place so
    callers can report skip counts.
    """
    adapter_name = adapter or platform
    if adapter_name not in ADAPTERS:
        raise ValueError(f"unknown adapter {adapter_name!r}")
    if platform not in PLATFORMS:
        raise ValueError(f"unknown platform {platform!r}")
    fields = ADAPTERS[adapter_name]
    if stats is None:
        stats = IngestStats()

    def lines() -> Iterator[str]:
        if isinstance(source, str):
            with open(source, "r", encoding="utf-8") as fh:
                yield from fh
        else:
            yield from source

    for line in lines():
        line = line.strip()
        if not line:
            continue
        stats.total += 1
        try:
            record = json.loads(line)
            if not isinstance(record, dict):
                raise ValueError("record is not an object")
            raw_id = _first(record, fields["id"])
            raw_text = _first(record, fields["text"])
            if raw_id is None or not isinstance(raw_text, str) or not raw_text.strip():
                raise ValueError("missing id or text")
            author = _first(record, fields["author"])
            pseudonym = "" if author is None else pseudonymize_author(
                platform, str(author), privacy.secret
            )
            message = Message(
                id=str(raw_id),
                platform=platform,
                text=redact(raw_text, privacy.rules).text,
                author_pseudonym=pseudonym,
                timestamp=_parse_timestamp(_first(record, fields["timestamp"])),
                language=record.get("lang") or record.get("language"),
            )
        except (ValueError, TypeError):
            stats.skipped += 1
            continue
        stats.emitted += 1
        yield message
    if stats.total and stats.skipped * 2 > stats.total:
        raise AdapterMismatchError(adapter_name, stats.skipped, stats.total)


@dataclass(frozen=True)
class CorpusReport:
    """Aggregates for one corpus; percentage fields are None when empty."""

    label: str
    platform: str
    count: int
    mean_toxicity: float | None
    pct_antisemitic: float | None
    pct_violent: float | None
    keyword_counts: dict[str, int] = field(default_factory=dict)
    keyword_prevalence: dict[str, int] = field(default_factory=dict)


def prevalence_bucket(count: int) -> int:
    """0 = under ten, 1 = dozens, 2 = hundreds, 3 = thousands."""
    bucket = 0
    for bound in BUCKET_BOUNDS:
        if count >= bound:
            bucket += 1
    return bucket


def _keyword_lexicon(keywords: list[str]) -> CompiledLexicon:
    """Compile the keyword list alone, so variant spellings count."""
    entries = {}
    for i, keyword in enumerate(keywords):
        entry = LexiconEntry(
            id=f"kw{i}",
            pattern=keyword,
            language="en",
            annotations=(Annotation("A", 1), Annotation("B", 1)),
        )
        entries[entry.id] = entry
    return compile_lexicon(Lexicon(entries))


def analyze(
    messages: Iterable[Message],
    compiled: CompiledLexicon,
    config: ScoreConfig = ScoreConfig(),
    keywords: list[str] | None = None,
    label: str = "corpus",
    platform: str = "generic",
) -> CorpusReport:
    """One streaming pass over a corpus.

    Memory use is bounded by the keyword list, not the corpus; permuting
    the input stream cannot change the report (all accumulators are sums).
    """
    keywords = list(keywords or [])
    kw_compiled = _keyword_lexicon(keywords) if keywords else None
    kw_ids = {f"kw{i}": kw for i, kw in enumerate(keywords)}
    kw_counts = {kw: 0 for kw in keywords}

    count = 0
    toxicity_sum = 0
    antisemitic = 0
    violent = 0
    for message in messages:
        count += 1
        text = normalize_text(message.text)
        matches = find_matches(compiled, text)
        score = score_from_matches(compiled.meta, message.text, matches, config)
        toxicity_sum += score.toxicity
        antisemitic += score.antisemitic
        violent += score.violent
        if kw_compiled is not None:
            for match in find_matches(kw_compiled, text):
                kw_counts[kw_ids[match.entry_id]] += 1

    if count:
        mean = toxicity_sum / count
        pct_anti = 100.0 * antisemitic / count
        pct_violent = 100.0 * violent / count
    else:
        mean = pct_anti = pct_violent = None
    return CorpusReport(
        label=label,
        platform=platform,
        count=count,
        mean_toxicity=mean,
        pct_antisemitic=pct_anti,
        pct_violent=pct_violent,
        keyword_counts=kw_counts,
        keyword_prevalence={kw: prevalence_bucket(n) for kw, n in kw_counts.items()},
    )


def _fmt_pct(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.1f}%"


def render_report(report: CorpusReport, fmt: str = TEXT) -> str:
    """Render a report as a text table, CSV, or a JSON record."""
    if fmt == TEXT:
        rows = [
            ("SOURCE", report.label),
            ("SAMPLE", f"{report.count:,}" if report.count else "0 messages"),
            ("TOXICITY", "n/a" if report.mean_toxicity is None
             else f"{math.floor(report.mean_toxicity + 0.5)}/100"),
            ("ANTI-SEMITIC", _fmt_pct(report.pct_antisemitic)),
            ("VIOLENT", _fmt_pct(report.pct_violent)),
        ]
        width = max(len(r[0]) for r in rows) + 2
        lines = [f"{name:<{width}}{value}" for name, value in rows]
        if report.keyword_counts:
            kw_width = max(max(len(k) for k in report.keyword_counts), len("KEYWORD")) + 2
            lines.append("")
            lines.append(f"{'KEYWORD':<{kw_width}}{'COUNT':>7}  PREVALENCE")
            for kw, n in report.keyword_counts.items():
                dots = BUCKET_DOTS[report.keyword_prevalence[kw]]
                lines.append(f"{kw:<{kw_width}}{n:>7}  {dots}")
        return "\n".join(lines) + "\n"
    if fmt == CSV:
        def cell(value):
            return "" if value is None else value
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["corpus", "label", "count", "mean_toxicity",
                         "pct_antisemitic", "pct_violent"])
        writer.writerow([report.platform, report.label, report.count,
                         cell(report.mean_toxicity),
                         cell(report.pct_antisemitic), cell(report.pct_violent)])
        if report.keyword_counts:
            buf.write("\n")
            writer.writerow(["keyword", "count", "bucket"])
            for kw, n in report.keyword_counts.items():
                writer.writerow([kw, n, report.keyword_prevalence[kw]])
        return buf.getvalue()
    if fmt == JSON:
        return json.dumps({
            "label": report.label,
            "platform": report.platform,
            "count": report.count,
            "mean_toxicity": report.mean_toxicity,
            "pct_antisemitic": report.pct_antisemitic,
            "pct_violent": report.pct_violent,
            "keywords": [
                {"keyword": kw, "count": n,
                 "bucket": report.keyword_prevalence[kw]}
                for kw, n in report.keyword_counts.items()
            ],
        }, ensure_ascii=False, indent=2) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")

"""toxlex: lexicon-driven, explainable toxicity scoring for social media text.

The pipeline: a curated multi-label lexicon compiles into a token-level
multi-pattern matcher; messages normalize through an obfuscation-resilient
pipeline that maps every token back to raw character offsets; matches
aggregate into a 0-100 toxicity score with span-level explanations; privacy
helpers pseudonymize authors and redact PII before anything is stored; and
corpus tools turn message dumps into aggregate reports.
"""

from .errors import (
    AdapterMismatchError,
    CompileError,
    ConfigurationError,
    DuplicatePatternError,
    HighlightIntegrityError,
    LexiconFormatError,
    LexiconSchemaError,
    NormalizationError,
    PatternError,
    PatternSyntaxError,
    PatternWindowError,
    ToxlexError,
    UnknownEntryError,
)
from .textnorm import (
    LEET_MAP,
    PIPELINE_STEPS,
    NormalizedText,
    Token,
    normalize_pattern_token,
    normalize_text,
)
from .patterns import COMBO, DEFAULT_WINDOW, PHRASE, Pattern, parse_pattern
from .lexicon import (
    DISPUTED,
    LABEL_ALIASES,
    LABEL_CODES,
    Annotation,
    LabelSet,
    Lexicon,
    LexiconEntry,
    canonical_label,
    merge_annotations,
    parse_lexicon,
    serialize_lexicon,
    upsert_annotation,
)
from .matcher import CompiledLexicon, EntryMeta, Match, compile_lexicon, find_matches
from .scorer import (
    ANSI,
    HTML,
    PLAIN,
    Explanation,
    MessageScore,
    ScoreConfig,
    render_highlights,
    score_message,
)
from .privacy import (
    DEFAULT_RULES,
    PLACEHOLDERS,
    PrivacyConfig,
    RedactedMessage,
    Redaction,
    RedactionRule,
    pseudonymize_author,
    redact,
)
from .corpus import (
    ADAPTERS,
    CorpusReport,
    IngestStats,
    Message,
    analyze,
    ingest,
    prevalence_bucket,
    render_report,
)
from .expand import (
    Candidate,
    EnqueueSummary,
    ExpandConfig,
    enqueue_candidates,
    suggest_candidates,
)

__version__ = "0.1.0"

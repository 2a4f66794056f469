"""Exception types shared across the package."""


class ToxlexError(Exception):
    """Base class for all errors raised by this package."""


class LexiconFormatError(ToxlexError, ValueError):
    """A lexicon file row or cell could not be parsed.

    Carries the 1-based line number and, when known, the offending column
    name so curators can fix the file.
    """

    def __init__(self, message: str, *, line: int | None = None, column: str | None = None):
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class LexiconSchemaError(LexiconFormatError):
    """The lexicon header declares an unknown or misplaced column."""


class DuplicatePatternError(LexiconFormatError):
    """Two entries share the same (normalized pattern, language)."""


class UnknownEntryError(ToxlexError, KeyError):
    """An entry id was not found in the lexicon."""


class PatternError(ToxlexError, ValueError):
    """Base class for pattern mini-language errors."""


class PatternSyntaxError(PatternError):
    """The pattern text violates the mini-language grammar."""


class PatternWindowError(PatternError):
    """The proximity window is outside the allowed 1-10 range."""


class NormalizationError(ToxlexError, ValueError):
    """A pattern word has no matchable content after normalization."""


class CompileError(ToxlexError):
    """A lexicon entry cannot be compiled into the matcher."""

    def __init__(self, message: str, *, entry_id: str | None = None):
        self.entry_id = entry_id
        if entry_id is not None:
            message = f"entry {entry_id!r}: {message}"
        super().__init__(message)


class HighlightIntegrityError(ToxlexError):
    """A score's spans do not fit the text it is being rendered against."""


class ConfigurationError(ToxlexError):
    """Invalid runtime configuration (e.g. a too-short privacy secret)."""


class AdapterMismatchError(ToxlexError):
    """More than half of an input file failed to parse: wrong adapter."""

    def __init__(self, adapter: str, skipped: int, total: int):
        self.adapter = adapter
        self.skipped = skipped
        self.total = total
        super().__init__(
            f"adapter {adapter!r} rejected {skipped} of {total} lines; "
            "this is probably the wrong adapter for the file"
        )

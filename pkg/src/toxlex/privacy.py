"""Pseudonymization and in-text PII redaction, applied before anything is
stored or reported.

Author identities become deterministic keyed pseudonyms (HMAC-SHA256 over
``platform:author_id``, truncated hex), so the same author aggregates
consistently within a deployment but cannot be re-identified without the
secret. Message text is scrubbed of handles, links, addresses, phone
numbers and long numeric ids before persistence; scoring runs on the
original text upstream, so redaction costs no recall.

Phone detection is deliberately narrow (international prefix, or 7+ digits
in separator-grouped form): blanket digit redaction would destroy coded
numeric terms that the lexicon must keep matchable.
"""

from __future__ import annotations

import hmac
import hashlib
import re
from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import ConfigurationError

MIN_SECRET_BYTES = 16
PSEUDONYM_LENGTH = 16

# The closed placeholder set. Angle brackets U+27E8/27E9 are punctuation,
# so normalization strips them and the matcher never sees placeholders as
# anything but inert tokens; the compiler additionally refuses lexicon
# entries whose tokens collide with the bare placeholder words.
PLACEHOLDERS = {
    "user-mention": "⟨USER⟩",
    "url": "⟨URL⟩",
    "email": "⟨EMAIL⟩",
    "phone": "⟨PHONE⟩",
    "long-digit-id": "⟨ID⟩",
}

PLACEHOLDER_TOKENS = frozenset({"user", "url", "email", "phone", "id"})


@dataclass(frozen=True)
class RedactionRule:
    """One detector: a regex plus an optional match validator."""

    name: str
    pattern: re.Pattern
    placeholder: str
    accept: Callable[[str], bool] | None = None

    def __post_init__(self):
        if self.placeholder not in PLACEHOLDERS.values():
            raise ConfigurationError(
                f"placeholder {self.placeholder!r} outside the closed set"
            )


def _digits(text: str) -> int:
    return sum(ch.isdigit() for ch in text)


DEFAULT_RULES: tuple[RedactionRule, ...] = (
    # URLs before emails so userinfo/mailto forms are taken whole; emails
    # before mentions so the @domain part is never half-redacted.
    RedactionRule("url", re.compile(r"(?:https?://|www\.)[^\s⟨⟩]+"),
                  PLACEHOLDERS["url"]),
    RedactionRule("email", re.compile(r"[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}"),
                  PLACEHOLDERS["email"]),
    RedactionRule("user-mention", re.compile(r"(?<![\w@])@[A-Za-z0-9_.]{2,30}"),
                  PLACEHOLDERS["user-mention"]),
    RedactionRule("phone",
                  re.compile(r"\+\d(?:[\s().-]?\d){6,}"
                             r"|\b\d{2,4}(?:[\s.-]\d{2,4}){2,}\b"
                             r"|\(\d{2,4}\)[\s.-]?\d{3,4}[\s.-]?\d{3,4}"),
                  PLACEHOLDERS["phone"],
                  accept=lambda m: _digits(m) >= 7),
    RedactionRule("long-digit-id", re.compile(r"\d{7,}"),
                  PLACEHOLDERS["long-digit-id"]),
)

RedactionRuleSet = tuple


@dataclass(frozen=True)
class Redaction:
    """One replacement: rule name plus the span in the pre-redaction text."""

    rule: str
    start: int
    end: int


@dataclass(frozen=True)
class RedactedMessage:
    text: str
    redactions: tuple[Redaction, ...] = ()


def redact(text: str, rules: Iterable[RedactionRule] = DEFAULT_RULES) -> RedactedMessage:
    """Replace PII with placeholders.

    All rules match against the original text; earlier rules win overlaps,
    then leftmost. Placeholders contain no word characters or digits that
    any detector accepts, so redact(redact(t).text) is a fixed point.
    """
    accepted: list[tuple[int, int, RedactionRule]] = []

    def overlaps(start: int, end: int) -> bool:
        return any(start < e and s < end for s, e, _ in accepted)

    for rule in rules:
        for m in rule.pattern.finditer(text):
            if rule.accept is not None and not rule.accept(m.group(0)):
                continue
            if not overlaps(m.start(), m.end()):
                accepted.append((m.start(), m.end(), rule))
    if not accepted:
        return RedactedMessage(text)
    accepted.sort(key=lambda item: item[0])
    pieces: list[str] = []
    cursor = 0
    redactions: list[Redaction] = []
    for start, end, rule in accepted:
        pieces.append(text[cursor:start])
        pieces.append(rule.placeholder)
        redactions.append(Redaction(rule.name, start, end))
        cursor = end
    pieces.append(text[cursor:])
    return RedactedMessage("".join(pieces), tuple(redactions))


def pseudonymize_author(platform: str, author_id: str, secret: bytes) -> str:
    """Deterministic keyed pseudonym for an author on a platform.

    Domain-separating on the platform means the same account name on two
    platforms yields unlinkable pseudonyms. Inverting requires the secret.
    """
    if not isinstance(secret, (bytes, bytearray)):
        raise ConfigurationError("privacy secret must be bytes")
    if len(secret) < MIN_SECRET_BYTES:
        raise ConfigurationError(
            f"privacy secret must be at least {MIN_SECRET_BYTES} bytes"
        )
    digest = hmac.new(bytes(secret), f"{platform}:{author_id}".encode("utf-8"),
                      hashlib.sha256).hexdigest()
    return digest[:PSEUDONYM_LENGTH]


@dataclass(frozen=True)
class PrivacyConfig:
    """Runtime privacy settings: the keyed-hash secret and active rules."""

    secret: bytes
    rules: tuple[RedactionRule, ...] = DEFAULT_RULES

    def __post_init__(self):
        if len(self.secret) < MIN_SECRET_BYTES:
            raise ConfigurationError(
                f"privacy secret must be at least {MIN_SECRET_BYTES} bytes"
            )

    @classmethod
    def from_hex(cls, hex_secret: str) -> "PrivacyConfig":
        try:
            secret = bytes.fromhex(hex_secret.strip())
        except ValueError:
            raise ConfigurationError("privacy secret must be hex-encoded") from None
        return cls(secret)

import random

import pytest
from hypothesis import given, settings, strategies as st

from toxlex import NormalizationError, normalize_pattern_token, normalize_text
from toxlex.textnorm import LEET_MAP, PIPELINE_STEPS, _normalize_general


def tokens_of(text):
    return [t.normalized for t in normalize_text(text).tokens]


class TestWorkedExamples:
    def test_empty(self):
        assert normalize_text("").tokens == ()

    def test_leet(self):
        nt = normalize_text("K1KE")
        assert [(t.normalized, t.start, t.end) for t in nt.tokens] == [("kike", 0, 4)]

    def test_diacritic_fold_and_trailing_punct(self):
        nt = normalize_text("LÜGENPRESSE!!")
        assert [(t.normalized, t.start, t.end) for t in nt.tokens] == [
            ("lugenpresse", 0, 11)
        ]

    def test_separator_join(self):
        nt = normalize_text("k-i-k-e-s")
        assert [(t.normalized, t.start, t.end) for t in nt.tokens] == [("kikes", 0, 9)]

    def test_repeat_collapse(self):
        assert tokens_of("soooo bad") == ["soo", "bad"]

    def test_digits_alone_stay_digits(self):
        assert tokens_of("1488 and 14/88") == ["1488", "and", "14", "88"]

    def test_leet_needs_letters_both_sides(self):
        assert tokens_of("k1ke") == ["kike"]
        assert tokens_of("jew5") == ["jew5"]  # trailing digit is not flanked
        assert tokens_of("4chan") == ["4chan"]

    def test_joined_fragments_refold(self):
        # the joined word passes through leet + collapse again
        assert tokens_of("k-1-k-e") == ["kike"]
        assert tokens_of("o-o-o-o") == ["oo"]

    def test_emoji_form_their_own_tokens(self):
        assert tokens_of("jews\U0001f525\U0001f525out") == ["jews", "\U0001f525\U0001f525", "out"]

    def test_mention_at_stays_separator(self):
        # '@' maps only between letters; at word start it separates
        assert tokens_of("@john hates") == ["john", "hates"]

    def test_documented_constants(self):
        assert LEET_MAP["0"] == "o" and LEET_MAP["!"] == "i"
        assert len(PIPELINE_STEPS) == 6


class TestPatternToken:
    def test_lowercase(self):
        assert normalize_pattern_token("Jews") == "jews"

    def test_diacritics(self):
        assert normalize_pattern_token("Lügenpresse") == "lugenpresse"

    def test_empty_after_normalization(self):
        with pytest.raises(NormalizationError):
            normalize_pattern_token("!!!")

    def test_leet_applies(self):
        assert normalize_pattern_token("k1ke") == "kike"


# a realistic mixed alphabet: ascii, leet chars, separators, german, emoji
ALPHABET = (
    "abcdefghijklmnopqrstuvwxyz" "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    "0134570@$!" " \t.-_'/äöüßÉİ"
    "«»⟨⟩\U0001f525\U0001f9e0,:;()"
)

text_strategy = st.text(alphabet=ALPHABET, max_size=40)


class TestProperties:
    @given(text_strategy)
    def test_determinism(self, s):
        assert normalize_text(s) == normalize_text(s)

    @given(text_strategy)
    def test_offset_soundness(self, s):
        nt = normalize_text(s)
        for tok in nt.tokens:
            again = normalize_text(s[tok.start:tok.end])
            assert [t.normalized for t in again.tokens] == [tok.normalized]

    @given(text_strategy)
    def test_spans_strictly_increase_within_bounds(self, s):
        nt = normalize_text(s)
        prev_end = 0
        for tok in nt.tokens:
            assert 0 <= tok.start < tok.end <= len(s)
            assert tok.start >= prev_end
            assert tok.normalized
            prev_end = tok.end

    @given(text_strategy)
    def test_idempotence(self, s):
        once = tokens_of(s)
        assert tokens_of(" ".join(once)) == once

    @given(text_strategy)
    def test_case_invariance(self, s):
        assert tokens_of(s.upper()) == tokens_of(s)

    @given(st.text(alphabet=ALPHABET.encode("ascii", "ignore").decode(), max_size=40))
    def test_fast_path_matches_general(self, s):
        assert normalize_text(s) == _normalize_general(s)

    @given(st.text(max_size=30))
    def test_arbitrary_unicode_never_crashes(self, s):
        nt = normalize_text(s)
        prev_end = 0
        for tok in nt.tokens:
            assert 0 <= tok.start < tok.end <= len(s)
            assert tok.start >= prev_end
            prev_end = tok.end
            assert tok.normalized == tok.normalized.casefold()

    @settings(max_examples=30)
    @given(st.text(max_size=30))
    def test_arbitrary_unicode_offset_soundness(self, s):
        nt = normalize_text(s)
        for tok in nt.tokens:
            again = normalize_text(s[tok.start:tok.end])
            assert [t.normalized for t in again.tokens] == [tok.normalized]


def test_seeded_bulk_soundness():
    rng = random.Random(20210412)
    for _ in range(2000):
        s = "".join(rng.choice(ALPHABET) for _ in range(rng.randint(0, 60)))
        nt = normalize_text(s)
        for tok in nt.tokens:
            again = normalize_text(s[tok.start:tok.end])
            assert [t.normalized for t in again.tokens] == [tok.normalized], s

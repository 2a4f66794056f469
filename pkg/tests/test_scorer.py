import random

import pytest
from hypothesis import given, strategies as st

from toxlex import (
    Annotation,
    HighlightIntegrityError,
    LabelSet,
    Lexicon,
    LexiconEntry,
    MessageScore,
    ScoreConfig,
    compile_lexicon,
    render_highlights,
    score_message,
)
from toxlex.matcher import EntryMeta, Match
from toxlex.scorer import score_from_matches

from oracles import naive_score


def entry(eid, pattern, score, labels=()):
    return LexiconEntry(
        eid, pattern, "en",
        annotations=(Annotation("A", score, LabelSet.of(*labels)),
                     Annotation("B", score, LabelSet.of(*labels))),
    )


def compiled_of(*entries):
    return compile_lexicon(Lexicon({e.id: e for e in entries}))


class TestScoreExamples:
    def test_clean_message(self, demo_compiled):
        score = score_message(demo_compiled, "good morning")
        assert score.toxicity == 0
        assert not score.antisemitic and not score.violent
        assert score.explanations == ()

    def test_single_level4_entry_saturates(self):
        compiled = compiled_of(entry("k", "kikes", 4))
        score = score_message(compiled, "kikes everywhere")
        assert score.toxicity == 100
        assert score.antisemitic

    def test_two_distinct_entries_sum(self):
        compiled = compiled_of(entry("two", "degenerates", 2),
                               entry("one", "soros", 1))
        score = score_message(compiled, "degenerates follow soros")
        assert score.toxicity == 75
        assert score.antisemitic  # 75 >= 50

    def test_repeated_entry_counts_once(self):
        compiled = compiled_of(entry("one", "soros", 1))
        score = score_message(compiled, "soros soros soros")
        assert score.toxicity == 25
        assert not score.antisemitic
        assert len(score.explanations) == 3

    def test_kill_label_sets_violent(self):
        compiled = compiled_of(entry("gc", "gas chamber", 2, labels=("KILL",)))
        score = score_message(compiled, "the gas chamber again")
        assert score.toxicity == 50
        assert score.antisemitic
        assert score.violent

    def test_low_kill_level_not_violent(self):
        compiled = compiled_of(entry("mild", "soros", 1, labels=("KILL",)))
        score = score_message(compiled, "soros")
        assert not score.violent  # consensus 1 < violent_min_level 2

    def test_toxicity_zero_iff_no_explanations(self, demo_compiled):
        for text in ("", "nothing here", "gas the jews", "soros"):
            score = score_message(demo_compiled, text)
            assert (score.toxicity == 0) == (not score.explanations)

    def test_explanation_surfaces_slice_raw(self, demo_compiled):
        raw = "they will GAS the j-e-w-s tomorrow"
        score = score_message(demo_compiled, raw)
        assert score.explanations
        for exp in score.explanations:
            for (s, e), surface in zip(exp.spans, exp.surfaces):
                assert raw[s:e] == surface

    def test_wire_record_shape(self, demo_compiled):
        record = score_message(demo_compiled, "gas the jews").to_record(lexicon_version=1)
        assert set(record) == {"toxicity", "antisemitic", "violent",
                               "explanations", "lexicon_version"}
        exp = record["explanations"][0]
        assert set(exp) == {"entry_id", "spans", "score", "labels"}


def meta_of(eid, score, labels=()):
    return EntryMeta(eid, score, LabelSet.of(*labels), "PHRASE", 3)


def synthetic_matches(rng, raw):
    """Random match sets over a fixed raw string, plus their meta table."""
    meta = {}
    matches = []
    for i in range(rng.randint(0, 8)):
        eid = f"e{rng.randint(0, 4)}"
        if eid not in meta:
            labels = ("KILL",) if rng.random() < 0.4 else ()
            meta[eid] = meta_of(eid, rng.randint(1, 4), labels)
        start = rng.randint(0, len(raw) - 2)
        end = rng.randint(start + 1, len(raw))
        matches.append(Match(eid, ((0, 1),), ((start, end),)))
    return meta, matches


class TestScoreProperties:
    def test_matches_formula_oracle(self):
        rng = random.Random(12)
        raw = "x" * 40
        config = ScoreConfig()
        for _ in range(500):
            meta, matches = synthetic_matches(rng, raw)
            got = score_from_matches(meta, raw, matches, config)
            want = naive_score(
                [(m.entry_id, meta[m.entry_id].score,
                  frozenset(meta[m.entry_id].labels.codes)) for m in matches])
            assert (got.toxicity, got.antisemitic, got.violent) == want
            assert got.toxicity <= config.cap
            assert (got.toxicity == 0) == (not got.explanations)

    def test_permutation_stability(self):
        rng = random.Random(13)
        raw = "y" * 40
        config = ScoreConfig()
        for _ in range(100):
            meta, matches = synthetic_matches(rng, raw)
            base = score_from_matches(meta, raw, matches, config)
            for _ in range(3):
                rng.shuffle(matches)
                again = score_from_matches(meta, raw, matches, config)
                assert again == base

    def test_monotonic_in_new_entries(self):
        raw = "z" * 10
        config = ScoreConfig()
        meta = {"a": meta_of("a", 1), "b": meta_of("b", 2)}
        just_a = [Match("a", ((0, 1),), ((0, 1),))]
        both = just_a + [Match("b", ((1, 2),), ((1, 2),))]
        assert (score_from_matches(meta, raw, both, config).toxicity
                >= score_from_matches(meta, raw, just_a, config).toxicity)

    @given(st.integers(0, 100))
    def test_flag_is_pure_threshold(self, threshold):
        raw = "q" * 10
        meta = {"a": meta_of("a", 2)}
        matches = [Match("a", ((0, 1),), ((0, 1),))]
        config = ScoreConfig(antisemitic_threshold=threshold)
        score = score_from_matches(meta, raw, matches, config)
        assert score.antisemitic == (score.toxicity >= threshold)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ScoreConfig(points_per_level=0)
        with pytest.raises(ValueError):
            ScoreConfig(antisemitic_threshold=101)


class TestHighlights:
    def test_no_explanations_returns_raw(self, demo_compiled):
        raw = "perfectly fine text"
        score = score_message(demo_compiled, raw)
        assert render_highlights(raw, score) == raw

    def test_plain_combo(self, demo_compiled):
        raw = "gas the jews"
        score = score_message(demo_compiled, raw)
        assert render_highlights(raw, score, "plain") == "«gas» the «jews»"

    def test_overlap_merges(self):
        compiled = compiled_of(entry("one", "a b", 2), entry("two", "b c", 2))
        raw = "a b c"
        score = score_message(compiled, raw)
        assert render_highlights(raw, score) == "«a b c»"

    def test_strip_roundtrip(self, demo_compiled):
        raw = "they want to gas all the jews and the k1kes"
        score = score_message(demo_compiled, raw)
        plain = render_highlights(raw, score, "plain")
        assert plain.replace("«", "").replace("»", "") == raw

    def test_ansi_wraps_spans(self, demo_compiled):
        raw = "gas the jews"
        out = render_highlights(raw, score_message(demo_compiled, raw), "ansi")
        assert "\x1b[1;31mgas\x1b[0m" in out

    def test_html_fragment(self, demo_compiled):
        raw = "<b>gas the jews</b>"
        out = render_highlights(raw, score_message(demo_compiled, raw), "html")
        assert "&lt;b&gt;" in out
        assert '<mark data-entries="gas-kill-jews" data-score="4"' in out
        assert 'data-labels="HATE,HELL,KILL"' in out

    def test_span_out_of_bounds_is_integrity_error(self):
        score = MessageScore(100, True, False, (
            __import__("toxlex").Explanation("x", ("abc",), ((0, 3),), 4, LabelSet()),))
        with pytest.raises(HighlightIntegrityError):
            render_highlights("ab", score)

    def test_mismatched_raw_is_integrity_error(self, demo_compiled):
        raw = "gas the jews"
        score = score_message(demo_compiled, raw)
        with pytest.raises(HighlightIntegrityError):
            render_highlights("gas the jewz", score)

import json
import random

import pytest

from toxlex import (
    AdapterMismatchError,
    IngestStats,
    Message,
    PrivacyConfig,
    analyze,
    ingest,
    prevalence_bucket,
    render_report,
)
from toxlex.corpus import BUCKET_DOTS


@pytest.fixture
def privacy(secret):
    return PrivacyConfig(secret)


def write_lines(tmp_path, name, lines):
    path = tmp_path / name
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    return str(path)


def generic_line(i, text, author=None, **extra):
    record = {"id": f"m{i}", "text": text}
    if author:
        record["author"] = author
    record.update(extra)
    return json.dumps(record)


class TestIngest:
    def test_empty_file(self, tmp_path, privacy):
        path = write_lines(tmp_path, "empty.jsonl", [])
        stats = IngestStats()
        assert list(ingest(path, "generic", privacy, stats=stats)) == []
        assert stats.skipped == 0 and stats.total == 0

    def test_malformed_lines_skipped(self, tmp_path, privacy):
        path = write_lines(tmp_path, "three.jsonl", [
            generic_line(1, "fine"),
            "{not json at all",
            generic_line(2, "also fine"),
        ])
        stats = IngestStats()
        messages = list(ingest(path, "generic", privacy, stats=stats))
        assert [m.id for m in messages] == ["m1", "m2"]
        assert stats.skipped == 1 and stats.emitted == 2

    def test_handles_redacted(self, tmp_path, privacy):
        path = write_lines(tmp_path, "handles.jsonl", [
            generic_line(1, "@victim_1 look at this https://t.co/abc", author="troll9"),
            generic_line(2, "mail me at x@y.org"),
        ])
        messages = list(ingest(path, "generic", privacy))
        assert messages[0].text == "⟨USER⟩ look at this ⟨URL⟩"
        assert messages[1].text == "mail me at ⟨EMAIL⟩"
        for m in messages:
            assert "@" not in m.text

    def test_author_pseudonymized(self, tmp_path, privacy, secret):
        from toxlex import pseudonymize_author
        path = write_lines(tmp_path, "a.jsonl", [generic_line(1, "hi", author="troll9")])
        [message] = ingest(path, "generic", privacy)
        assert message.author_pseudonym == pseudonymize_author("generic", "troll9", secret)
        assert "troll9" not in message.author_pseudonym

    def test_mostly_malformed_raises(self, tmp_path, privacy):
        path = write_lines(tmp_path, "bad.jsonl", [
            generic_line(1, "ok"), "garbage", "more garbage",
        ])
        with pytest.raises(AdapterMismatchError) as err:
            list(ingest(path, "generic", privacy))
        assert "generic" in str(err.value)

    def test_unreadable_file(self, privacy):
        with pytest.raises(OSError):
            list(ingest("/nonexistent/nope.jsonl", "generic", privacy))

    def test_twitter_adapter(self, tmp_path, privacy):
        path = write_lines(tmp_path, "tw.jsonl", [json.dumps({
            "id_str": "991",
            "full_text": "some tweet",
            "created_at": "Wed Oct 10 20:19:24 +0000 2018",
            "user": {"screen_name": "someone"},
        })])
        [message] = ingest(path, "twitter", privacy)
        assert message.platform == "twitter"
        assert message.timestamp.year == 2018

    def test_chan_adapter(self, tmp_path, privacy):
        path = write_lines(tmp_path, "ch.jsonl", [json.dumps({
            "no": 12345, "com": "an anonymous post", "time": 1577836800,
        })])
        [message] = ingest(path, "chan", privacy)
        assert message.id == "12345"
        assert message.timestamp.year == 2020


class TestPrevalenceBucket:
    @pytest.mark.parametrize("count,bucket", [
        (0, 0), (9, 0), (10, 1), (50, 1), (99, 1),
        (100, 2), (500, 2), (999, 2), (1000, 3), (5000, 3),
    ])
    def test_boundaries(self, count, bucket):
        assert prevalence_bucket(count) == bucket

    def test_monotone(self):
        buckets = [prevalence_bucket(n) for n in range(0, 2000, 7)]
        assert buckets == sorted(buckets)


def toy_corpus():
    """10 messages: exactly one scores 100, nine score 0."""
    messages = [Message(f"c{i}", "generic", "perfectly ordinary text here")
                for i in range(9)]
    messages.append(Message("hot", "generic", "gas the jews"))
    return messages


class TestAnalyze:
    def test_hand_built_corpus(self, demo_compiled):
        report = analyze(toy_corpus(), demo_compiled, label="toy")
        assert report.count == 10
        assert report.mean_toxicity == 10.0
        assert report.pct_antisemitic == 10.0
        assert report.pct_violent == 10.0

    def test_all_clean(self, demo_compiled):
        messages = [Message(f"c{i}", "generic", "nice weather") for i in range(5)]
        report = analyze(messages, demo_compiled)
        assert report.mean_toxicity == 0.0
        assert report.pct_antisemitic == 0.0 and report.pct_violent == 0.0

    def test_empty_stream(self, demo_compiled):
        report = analyze([], demo_compiled, keywords=["kikes"])
        assert report.count == 0
        assert report.mean_toxicity is None
        assert report.pct_antisemitic is None

    def test_keyword_counting_counts_occurrences(self, demo_compiled):
        messages = [Message("a", "generic", "kikes kikes k1kes"),
                    Message("b", "generic", "nothing")]
        report = analyze(messages, demo_compiled, keywords=["kikes", "soros"])
        assert report.keyword_counts == {"kikes": 3, "soros": 0}
        assert report.keyword_prevalence == {"kikes": 0, "soros": 0}

    def test_keywords_count_even_for_score_zero_terms(self, demo_compiled):
        # "bat yeor" compiles out of the matcher (score 0) but keyword
        # reports still see it
        messages = [Message("a", "generic", "bat yeor wrote books")]
        report = analyze(messages, demo_compiled, keywords=["bat yeor"])
        assert report.keyword_counts["bat yeor"] == 1
        assert report.mean_toxicity == 0.0

    def test_bucket_2_for_500_occurrences(self, demo_compiled):
        messages = [Message(f"k{i}", "generic", "kikes " * 5) for i in range(100)]
        report = analyze(messages, demo_compiled, keywords=["kikes"])
        assert report.keyword_counts["kikes"] == 500
        assert report.keyword_prevalence["kikes"] == 2

    def test_order_independence(self, demo_compiled):
        messages = toy_corpus()
        rng = random.Random(3)
        base = analyze(messages, demo_compiled, keywords=["jews"], label="x")
        for _ in range(5):
            rng.shuffle(messages)
            assert analyze(messages, demo_compiled, keywords=["jews"], label="x") == base

    def test_two_pass_equality(self, demo_compiled):
        from toxlex import score_message
        messages = toy_corpus()
        report = analyze(messages, demo_compiled)
        scores = [score_message(demo_compiled, m.text) for m in messages]
        assert report.mean_toxicity == sum(s.toxicity for s in scores) / len(scores)
        assert report.pct_antisemitic == 100 * sum(s.antisemitic for s in scores) / len(scores)
        assert report.pct_violent == 100 * sum(s.violent for s in scores) / len(scores)


class TestRenderReport:
    def report(self, demo_compiled):
        return analyze(toy_corpus(), demo_compiled, keywords=["kikes"], label="toy")

    def test_text_format(self, demo_compiled):
        out = render_report(self.report(demo_compiled), "text")
        assert "SOURCE" in out and "SAMPLE" in out
        assert "TOXICITY" in out and "10/100" in out
        assert "ANTI-SEMITIC" in out and "10.0%" in out
        assert "VIOLENT" in out
        assert "KEYWORD" in out

    def test_dots(self):
        assert BUCKET_DOTS[2] == "●●○"
        assert BUCKET_DOTS[0] == "○○○"

    def test_empty_report_sentinel(self, demo_compiled):
        out = render_report(analyze([], demo_compiled), "text")
        assert "0 messages" in out

    def test_csv_format(self, demo_compiled):
        out = render_report(self.report(demo_compiled), "csv")
        lines = out.splitlines()
        assert lines[0] == "corpus,label,count,mean_toxicity,pct_antisemitic,pct_violent"
        assert lines[1].startswith("generic,toy,10,10.0,10.0,10.0")
        assert "kikes,0,0" in out

    def test_json_format(self, demo_compiled):
        out = json.loads(render_report(self.report(demo_compiled), "json"))
        assert out["count"] == 10
        assert out["mean_toxicity"] == 10.0
        assert out["keywords"][0]["keyword"] == "kikes"

    def test_percentages_render_one_decimal(self, demo_compiled):
        report = analyze([Message("a", "generic", "gas the jews")]
                         + [Message(f"b{i}", "generic", "fine") for i in range(14)],
                         demo_compiled)
        out = render_report(report, "text")
        assert "6.7%" in out  # 1/15 to one decimal

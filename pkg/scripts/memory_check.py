#!/usr/bin/env python3
"""Verify that corpus analysis streams: peak memory while analyzing 1M
synthetic messages must not grow with corpus size.

The generator yields messages lazily; tracemalloc snapshots the analysis
pass only. Expect a peak of a few MB regardless of --messages.

Run:  python scripts/memory_check.py [--messages 1000000]
"""

import argparse
import random
import tracemalloc
from importlib import resources

from toxlex import Message, analyze, compile_lexicon, parse_lexicon


def message_stream(count: int, seed: int = 7):
    rng = random.Random(seed)
    fillers = [f"fl{i:03d}" for i in range(200)]
    for i in range(count):
        words = [rng.choice(fillers) for _ in range(18)]
        if i % 10 == 0:
            words[3:3] = ["gas", "the", "jews"]
        yield Message(f"m{i}", "generic", " ".join(words))


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--messages", type=int, default=1_000_000)
    args = parser.parse_args()

    demo = resources.files("toxlex.data").joinpath("demo_lexicon.tsv").read_text("utf-8")
    compiled = compile_lexicon(parse_lexicon(demo))

    tracemalloc.start()
    report = analyze(message_stream(args.messages), compiled,
                     keywords=["kikes", "blood libel"], label="synthetic")
    _, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()

    print(f"analyzed {report.count:,} messages")
    print(f"mean toxicity {report.mean_toxicity:.2f}, "
          f"anti-semitic {report.pct_antisemitic:.1f}%")
    print(f"peak traced memory: {peak / 1_048_576:.1f} MiB")
    if peak > 64 * 1_048_576:
        raise SystemExit("peak memory grew beyond the streaming bound")


if __name__ == "__main__":
    main()

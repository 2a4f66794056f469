#!/usr/bin/env python3
"""Throughput experiment: compile a generated 2,000-entry lexicon and score
a synthetic 100k-message corpus single-threaded, reporting msg/s.

Run:  python scripts/benchmark_throughput.py [--messages N] [--entries N]
"""

import argparse
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from toxlex import ScoreConfig, compile_lexicon, score_message
from synthetic import generated_lexicon, synthetic_messages


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--messages", type=int, default=100_000)
    parser.add_argument("--entries", type=int, default=2_000)
    parser.add_argument("--seed", type=int, default=0xBEEF)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    lexicon = generated_lexicon(rng, size=args.entries)

    t0 = time.perf_counter()
    compiled = compile_lexicon(lexicon)
    compile_s = time.perf_counter() - t0
    print(f"compiled {len(lexicon)} entries in {compile_s * 1000:.0f} ms")

    messages = synthetic_messages(rng, lexicon, count=args.messages)
    mean_len = sum(len(m) for m in messages) / len(messages)
    print(f"generated {len(messages):,} messages, mean length {mean_len:.0f} chars")

    config = ScoreConfig()
    t0 = time.perf_counter()
    flagged = sum(
        1 for m in messages if score_message(compiled, m, config).antisemitic
    )
    elapsed = time.perf_counter() - t0
    print(f"scored in {elapsed:.2f} s -> {len(messages) / elapsed:,.0f} msg/s "
          f"({flagged:,} flagged)")


if __name__ == "__main__":
    main()

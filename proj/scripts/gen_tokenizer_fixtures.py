#!/usr/bin/env python3
"""Generate frozen tokenizer test fixtures (tests/data/gpt2_cases.jsonl).

1000 seeded random ASCII strings plus a handful of unicode/whitespace cases,
each paired with the token ids produced by the reference encoder. Also emits
a words-per-token fixture for a fixed 3-document corpus.
"""

import json
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
from gpt2_bpe_reference import Gpt2Bpe

ROOT = Path(__file__).resolve().parents[1]
VOCAB = ROOT / "tests/data/gpt2/vocab.json"
MERGES = ROOT / "tests/data/gpt2/merges.txt"
OUT = ROOT / "tests/data/gpt2_cases.jsonl"
WPT_OUT = ROOT / "tests/data/words_per_token_fixture.json"

ASCII = [chr(c) for c in range(0x20, 0x7F)] + ["\n", "\t"]


def random_ascii(rng, max_len=64):
    n = rng.randint(0, max_len)
    return "".join(rng.choice(ASCII) for _ in range(n))


def main():
    bpe = Gpt2Bpe(VOCAB, MERGES)
    rng = random.Random(20240817)
    cases = []
    for _ in range(1000):
        s = random_ascii(rng)
        cases.append({"text": s, "ids": bpe.encode(s)})
    extra = [
        "SoC",
        "hello world",
        "a  b\n\n\nc",
        "Verilog module counter; endmodule",
        "naïve café — résumé",
        "数字回路の設計",
        "   leading spaces",
        "mixed 123 numbers42 and sym!@#bols",
        "'s 't 're 've 'm 'll 'd",
        "<|endoftext|>",
    ]
    for s in extra:
        cases.append({"text": s, "ids": bpe.encode(s)})
    with open(OUT, "w", encoding="utf-8") as f:
        for c in cases:
            f.write(json.dumps(c, ensure_ascii=True) + "\n")
    print(f"wrote {len(cases)} cases to {OUT}")

    docs = [
        "The register file holds thirty two general purpose registers.",
        "Synthesis maps the netlist onto lookup tables inside the FPGA fabric.",
        "A testbench drives stimulus into the design under test and checks outputs.",
    ]
    words = sum(len(d.split()) for d in docs)
    tokens = sum(len(bpe.encode(d)) for d in docs)
    fixture = {"docs": docs, "words": words, "tokens": tokens,
               "ratio_4dp": round(words / tokens, 4)}
    WPT_OUT.write_text(json.dumps(fixture, indent=1))
    print(f"words={words} tokens={tokens} ratio={words/tokens:.4f}")

    soc = bpe.encode("SoC")
    strs = [bpe.decoder[i] for i in soc]
    assert strs == ["So", "C"], strs
    print("SoC ->", soc, strs)


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Generate NFC normalization fixtures (tests/data/nfc_cases.jsonl).

Seeded random unicode strings biased toward combining marks, Hangul jamo and
precomposed latin, with expected NFC output from Python's unicodedata.
Also dumps the codepoint sets for \\s, \\p{L}, \\p{N} (as Python's regex
module sees them) so the C++ character classifier can be checked against
the exact classes the reference tokenizer used.
"""

import json
import random
import sys
import unicodedata
from pathlib import Path

import regex

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "tests/data/nfc_cases.jsonl"
CLASSES_OUT = ROOT / "tests/data/char_classes_sample.json"

POOLS = [
    # latin + combining marks
    [chr(c) for c in range(0x41, 0x7B) if chr(c).isalpha()],
    [chr(c) for c in range(0x300, 0x370)],            # combining diacriticals
    [chr(c) for c in range(0xC0, 0x100)],             # latin-1 precomposed
    [chr(c) for c in range(0x1100, 0x1113)],          # hangul choseong
    [chr(c) for c in range(0x1161, 0x1176)],          # hangul jungseong
    [chr(c) for c in range(0x11A8, 0x11C3)],          # hangul jongseong
    [chr(c) for c in range(0xAC00, 0xAC40)],          # precomposed hangul
    ["é", "é", "ñ", "ñ", "①", "ﬁ", "Å", "Å", "ö", "ö"],
    [chr(c) for c in range(0x3040, 0x3097)],          # hiragana (incl. dakuten forms)
    [" ", "\n", "0", "1", "!", "?"],
]


def random_string(rng):
    n = rng.randint(0, 40)
    out = []
    for _ in range(n):
        pool = rng.choice(POOLS)
        out.append(rng.choice(pool))
    return "".join(out)


def main():
    rng = random.Random(7121)
    with open(OUT, "w", encoding="utf-8") as f:
        for _ in range(2000):
            s = random_string(rng)
            f.write(json.dumps({"input": s, "nfc": unicodedata.normalize("NFC", s)},
                               ensure_ascii=True) + "\n")
    print(f"wrote 2000 cases to {OUT}")

    # Sampled character-class membership for the tokenizer's pretokenizer.
    sample = list(range(0x0, 0x300)) + list(range(0x370, 0x400)) + \
        list(range(0x1000, 0x1100)) + list(range(0x2000, 0x2100)) + \
        list(range(0x3000, 0x3100)) + list(range(0xFE00, 0xFF00)) + \
        list(range(0x10000, 0x10100)) + list(range(0x1D400, 0x1D500))
    classes = {
        "space": [c for c in sample if regex.match(r"\s", chr(c))],
        "letter": [c for c in sample if regex.match(r"\p{L}", chr(c))],
        "number": [c for c in sample if regex.match(r"\p{N}", chr(c))],
        "sampled": sample,
    }
    CLASSES_OUT.write_text(json.dumps(classes))
    print(f"wrote char class sample ({len(classes['space'])} spaces, "
          f"{len(classes['letter'])} letters, {len(classes['number'])} numbers)")


if __name__ == "__main__":
    main()

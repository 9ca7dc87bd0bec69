#!/usr/bin/env python3
"""Generate the byte-level demo tokenizer (data/demo/tokenizer/).

A degenerate byte-level BPE model: the 256 byte-alphabet tokens (ids 0..255)
plus <|endoftext|> (id 256) and an empty merge list. Small vocabulary keeps
the demo training run fast while using the same file format as the published
GPT-2-style tokenizers.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
from gpt2_bpe_reference import bytes_to_unicode

OUT = Path(__file__).resolve().parents[1] / "data/demo/tokenizer"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    b2u = bytes_to_unicode()
    vocab = {b2u[b]: b for b in range(256)}
    vocab["<|endoftext|>"] = 256
    (OUT / "vocab.json").write_text(
        json.dumps(vocab, ensure_ascii=False, indent=0), encoding="utf-8")
    (OUT / "merges.txt").write_text("#version: 0.2\n", encoding="utf-8")
    print(f"wrote {len(vocab)}-entry vocab and empty merges to {OUT}")


if __name__ == "__main__":
    main()

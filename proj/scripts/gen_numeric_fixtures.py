#!/usr/bin/env python3
"""Freeze small numeric oracles used by the test suite.

- LSH banding parameters: brute-force enumeration of (b, r) with b*r <= k,
  scoring each by the false-positive + false-negative integrals of the
  S-curve 1-(1-s^r)^b around the threshold (high-resolution quadrature).
- Cross-entropy fixture for a 1x2x3 logits/targets pair, 50-digit precision.
"""

import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 50

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "tests/data/numeric_fixtures.json"


def lsh_objective(b, r, threshold):
    p = lambda s: 1 - (1 - s ** r) ** b
    fp = mp.quad(p, [0, threshold])
    fn = mp.quad(lambda s: 1 - p(s), [threshold, 1])
    return fp + fn


def choose(k, threshold):
    best = None
    for r in range(1, k + 1):
        for b in range(1, k // r + 1):
            obj = lsh_objective(b, r, threshold)
            # ties: prefer larger b*r (sharper curve), then smaller r
            key = (obj, -(b * r), r)
            if best is None or key < best[0]:
                best = (key, b, r, obj)
    return best[1], best[2], float(best[3])


def cross_entropy(logits, targets):
    total = mp.mpf(0)
    for row, t in zip(logits, targets):
        row = [mp.mpf(x) for x in row]
        mx = max(row)
        lse = mx + mp.log(mp.fsum(mp.e ** (x - mx) for x in row))
        total += lse - row[t]
    return total / len(targets)


def main():
    out = {}
    b, r, obj = choose(2, 0.5)
    out["lsh_k2_t0.5"] = {"b": b, "r": r, "objective": obj}
    print(f"k=2  t=0.5 -> b={b} r={r} obj={obj:.6f}")
    b, r, obj = choose(128, 0.8)
    out["lsh_k128_t0.8"] = {"b": b, "r": r, "objective": obj}
    print(f"k=128 t=0.8 -> b={b} r={r} obj={obj:.6f}")

    logits = [[1.0, 2.0, 3.0], [0.5, 0.0, -0.5]]
    targets = [2, 0]
    ce = cross_entropy(logits, targets)
    out["loss_1x2x3"] = {"logits": logits, "targets": targets,
                         "loss": mp.nstr(ce, 20)}
    print("loss fixture:", mp.nstr(ce, 20))

    OUT.write_text(json.dumps(out, indent=1))


if __name__ == "__main__":
    main()
